#include "anticanon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "anticanon/errors.hpp"

namespace anticanon::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, Scalar(0.0, -1.0), Scalar(0.0, 1.0), 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

// [[Re G, -Im G], [Im G, Re G]]: an algebra homomorphism into real matrices.
Matrix realify(const Matrix& g) {
  const Eigen::Index k = g.rows();
  Matrix out = Matrix::Zero(2 * k, 2 * k);
  out.topLeftCorner(k, k) = g.real().cast<Scalar>();
  out.topRightCorner(k, k) = (-g.imag()).cast<Scalar>();
  out.bottomLeftCorner(k, k) = g.imag().cast<Scalar>();
  out.bottomRightCorner(k, k) = g.real().cast<Scalar>();
  return out;
}

std::string describe(const ExpectedBlock& b) {
  std::ostringstream os;
  os << to_string(b.kind) << " support {";
  for (std::size_t i = 0; i < b.support.size(); ++i) os << (i ? "," : "") << b.support[i];
  os << "}";
  if (!b.constants.empty()) {
    os << " constants (";
    for (std::size_t i = 0; i < b.constants.size(); ++i) {
      os << (i ? "," : "") << b.constants[i].real();
      if (b.constants[i].imag() != 0.0) os << (b.constants[i].imag() > 0 ? "+" : "") << b.constants[i].imag() << "i";
    }
    os << ")";
  }
  os << " dim " << b.dim;
  return os.str();
}

bool constants_close(const std::vector<Scalar>& x, const std::vector<Scalar>& y, double rel_tol) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - y[i]) > rel_tol * std::max(1.0, std::abs(x[i]))) return false;
  }
  return true;
}

// Merge entries with equal (kind, support, constants), summing dims.
std::vector<ExpectedBlock> normalized(const std::vector<ExpectedBlock>& in, double rel_tol) {
  std::vector<ExpectedBlock> out;
  for (const auto& b : in) {
    auto it = std::find_if(out.begin(), out.end(), [&](const ExpectedBlock& o) {
      return o.kind == b.kind && o.support == b.support && constants_close(o.constants, b.constants, rel_tol);
    });
    if (it == out.end()) {
      out.push_back(b);
    } else {
      it->dim += b.dim;
    }
  }
  return out;
}

std::vector<Scalar> spec_constants(const BlockSpec& s) {
  std::vector<Scalar> c;
  for (int a : s.support) c.push_back(s.constants.at(a));
  return c;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {}

std::uint64_t Rng::next() {
  // SplitMix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

double Rng::normal() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
}

int clifford_dim_unit(int generators, FieldMode mode) {
  const int unit = 1 << (generators / 2);
  return mode == FieldMode::Real ? 2 * unit : unit;
}

std::vector<Matrix> gamma_matrices(int m) {
  if (m < 0) throw InvalidSpec("gamma_matrices: negative count");
  const int k = m / 2;
  auto tensor = [&](int position, const Matrix& seed) {
    Matrix out = Matrix::Identity(1, 1);
    for (int j = 0; j < k; ++j) {
      if (j < position) {
        out = kron(out, pauli_z());
      } else if (j == position) {
        out = kron(out, seed);
      } else {
        out = kron(out, Matrix::Identity(2, 2));
      }
    }
    return out;
  };
  std::vector<Matrix> gammas;
  for (int j = 0; j < k; ++j) {
    gammas.push_back(tensor(j, pauli_x()));
    gammas.push_back(tensor(j, pauli_y()));
  }
  if (m % 2 == 1) gammas.push_back(tensor(k, Matrix()));
  return gammas;
}

BuiltFamily build_family(const std::vector<BlockSpec>& specs, int N, FieldMode mode, std::vector<std::string> labels) {
  if (specs.empty()) throw InvalidSpec("no block specs");
  if (N < 1) throw InvalidSpec("family size N must be positive");

  int n = 0;
  for (const auto& s : specs) {
    if (s.dim < 1) throw InvalidSpec("block dimension must be positive");
    n += s.dim;
  }

  const bool placed = !specs.front().positions.empty();
  std::vector<std::vector<int>> where;
  {
    std::vector<int> used(n, 0);
    int next = 0;
    for (const auto& s : specs) {
      if (placed != !s.positions.empty()) throw InvalidSpec("positions must be given for every block or none");
      std::vector<int> pos = s.positions;
      if (!placed) {
        pos.resize(s.dim);
        std::iota(pos.begin(), pos.end(), next);
        next += s.dim;
      }
      if (static_cast<int>(pos.size()) != s.dim) throw InvalidSpec("positions length differs from block dim");
      for (int p : pos) {
        if (p < 0 || p >= n || used[p]++) throw InvalidSpec("positions do not form a permutation of 0..n-1");
      }
      where.push_back(std::move(pos));
    }
  }

  std::vector<Matrix> ops(N, Matrix::Zero(n, n));
  Skeleton skel;
  skel.n = n;
  skel.N = N;

  for (std::size_t bi = 0; bi < specs.size(); ++bi) {
    const BlockSpec& s = specs[bi];
    std::vector<int> support = s.support;
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end()) throw InvalidSpec("repeated support index");
    for (int a : support)
      if (a < 0 || a >= N) throw InvalidSpec("support index " + std::to_string(a) + " out of range");

    const bool needs_constants = s.kind == BlockKind::SingleOperator || s.kind == BlockKind::Clifford;
    if (needs_constants) {
      for (int a : support) {
        auto it = s.constants.find(a);
        if (it == s.constants.end() || std::abs(it->second) == 0.0) {
          throw InvalidSpec("block " + std::to_string(bi) + " needs a nonzero constant for operator " + std::to_string(a));
        }
        if (mode == FieldMode::Real && it->second.imag() != 0.0) {
          throw InvalidSpec("real-mode constants must be real");
        }
      }
    }

    Rng rng(s.seed);
    std::vector<Matrix> local(N, Matrix::Zero(s.dim, s.dim));
    switch (s.kind) {
      case BlockKind::Kernel:
        if (!support.empty()) throw InvalidSpec("kernel block cannot have a support");
        break;
      case BlockKind::SingleOperator: {
        if (support.size() != 1) throw InvalidSpec("single-operator block needs exactly one support index");
        const int a = support.front();
        const Scalar c = s.constants.at(a);
        if (mode == FieldMode::Real && c.real() < 0.0) {
          if (s.dim % 2) throw InvalidSpec("real single-operator block with negative constant needs even dim");
          const double r = std::sqrt(-c.real());
          for (int j = 0; j < s.dim; j += 2) {
            const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
            local[a](j, j + 1) = sign * r;
            local[a](j + 1, j) = -sign * r;
          }
        } else {
          const Scalar root = principal_sqrt(c);
          for (int j = 0; j < s.dim; ++j) local[a](j, j) = (rng.uniform() < 0.5 ? 1.0 : -1.0) * root;
        }
        break;
      }
      case BlockKind::Clifford: {
        const int m = static_cast<int>(support.size());
        if (m < 2) throw InvalidSpec("clifford block needs at least two support indices");
        const int unit = clifford_dim_unit(m, mode);
        if (s.dim % unit) {
          throw InvalidSpec("clifford block with " + std::to_string(m) + " generators needs dim divisible by " +
                            std::to_string(unit));
        }
        const std::vector<Matrix> gammas = gamma_matrices(m);
        const int copies = s.dim / unit;
        Matrix signs = Matrix::Identity(copies, copies);
        if (m % 2 == 1) {
          for (int c = 0; c < copies; ++c) signs(c, c) = rng.uniform() < 0.5 ? 1.0 : -1.0;
        }
        for (int x = 0; x < m; ++x) {
          const int a = support[x];
          const Matrix& sel = (m % 2 == 1 && x == m - 1) ? signs : Matrix(Matrix::Identity(copies, copies));
          const Matrix g = principal_sqrt(s.constants.at(a)) * gammas[x];
          local[a] = mode == FieldMode::Real ? realify(kron(sel, g)) : kron(sel, g);
        }
        break;
      }
      case BlockKind::Degenerate: {
        if (support.empty()) throw InvalidSpec("degenerate block needs a support");
        if (s.dim % 2) throw InvalidSpec("degenerate block needs even dim");
        for (int a : support)
          for (int j = 0; j < s.dim; j += 2) local[a](j, j + 1) = 1.0;
        break;
      }
    }

    for (int a = 0; a < N; ++a)
      for (int i = 0; i < s.dim; ++i)
        for (int j = 0; j < s.dim; ++j) ops[a](where[bi][i], where[bi][j]) = local[a](i, j);
  }

  // Expected skeleton. Degenerate specs share the zero constant tuple with
  // kernel specs, so they merge with them into one degenerate block.
  const bool any_degenerate =
      std::any_of(specs.begin(), specs.end(), [](const BlockSpec& s) { return s.kind == BlockKind::Degenerate; });
  ExpectedBlock zero_group{any_degenerate ? BlockKind::Degenerate : BlockKind::Kernel, {}, {}, 0};
  std::map<int, int> single_dims;
  for (const auto& s : specs) {
    std::vector<int> support = s.support;
    std::sort(support.begin(), support.end());
    switch (s.kind) {
      case BlockKind::Kernel:
        zero_group.dim += s.dim;
        break;
      case BlockKind::Degenerate:
        zero_group.dim += s.dim;
        for (int a : support)
          if (std::find(zero_group.support.begin(), zero_group.support.end(), a) == zero_group.support.end())
            zero_group.support.push_back(a);
        std::sort(zero_group.support.begin(), zero_group.support.end());
        break;
      case BlockKind::SingleOperator:
        single_dims[support.front()] += s.dim;
        break;
      case BlockKind::Clifford: {
        BlockSpec sorted = s;
        sorted.support = support;
        skel.blocks.push_back({BlockKind::Clifford, support, spec_constants(sorted), s.dim});
        break;
      }
    }
  }
  if (zero_group.dim > 0) skel.blocks.push_back(zero_group);
  for (const auto& [a, d] : single_dims) skel.blocks.push_back({BlockKind::SingleOperator, {a}, {}, d});

  BuiltFamily out{OperatorFamily::make(std::move(ops), std::move(labels), mode), std::move(skel)};
  return out;
}

Matrix random_conjugator(int n, const ScrambleSpec& s, FieldMode mode) {
  if (!(s.conj_cond_max >= 1.0)) throw InvalidSpec("conj_cond_max must be >= 1");
  Rng rng(s.perm_seed ^ 0x5DEECE66DULL);
  const int reflections = s.reflections < 0 ? n : s.reflections;

  auto householders = [&]() {
    Matrix h = Matrix::Identity(n, n);
    for (int r = 0; r < reflections; ++r) {
      Vector v(n);
      for (int i = 0; i < n; ++i) {
        v(i) = mode == FieldMode::Real ? Scalar(rng.normal(), 0.0) : Scalar(rng.normal(), rng.normal());
      }
      const double norm2 = v.squaredNorm();
      if (norm2 == 0.0) continue;
      h = h - (2.0 / norm2) * (h * v) * v.adjoint();
    }
    return h;
  };

  const Matrix left = householders();
  Vector d = Vector::Ones(n);
  if (n >= 2 && s.conj_cond_max > 1.0) {
    const double log_max = std::log(s.conj_cond_max);
    for (int i = 1; i + 1 < n; ++i) d(i) = std::exp(rng.uniform(0.0, log_max));
    d(n - 1) = s.conj_cond_max;
  }
  const Matrix right = householders();
  return left * d.asDiagonal() * right;
}

OperatorFamily conjugate(const OperatorFamily& fam, const Matrix& S) {
  if (S.rows() != fam.dim() || S.cols() != fam.dim()) throw PreconditionError("conjugate: size mismatch");
  const auto lu = S.fullPivLu();
  if (!lu.isInvertible()) throw PreconditionError("conjugate: S is singular");
  std::vector<Matrix> ops;
  for (const auto& m : fam.ops()) {
    Matrix c = lu.solve(m * S);
    if (fam.field_mode() == FieldMode::Real) c = c.real().cast<Scalar>();
    ops.push_back(std::move(c));
  }
  return OperatorFamily::make(std::move(ops), fam.labels(), fam.field_mode());
}

OperatorFamily scramble(const OperatorFamily& fam, const ScrambleSpec& s) {
  if (!(s.noise >= 0.0)) throw InvalidSpec("noise must be non-negative");
  const int n = fam.dim();
  Rng rng(s.perm_seed);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.integer(0, i)]);

  std::vector<Matrix> permuted;
  for (const auto& m : fam.ops()) {
    Matrix p(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(i, j) = m(perm[i], perm[j]);
    permuted.push_back(std::move(p));
  }
  const OperatorFamily shuffled = OperatorFamily::make(std::move(permuted), fam.labels(), fam.field_mode());
  OperatorFamily out = conjugate(shuffled, random_conjugator(n, s, fam.field_mode()));
  if (s.noise == 0.0) return out;

  Rng noise_rng(s.perm_seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  std::vector<Matrix> noisy;
  for (const auto& m : out.ops()) {
    Matrix x = m;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double re = s.noise * noise_rng.normal();
        const double im = fam.field_mode() == FieldMode::Real ? 0.0 : s.noise * noise_rng.normal();
        x(i, j) += Scalar(re, im);
      }
    noisy.push_back(std::move(x));
  }
  return OperatorFamily::make(std::move(noisy), fam.labels(), fam.field_mode());
}

Skeleton skeleton_of(const DecompositionReport& rep) {
  Skeleton s;
  s.n = rep.n;
  s.N = rep.N;
  for (const auto& b : rep.blocks) {
    ExpectedBlock e{b.kind, b.support, {}, b.dim()};
    if (b.kind == BlockKind::Clifford)
      for (int a : b.support) e.constants.push_back(b.constants.at(a));
    s.blocks.push_back(std::move(e));
  }
  return s;
}

Comparison compare_skeletons(const Skeleton& expected, const Skeleton& actual, double rel_tol) {
  Comparison out;
  std::ostringstream diff;
  if (expected.n != actual.n || expected.N != actual.N) {
    diff << "shape mismatch: expected n=" << expected.n << " N=" << expected.N << ", got n=" << actual.n
         << " N=" << actual.N << "\n";
  }
  const auto want = normalized(expected.blocks, rel_tol);
  auto have = normalized(actual.blocks, rel_tol);
  std::vector<bool> used(have.size(), false);
  for (const auto& w : want) {
    bool found = false;
    for (std::size_t i = 0; i < have.size(); ++i) {
      if (used[i] || have[i].kind != w.kind || have[i].support != w.support) continue;
      if (!constants_close(have[i].constants, w.constants, rel_tol)) continue;
      used[i] = true;
      found = true;
      if (have[i].dim != w.dim) {
        diff << "dimension mismatch for " << describe(w) << ": got dim " << have[i].dim << "\n";
      }
      break;
    }
    if (!found) diff << "missing block: " << describe(w) << "\n";
  }
  for (std::size_t i = 0; i < have.size(); ++i)
    if (!used[i]) diff << "unexpected block: " << describe(have[i]) << "\n";
  out.diff = diff.str();
  out.match = out.diff.empty();
  return out;
}

Comparison compare_reports(const Skeleton& expected, const DecompositionReport& actual, double rel_tol) {
  return compare_skeletons(expected, skeleton_of(actual), rel_tol);
}

std::vector<BlockSpec> worked_example_specs() {
  // Operator indices: A1..A5 -> 0..4. Positions: X_k -> k-1.
  std::vector<BlockSpec> specs;
  auto add = [&](BlockKind kind, std::vector<int> support, std::vector<Scalar> constants, std::vector<int> xs,
                 std::uint64_t seed) {
    BlockSpec s;
    s.kind = kind;
    s.dim = static_cast<int>(xs.size());
    s.support = support;
    for (std::size_t i = 0; i < support.size(); ++i) s.constants[support[i]] = constants[i];
    for (int x : xs) s.positions.push_back(x - 1);
    s.seed = seed;
    specs.push_back(std::move(s));
  };
  add(BlockKind::Kernel, {}, {}, {18}, 1);
  add(BlockKind::SingleOperator, {3}, {4.0}, {1}, 2);
  add(BlockKind::SingleOperator, {3}, {9.0}, {20}, 3);
  add(BlockKind::SingleOperator, {1}, {2.0}, {9}, 4);
  add(BlockKind::Clifford, {2, 4}, {4.0, 9.0}, {2, 4}, 5);
  add(BlockKind::Clifford, {1, 3}, {1.0, -4.0}, {3, 7, 11, 13, 15, 17}, 6);
  add(BlockKind::Clifford, {0, 2, 4}, {1.0, 1.0, 1.0}, {6, 8}, 7);
  add(BlockKind::Clifford, {0, 2, 4}, {4.0, 9.0, 1.0}, {10, 14}, 8);
  add(BlockKind::Clifford, {0, 2, 3, 4}, {2.0, 3.0, 5.0, 7.0}, {5, 12, 16, 19}, 9);
  return specs;
}

std::vector<CorpusCase> sample_corpus(int count, std::uint64_t seed, int max_dim, int max_N) {
  if (max_dim < 4 || max_N < 2) throw InvalidSpec("corpus needs max_dim >= 4 and max_N >= 2");
  const std::vector<Scalar> complex_pool = {1.0, 2.0, 3.0, 4.0, 5.0, 9.0, -1.0, -2.0, -4.0,
                                            Scalar(1.0, 1.0), Scalar(2.0, -1.0), Scalar(0.0, 3.0)};
  const std::vector<Scalar> real_pool = {1.0, 2.0, 3.0, 4.0, 5.0, 9.0, -1.0, -2.0, -4.0};

  std::vector<CorpusCase> corpus;
  for (int i = 0; i < count; ++i) {
    Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(i));
    CorpusCase c;
    const int feature = i % 10;
    c.mode = (i % 7 == 5) ? FieldMode::Real : FieldMode::Complex;
    c.N = (i == 0 || feature == 9) ? 1 : rng.integer(1, max_N);
    if (feature == 2) c.N = std::max(c.N, 2);
    const auto& pool = c.mode == FieldMode::Real ? real_pool : complex_pool;
    auto pick = [&]() { return pool[rng.integer(0, static_cast<int>(pool.size()) - 1)]; };

    const int target = rng.integer(std::min(6, max_dim), max_dim);
    int total = 0;
    std::uint64_t block_seed = rng.next();

    auto push = [&](BlockSpec s) {
      s.seed = block_seed++;
      total += s.dim;
      c.specs.push_back(std::move(s));
    };
    auto random_support = [&](int m) {
      std::vector<int> idx(c.N);
      std::iota(idx.begin(), idx.end(), 0);
      for (int k = c.N - 1; k > 0; --k) std::swap(idx[k], idx[rng.integer(0, k)]);
      idx.resize(m);
      std::sort(idx.begin(), idx.end());
      return idx;
    };
    auto clifford = [&](std::vector<int> support, int dim) {
      BlockSpec s;
      s.kind = BlockKind::Clifford;
      s.dim = dim;
      s.support = support;
      for (int a : support) s.constants[a] = pick();
      return s;
    };
    auto single = [&](int a, int dim) {
      BlockSpec s;
      s.kind = BlockKind::SingleOperator;
      s.dim = dim;
      s.support = {a};
      Scalar v = pick();
      if (c.mode == FieldMode::Real && dim % 2 == 1) v = std::abs(v.real());
      s.constants[a] = v;
      return s;
    };

    if (feature != 1 && rng.uniform() < 0.6) {
      BlockSpec k;
      k.kind = BlockKind::Kernel;
      k.dim = rng.integer(1, 2);
      push(k);
    }
    if (feature == 2) {
      // same support, different constants
      const auto support = random_support(2);
      const int unit = clifford_dim_unit(2, c.mode);
      BlockSpec first = clifford(support, unit);
      BlockSpec second = first;
      for (auto& [a, v] : second.constants) v += 10.0;
      push(first);
      push(second);
    }
    if (feature == 3 || c.N == 1) push(single(rng.integer(0, c.N - 1), c.mode == FieldMode::Real ? 3 : 2 * rng.integer(0, 1) + 1));
    if (feature == 4) {
      BlockSpec d;
      d.kind = BlockKind::Degenerate;
      d.dim = 2;
      d.support = {rng.integer(0, c.N - 1)};
      push(d);
    }

    for (int attempt = 0; attempt < 40 && total < target; ++attempt) {
      const int room = max_dim - total;
      if (c.N >= 2 && rng.uniform() < 0.7) {
        const int m = rng.integer(2, std::min(c.N, 5));
        const int unit = clifford_dim_unit(m, c.mode);
        const int copies = rng.integer(1, 2);
        if (unit * copies <= room) {
          push(clifford(random_support(m), unit * copies));
        } else if (unit <= room) {
          push(clifford(random_support(m), unit));
        }
      } else {
        const int dim = std::min(room, rng.integer(1, 3));
        if (dim >= 1) {
          const int a = rng.integer(0, c.N - 1);
          BlockSpec s = single(a, dim);
          if (c.mode == FieldMode::Real && s.constants[a].real() < 0.0 && dim % 2) s.constants[a] = -s.constants[a];
          push(s);
        }
      }
    }
    if (c.specs.empty()) push(single(0, 1));

    c.scramble.conj_cond_max = rng.uniform(1.0, 50.0);
    if (i % 5 == 0) c.scramble.conj_cond_max = 50.0;
    c.scramble.perm_seed = rng.next();
    c.scramble.noise = 0.0;

    std::ostringstream name;
    name << "case" << i << "_N" << c.N << "_n" << total << (c.mode == FieldMode::Real ? "_real" : "");
    c.name = name.str();
    corpus.push_back(std::move(c));
  }
  return corpus;
}

}  // namespace anticanon::oracle
