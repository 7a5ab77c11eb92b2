#include "anticanon/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "anticanon/errors.hpp"
#include "anticanon/simdiag.hpp"

namespace anticanon {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool tuple_less(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), scalar_less);
}

struct RawGroup {
  ConstantGroup group;
  std::vector<int> support;  // nonzero square-constant
  std::vector<int> active;   // nonzero restriction
  bool degenerate = false;
};

std::vector<Scalar> support_constants(const Block& b) {
  std::vector<Scalar> out;
  for (int a : b.support) out.push_back(b.constants.at(a));
  return out;
}

}  // namespace

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Kernel:
      return "kernel";
    case BlockKind::SingleOperator:
      return "single";
    case BlockKind::Clifford:
      return "clifford";
    case BlockKind::Degenerate:
      break;
  }
  return "degenerate";
}

BlockKind block_kind_from_string(const std::string& s) {
  if (s == "kernel") return BlockKind::Kernel;
  if (s == "single") return BlockKind::SingleOperator;
  if (s == "clifford") return BlockKind::Clifford;
  if (s == "degenerate") return BlockKind::Degenerate;
  throw PreconditionError("unknown block kind '" + s + "'");
}

bool DecompositionReport::has_degenerate() const {
  return std::any_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.kind == BlockKind::Degenerate; });
}

std::vector<int> DecompositionReport::clifford_counts() const {
  std::vector<int> counts(N + 1, 0);
  for (const auto& b : blocks)
    if (b.kind == BlockKind::Clifford) ++counts[b.support.size()];
  return counts;
}

Matrix block_basis(const Matrix& P, const std::vector<int>& columns) {
  Matrix out(P.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = P.col(columns[j]);
  return out;
}

OperatorFamily square_family(const OperatorFamily& fam) {
  std::vector<Matrix> ops;
  std::vector<std::string> labels;
  for (int a = 0; a < fam.size(); ++a) {
    ops.push_back(fam.op(a) * fam.op(a));
    labels.push_back(fam.label(a) + "^2");
  }
  return OperatorFamily::make(std::move(ops), std::move(labels), fam.field_mode());
}

DecompositionReport decompose(const OperatorFamily& fam, const TolerancePolicy& tol) {
  tol.validate();
  const int n = fam.dim();
  const int count = fam.size();
  const double scale2 = tol.scale * tol.scale;

  DecompositionReport rep;
  rep.n = n;
  rep.N = count;
  rep.field_mode = fam.field_mode();
  rep.labels = fam.labels();
  rep.tolerance = tol;

  const RealMatrix anti = anticommutation_residual(fam, tol);
  rep.residuals.anticommutation = anti.size() ? anti.maxCoeff() : 0.0;
  if (rep.residuals.anticommutation > tol.rel_zero) {
    std::ostringstream msg;
    msg << "family is not anti-commuting (scaled residual " << rep.residuals.anticommutation << ")";
    throw PreconditionError(msg.str());
  }
  for (int a = 0; a < count; ++a) {
    rep.classes.push_back(classify_operator(fam.op(a), tol));
    if (rep.classes.back().kind == OperatorKind::Unsupported) {
      throw PreconditionError("operator " + fam.label(a) + " is not square-diagonalizable");
    }
  }

  // (1) joint eigenbasis of the squares
  const TolerancePolicy sq_tol = tol.with_scale(scale2);
  const SimDiagResult sd = simultaneous_diagonalize(square_family(fam), sq_tol);
  rep.P = sd.P;
  rep.ill_conditioned = sd.ill_conditioned;
  rep.residuals.simdiag_offdiag = sd.offdiag_residual;

  const double zero_c = tol.rel_zero * scale2;
  const double radius_c = tol.eig_cluster * scale2;

  auto snapped = [&](Scalar c) {
    if (std::abs(c) <= zero_c) return Scalar(0.0, 0.0);
    if (std::abs(c.imag()) <= radius_c) return Scalar(c.real(), 0.0);
    return c;
  };

  // (2) group columns by clustered constant tuple; simdiag cells are the seeds
  std::vector<RawGroup> raw;
  for (const auto& [begin, end] : sd.cells) {
    std::vector<Scalar> tuple(count);
    for (int a = 0; a < count; ++a) tuple[a] = snapped(sd.diag_values(a, begin));
    auto match = std::find_if(raw.begin(), raw.end(), [&](const RawGroup& g) {
      for (int a = 0; a < count; ++a)
        if (std::abs(g.group.constants[a] - tuple[a]) > radius_c) return false;
      return true;
    });
    if (match == raw.end()) {
      RawGroup g;
      g.group.constants = tuple;
      for (int a = 0; a < count; ++a)
        if (tuple[a] != Scalar(0.0)) g.support.push_back(a);
      raw.push_back(std::move(g));
      match = std::prev(raw.end());
    }
    for (int j = begin; j < end; ++j) match->group.columns.push_back(j);
  }

  // (5)/(6) operators acting on a group where their square vanishes
  for (auto& g : raw) {
    const Matrix basis = block_basis(rep.P, g.group.columns);
    const double threshold = tol.zero_threshold() * static_cast<double>(g.group.columns.size());
    for (int a = 0; a < count; ++a) {
      const Restriction r = restrict(fam.op(a), basis, tol);
      const bool in_support = std::binary_search(g.support.begin(), g.support.end(), a);
      if (in_support || operator_norm(r.matrix) > threshold) g.active.push_back(a);
      if (!in_support && operator_norm(r.matrix) > threshold) {
        if (rep.classes[a].kind == OperatorKind::Diagonalizable) {
          std::ostringstream msg;
          msg << "diagonalizable operator " << fam.label(a) << " is nonzero (norm " << operator_norm(r.matrix)
              << ") on a " << g.group.columns.size() << "-dimensional subspace where its square vanishes";
          throw InconsistentSpectrum(msg.str());
        }
        g.degenerate = true;
      }
    }
  }

  // (3) blocks
  std::vector<Block> blocks;
  Block kernel;
  kernel.kind = BlockKind::Kernel;
  std::map<int, Block> singles;
  for (auto& g : raw) {
    if (g.degenerate) {
      Block b;
      b.kind = BlockKind::Degenerate;
      b.support = g.active;
      for (int a : b.support) b.constants[a] = g.group.constants[a];
      b.columns = g.group.columns;
      b.groups.push_back(g.group);
      b.note = "degenerate Clifford regime: an operator is nonzero where its square vanishes; no canonical form";
      blocks.push_back(std::move(b));
    } else if (g.support.empty()) {
      kernel.columns.insert(kernel.columns.end(), g.group.columns.begin(), g.group.columns.end());
      kernel.groups.push_back(g.group);
    } else if (g.support.size() == 1) {
      const int a = g.support.front();
      Block& b = singles[a];
      b.kind = BlockKind::SingleOperator;
      b.support = g.support;
      if (b.constants.empty()) b.constants[a] = g.group.constants[a];
      b.columns.insert(b.columns.end(), g.group.columns.begin(), g.group.columns.end());
      b.groups.push_back(g.group);
    } else {
      Block b;
      b.kind = BlockKind::Clifford;
      b.support = g.support;
      for (int a : b.support) b.constants[a] = g.group.constants[a];
      b.columns = g.group.columns;
      b.groups.push_back(g.group);
      blocks.push_back(std::move(b));
    }
  }
  if (!kernel.columns.empty()) blocks.push_back(std::move(kernel));
  for (auto& [a, b] : singles) blocks.push_back(std::move(b));

  // (4) restrictions and residuals
  rep.real_structure = true;
  for (auto& b : blocks) {
    std::sort(b.columns.begin(), b.columns.end());
    const Matrix basis = block_basis(rep.P, b.columns);
    for (int a = 0; a < count; ++a) {
      const Restriction r = restrict(fam.op(a), basis, tol);
      b.invariance_leak = std::max(b.invariance_leak, r.leak);
      if (std::binary_search(b.support.begin(), b.support.end(), a)) b.restrictions.push_back(r.matrix);
    }
    if (b.kind == BlockKind::Clifford || b.kind == BlockKind::SingleOperator) {
      for (const auto& g : b.groups) {
        const Matrix gbasis = block_basis(rep.P, g.columns);
        const auto k = static_cast<Eigen::Index>(g.columns.size());
        for (int a : b.support) {
          const Matrix r = restrict(fam.op(a), gbasis, tol).matrix;
          const double defect = (r * r - g.constants[a] * Matrix::Identity(k, k)).norm() / (scale2 + 1.0);
          b.constancy_residual = std::max(b.constancy_residual, defect);
        }
      }
    }
    if (b.kind == BlockKind::Clifford) {
      for (std::size_t i = 0; i < b.support.size(); ++i) {
        for (std::size_t j = i + 1; j < b.support.size(); ++j) {
          const Matrix& x = b.restrictions[i];
          const Matrix& y = b.restrictions[j];
          rep.residuals.block_anticommutation =
              std::max(rep.residuals.block_anticommutation, (x * y + y * x).norm() / (scale2 + 1.0));
        }
      }
    }
    for (const auto& g : b.groups)
      for (const Scalar& c : g.constants)
        if (c.imag() != 0.0) rep.real_structure = false;
    rep.residuals.invariance = std::max(rep.residuals.invariance, b.invariance_leak);
    rep.residuals.constancy = std::max(rep.residuals.constancy, b.constancy_residual);
  }

  if (fam.field_mode() == FieldMode::Real) {
    if (!rep.real_structure) {
      rep.notes.push_back("no real block structure claimed: some squared operator has non-real eigenvalues");
    } else {
      for (auto& b : blocks) {
        if (b.kind != BlockKind::Clifford) continue;
        Signature s;
        for (int a : b.support) (b.constants.at(a).real() > 0.0 ? s.p : s.q) += 1;
        b.signature = s;
        b.note = "real canonical basis not constructed; complex canonical form available";
      }
    }
  }

  // deterministic order: support size, support, constants, lowest column
  std::sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) {
    if (x.support.size() != y.support.size()) return x.support.size() < y.support.size();
    if (x.support != y.support) return x.support < y.support;
    const auto cx = support_constants(x);
    const auto cy = support_constants(y);
    if (tuple_less(cx, cy)) return true;
    if (tuple_less(cy, cx)) return false;
    return x.columns.front() < y.columns.front();
  });
  rep.blocks = std::move(blocks);

  int total = 0;
  for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
    const Block& b = rep.blocks[i];
    total += b.dim();
    if (rep.support_groups.empty() || rep.support_groups.back().support != b.support) {
      rep.support_groups.push_back({b.support, {}});
    }
    rep.support_groups.back().blocks.push_back(static_cast<int>(i));
  }
  if (total != n) throw std::logic_error("decompose: block dimensions do not sum to n");

  std::vector<int> distinct(count + 1, 0);
  for (const auto& sg : rep.support_groups) {
    const bool clifford = std::any_of(sg.blocks.begin(), sg.blocks.end(), [&](int i) {
      return rep.blocks[i].kind == BlockKind::Clifford;
    });
    if (clifford) ++distinct[sg.support.size()];
  }
  for (int i = 2; i <= count; ++i) {
    if (distinct[i] > binomial(count, i)) throw std::logic_error("decompose: support-count bound violated");
  }
  return rep;
}

double verify_block_invariance(const DecompositionReport& rep, const OperatorFamily& fam,
                               const TolerancePolicy& tol) {
  double worst = 0.0;
  for (const auto& b : rep.blocks) {
    if (b.columns.empty()) continue;
    const Matrix basis = block_basis(rep.P, b.columns);
    for (int a = 0; a < fam.size(); ++a) worst = std::max(worst, restrict(fam.op(a), basis, tol).leak);
  }
  return worst;
}

}  // namespace anticanon
