#include "anticanon/canonical.hpp"

#include <algorithm>
#include <sstream>

#include "anticanon/errors.hpp"

namespace anticanon {

namespace {

const Scalar kI(0.0, 1.0);

Matrix eigenspace(const Matrix& h, Scalar value, double threshold) {
  return null_space(h - value * Matrix::Identity(h.rows(), h.rows()), threshold);
}

double local_scale(const std::vector<Matrix>& ops, double floor) {
  double s = floor;
  for (const auto& m : ops) s = std::max(s, operator_norm(m));
  return s;
}

struct Level {
  Matrix basis;
  std::vector<Matrix> generators;
};

// Unit generators h (h[a]^2 = I, pairwise anti-commuting) on a space of dimension `dim`.
Level halve(const std::vector<Matrix>& h, int dim, int depth, double threshold, std::vector<RecursionStep>& trace,
            int& max_depth) {
  max_depth = std::max(max_depth, depth);
  RecursionStep step{depth, dim, static_cast<int>(h.size()), 0};
  Level out;

  if (h.empty()) {
    trace.push_back(step);
    out.basis = Matrix::Identity(dim, dim);
    return out;
  }
  if (h.size() >= 2 && dim % 2 != 0) {
    throw DimensionObstruction("cannot halve a " + std::to_string(dim) + "-dimensional space carrying " +
                               std::to_string(h.size()) + " anti-commuting generators");
  }

  const Matrix plus = eigenspace(h[0], 1.0, threshold);
  const Matrix minus = eigenspace(h[0], -1.0, threshold);
  step.plus_dim = static_cast<int>(plus.cols());
  trace.push_back(step);
  if (plus.cols() + minus.cols() != dim) {
    throw NonConstantSquare("first generator is not diagonalizable with eigenvalues +-1 at depth " +
                            std::to_string(depth));
  }

  if (h.size() == 1) {
    out.basis.resize(dim, dim);
    out.basis << plus, minus;
    Matrix g = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) g(i, i) = i < plus.cols() ? 1.0 : -1.0;
    out.generators.push_back(std::move(g));
    return out;
  }

  const int half = dim / 2;
  if (plus.cols() != half) {
    throw DimensionObstruction("eigenspaces of the first generator have unequal dimensions " +
                               std::to_string(plus.cols()) + " and " + std::to_string(minus.cols()) +
                               " at depth " + std::to_string(depth));
  }

  // Basis [X | Y] with Y = h1 X: h0 -> diag(I, -I), h1 -> [[0, I], [I, 0]].
  Matrix frame(dim, dim);
  frame << plus, h[1] * plus;
  const auto lu = frame.fullPivLu();
  if (!lu.isInvertible()) {
    throw DimensionObstruction("second generator does not map the +1 eigenspace onto the -1 eigenspace");
  }

  // Remaining generators are [[0, -E], [E, 0]] in this basis with E^2 = -I;
  // the i*E pairwise anti-commute and square to I.
  std::vector<Matrix> sub;
  for (std::size_t a = 2; a < h.size(); ++a) {
    const Matrix c = lu.solve(h[a] * frame);
    sub.push_back(kI * c.bottomLeftCorner(half, half));
  }
  const Level inner = halve(sub, half, depth + 1, threshold, trace, max_depth);

  out.basis.resize(dim, dim);
  out.basis << plus * inner.basis, h[1] * plus * inner.basis;

  const Matrix id = Matrix::Identity(half, half);
  const Matrix zero = Matrix::Zero(half, half);
  Matrix g0(dim, dim);
  g0 << id, zero, zero, -id;
  Matrix g1(dim, dim);
  g1 << zero, id, id, zero;
  out.generators.push_back(std::move(g0));
  out.generators.push_back(std::move(g1));
  for (const Matrix& gi : inner.generators) {
    Matrix g(dim, dim);
    g << zero, kI * gi, -kI * gi, zero;
    out.generators.push_back(std::move(g));
  }
  return out;
}

}  // namespace

PairCanonicalForm pair_canonical_form(const Matrix& A, const Matrix& B, const TolerancePolicy& tol) {
  tol.validate();
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw PreconditionError("pair_canonical_form: A and B must be square of equal size");
  }
  const int k = static_cast<int>(A.rows());
  const double s = local_scale({A, B}, tol.scale);
  const TolerancePolicy t = tol.with_scale(s);
  const double s2 = s * s + 1.0;

  if ((A * B + B * A).norm() / s2 > t.rel_zero) throw PreconditionError("pair_canonical_form: A and B do not anti-commute");
  if (k % 2 != 0) throw OddDimension("pair_canonical_form: block dimension " + std::to_string(k) + " is odd");

  const Matrix a2 = A * A;
  const Scalar lambda2 = a2.trace() / static_cast<double>(k);
  if ((a2 - lambda2 * Matrix::Identity(k, k)).norm() / s2 > t.eig_cluster) {
    throw NonConstantSquare("pair_canonical_form: A^2 is not a constant multiple of the identity");
  }
  if (std::abs(lambda2) <= t.rel_zero * s * s) throw PreconditionError("pair_canonical_form: A must be nonsingular");
  if (numerical_rank(B, t.zero_threshold()) < k) {
    throw SingularB("pair_canonical_form: B is singular on the block; split off Ker(B) first");
  }

  PairCanonicalForm out;
  out.lambda = principal_sqrt(lambda2);
  const Matrix plus = eigenspace(A, out.lambda, t.cluster_radius());
  const Matrix minus = eigenspace(A, -out.lambda, t.cluster_radius());
  if (plus.cols() + minus.cols() != k) throw NonConstantSquare("pair_canonical_form: A is not diagonalizable");
  if (plus.cols() != minus.cols()) throw SingularB("pair_canonical_form: eigenspaces of A have unequal dimensions");
  const int half = k / 2;

  const Matrix b2 = B * B;
  const Restriction on_plus = restrict(b2, plus, t.with_scale(s * s));
  const EigResult e = eig(on_plus.matrix, t.with_scale(s * s));
  if (!e.ok) throw NotDiagonalizable("pair_canonical_form: B^2 is not diagonalizable on W+", on_plus.leak);

  Matrix x = plus * e.vectors;
  for (int j = 0; j < half; ++j) x.col(j).normalize();
  out.local_basis.resize(k, k);
  out.local_basis << x, B * x;
  out.D = e.values;

  const Matrix id = Matrix::Identity(half, half);
  const Matrix zero = Matrix::Zero(half, half);
  Matrix d = Matrix::Zero(half, half);
  for (int j = 0; j < half; ++j) d(j, j) = out.D[j];
  out.canon_A.resize(k, k);
  out.canon_A << out.lambda * id, zero, zero, -out.lambda * id;
  out.canon_B.resize(k, k);
  out.canon_B << zero, d, id, zero;
  out.canon_B2.resize(k, k);
  out.canon_B2 << d, zero, zero, d;

  const auto lu = out.local_basis.partialPivLu();
  out.residual = std::max({(lu.solve(A * out.local_basis) - out.canon_A).norm(),
                           (lu.solve(B * out.local_basis) - out.canon_B).norm(),
                           (lu.solve(b2 * out.local_basis) - out.canon_B2).norm()});
  return out;
}

CliffordCanonicalForm clifford_canonical_form(const std::vector<Matrix>& ops, const std::vector<Scalar>& constants,
                                              const TolerancePolicy& tol) {
  tol.validate();
  if (ops.empty()) throw PreconditionError("clifford_canonical_form: no operators");
  if (ops.size() != constants.size()) throw PreconditionError("clifford_canonical_form: one constant per operator");
  const auto k = ops.front().rows();
  for (const auto& m : ops) {
    if (m.rows() != k || m.cols() != k) throw PreconditionError("clifford_canonical_form: ragged block operators");
  }
  const int dim = static_cast<int>(k);
  if (ops.size() >= 2 && dim % 2 != 0) {
    throw DimensionObstruction("a " + std::to_string(dim) + "-dimensional block cannot carry " +
                               std::to_string(ops.size()) + " anti-commuting generators");
  }

  CliffordCanonicalForm out;
  std::vector<Matrix> unit;
  for (std::size_t a = 0; a < ops.size(); ++a) {
    if (std::abs(constants[a]) == 0.0) throw NonConstantSquare("clifford_canonical_form: zero square-constant");
    out.normalizers.push_back(principal_sqrt(constants[a]));
    unit.push_back(ops[a] / out.normalizers.back());
  }
  const double s = local_scale(unit, 1.0);
  const Matrix id = Matrix::Identity(k, k);
  for (std::size_t a = 0; a < unit.size(); ++a) {
    if ((unit[a] * unit[a] - id).norm() / (s * s + 1.0) > tol.eig_cluster) {
      std::ostringstream msg;
      msg << "clifford_canonical_form: operator " << a << " does not square to its constant " << constants[a];
      throw NonConstantSquare(msg.str());
    }
  }

  const Level top = halve(unit, dim, 0, tol.eig_cluster * s, out.recursion_trace, out.depth);
  out.local_basis = top.basis;
  out.generators = top.generators;

  const auto lu = out.local_basis.partialPivLu();
  for (std::size_t a = 0; a < ops.size(); ++a) {
    const Matrix conj = lu.solve(ops[a] * out.local_basis);
    out.residual = std::max(out.residual, (conj - out.normalizers[a] * out.generators[a]).norm());
  }
  return out;
}

CanonicalResult apply_canonical(const DecompositionReport& rep, const OperatorFamily& fam,
                                const TolerancePolicy& tol) {
  CanonicalResult out;
  for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
    const Block& b = rep.blocks[i];
    BlockForm f;
    f.block = static_cast<int>(i);
    const Matrix basis = block_basis(rep.P, b.columns);

    switch (b.kind) {
      case BlockKind::Kernel:
        f.note = "common kernel: every operator vanishes";
        break;
      case BlockKind::Degenerate:
        f.skipped = true;
        f.note = "skipped: canonical forms for degenerate Clifford algebras are not known";
        break;
      case BlockKind::SingleOperator: {
        const int a = b.support.front();
        const EigResult e = eig(b.restrictions.front(), tol);
        if (!e.ok) {
          throw NotDiagonalizable("apply_canonical: " + fam.label(a) + " is not diagonalizable on its U block",
                                  b.invariance_leak);
        }
        SingleOperatorForm form;
        form.local_basis = basis * e.vectors;
        form.values = e.values;
        for (std::size_t x = 0; x < e.values.size() && !form.opposite_pairs; ++x)
          for (std::size_t y = x; y < e.values.size(); ++y)
            if (std::abs(e.values[x] + e.values[y]) <= tol.cluster_radius()) {
              form.opposite_pairs = true;
              break;
            }
        const Matrix r = restrict(fam.op(a), form.local_basis, tol).matrix;
        Vector mu(static_cast<Eigen::Index>(e.values.size()));
        for (std::size_t x = 0; x < e.values.size(); ++x) mu(static_cast<Eigen::Index>(x)) = e.values[x];
        form.residual = (r - Matrix(mu.asDiagonal())).norm();
        f.residual = form.residual;
        if (form.opposite_pairs) f.note = "eigenvalues include opposite pairs mu_i + mu_j = 0";
        f.form = std::move(form);
        break;
      }
      case BlockKind::Clifford: {
        std::vector<Scalar> constants;
        for (int a : b.support) constants.push_back(b.constants.at(a));
        CliffordCanonicalForm form = clifford_canonical_form(b.restrictions, constants, tol);
        form.local_basis = basis * form.local_basis;
        form.residual = 0.0;
        for (std::size_t x = 0; x < b.support.size(); ++x) {
          const Matrix r = restrict(fam.op(b.support[x]), form.local_basis, tol).matrix;
          form.residual = std::max(form.residual, (r - form.normalizers[x] * form.generators[x]).norm());
        }
        f.residual = form.residual;
        if (rep.field_mode == FieldMode::Real) f.note = "complex canonical form; real canonical basis not constructed";
        f.form = std::move(form);
        break;
      }
    }
    out.max_residual = std::max(out.max_residual, f.residual);
    out.forms.push_back(std::move(f));
  }
  return out;
}

}  // namespace anticanon
