#include "anticanon/family.hpp"

#include <algorithm>
#include <set>

#include "anticanon/errors.hpp"

namespace anticanon {

std::string to_string(FieldMode mode) { return mode == FieldMode::Real ? "real" : "complex"; }

FieldMode field_mode_from_string(const std::string& s) {
  if (s == "real") return FieldMode::Real;
  if (s == "complex") return FieldMode::Complex;
  throw PreconditionError("unknown field mode '" + s + "' (expected real or complex)");
}

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Diagonalizable:
      return "diagonalizable";
    case OperatorKind::SquareDiagonalizableOnly:
      return "square-diagonalizable-only";
    case OperatorKind::Unsupported:
      break;
  }
  return "unsupported";
}

OperatorFamily OperatorFamily::make(std::vector<Matrix> ops, std::vector<std::string> labels, FieldMode mode) {
  if (ops.empty()) throw PreconditionError("operator family is empty");
  const Eigen::Index n = ops.front().rows();
  if (n <= 0) throw PreconditionError("operators must have positive dimension");
  for (std::size_t a = 0; a < ops.size(); ++a) {
    const Matrix& m = ops[a];
    if (m.rows() != n || m.cols() != n) {
      throw PreconditionError("operator " + std::to_string(a) + " is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", expected " + std::to_string(n) + "x" +
                              std::to_string(n));
    }
    if (!all_finite(m)) throw PreconditionError("operator " + std::to_string(a) + " has non-finite entries");
    if (mode == FieldMode::Real && m.imag().cwiseAbs().maxCoeff() != 0.0) {
      throw PreconditionError("operator " + std::to_string(a) + " has complex entries in real mode");
    }
  }
  if (labels.empty()) {
    for (std::size_t a = 0; a < ops.size(); ++a) labels.push_back("A" + std::to_string(a + 1));
  }
  if (labels.size() != ops.size()) throw PreconditionError("label count does not match operator count");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw PreconditionError("operator labels must be non-empty");
    if (!seen.insert(l).second) throw PreconditionError("duplicate operator label '" + l + "'");
  }

  OperatorFamily fam;
  fam.dim_ = static_cast<int>(n);
  fam.ops_ = std::move(ops);
  fam.labels_ = std::move(labels);
  fam.mode_ = mode;
  return fam;
}

double OperatorFamily::scale() const {
  double s = 0.0;
  for (const auto& m : ops_) s = std::max(s, operator_norm(m));
  return s > 0.0 ? s : 1.0;
}

TolerancePolicy OperatorFamily::tolerance(TolerancePolicy base) const {
  base.scale = scale();
  base.validate();
  return base;
}

RealMatrix anticommutation_residual(const OperatorFamily& fam, const TolerancePolicy& tol) {
  const int count = fam.size();
  RealMatrix r = RealMatrix::Zero(count, count);
  const double denom = tol.scale * tol.scale + 1.0;
  for (int a = 0; a < count; ++a) {
    for (int b = a + 1; b < count; ++b) {
      const Matrix& x = fam.op(a);
      const Matrix& y = fam.op(b);
      const double v = (x * y + y * x).norm() / denom;
      r(a, b) = v;
      r(b, a) = v;
    }
  }
  return r;
}

bool is_anticommuting(const OperatorFamily& fam, const TolerancePolicy& tol) {
  const RealMatrix r = anticommutation_residual(fam, tol);
  return r.size() == 0 || r.maxCoeff() <= tol.rel_zero;
}

OperatorClass classify_operator(const Matrix& a, const TolerancePolicy& tol) {
  if (a.rows() != a.cols()) throw PreconditionError("classify_operator: matrix must be square");
  OperatorClass out;
  const Matrix sq = a * a;
  const TolerancePolicy sq_tol = tol.with_scale(tol.scale * tol.scale);

  out.kernel_dim = static_cast<int>(kernel_basis(a, tol).cols());
  out.kernel_gap = static_cast<int>(kernel_basis(sq, sq_tol).cols()) - out.kernel_dim;

  const EigResult direct = eig(a, tol);
  if (direct.ok) {
    out.kind = OperatorKind::Diagonalizable;
    out.condition = direct.condition;
    out.ill_conditioned = direct.ill_conditioned;
    return out;
  }
  const EigResult squared = eig(sq, sq_tol);
  if (squared.ok) {
    out.kind = OperatorKind::SquareDiagonalizableOnly;
    out.condition = squared.condition;
    out.ill_conditioned = squared.ill_conditioned;
    return out;
  }
  out.kind = OperatorKind::Unsupported;
  return out;
}

double check_squared_commutes(const OperatorFamily& fam, const TolerancePolicy& tol) {
  const double s2 = tol.scale * tol.scale;
  std::vector<Matrix> squares;
  squares.reserve(fam.size());
  for (const auto& m : fam.ops()) squares.push_back(m * m);

  double worst = 0.0;
  for (int a = 0; a < fam.size(); ++a) {
    for (int b = 0; b < fam.size(); ++b) {
      if (a == b) continue;
      const double mixed = (fam.op(a) * squares[b] - squares[b] * fam.op(a)).norm() / (s2 * tol.scale + 1.0);
      worst = std::max(worst, mixed);
      if (a < b) {
        const double both = (squares[a] * squares[b] - squares[b] * squares[a]).norm() / (s2 * s2 + 1.0);
        worst = std::max(worst, both);
      }
    }
  }
  return worst;
}

bool has_square_zero_member(const OperatorFamily& fam, const TolerancePolicy& tol) {
  const double threshold = tol.rel_zero * tol.scale * tol.scale;
  for (const auto& m : fam.ops())
    if (operator_norm(m * m) <= threshold) return true;
  return false;
}

bool check_linear_independence(const OperatorFamily& fam, const TolerancePolicy& tol) {
  if (has_square_zero_member(fam, tol)) {
    throw PreconditionError("linear independence is not implied when a member squares to zero");
  }
  const Eigen::Index n2 = static_cast<Eigen::Index>(fam.dim()) * fam.dim();
  Matrix stacked(fam.size(), n2);
  for (int a = 0; a < fam.size(); ++a) {
    stacked.row(a) = Eigen::Map<const Vector>(fam.op(a).data(), n2).transpose();
  }
  const double threshold = tol.rel_zero * tol.scale * fam.dim();
  return numerical_rank(stacked, threshold) == fam.size();
}

}  // namespace anticanon
