#include "anticanon/simdiag.hpp"

#include <algorithm>
#include <sstream>

#include "anticanon/errors.hpp"

namespace anticanon {

double commutation_residual(const OperatorFamily& fam, const TolerancePolicy& tol) {
  const double denom = tol.scale * tol.scale + 1.0;
  double worst = 0.0;
  for (int a = 0; a < fam.size(); ++a) {
    for (int b = a + 1; b < fam.size(); ++b) {
      const Matrix& x = fam.op(a);
      const Matrix& y = fam.op(b);
      worst = std::max(worst, (x * y - y * x).norm() / denom);
    }
  }
  return worst;
}

SimDiagResult simultaneous_diagonalize(const OperatorFamily& fam, const TolerancePolicy& tol) {
  tol.validate();
  const double comm = commutation_residual(fam, tol);
  if (comm > tol.rel_zero) {
    std::ostringstream msg;
    msg << "family does not commute (scaled residual " << comm << " > " << tol.rel_zero << ")";
    throw CommutationViolation(msg.str());
  }

  const int n = fam.dim();
  std::vector<Matrix> cells{Matrix::Identity(n, n)};

  for (int a = 0; a < fam.size(); ++a) {
    std::vector<Matrix> next;
    next.reserve(cells.size());
    for (const Matrix& cell : cells) {
      const Restriction r = restrict(fam.op(a), cell, tol);
      const EigResult e = eig(r.matrix, tol);
      if (!e.ok) {
        std::ostringstream msg;
        msg << "restriction of " << fam.label(a) << " to a " << cell.cols()
            << "-dimensional joint eigenspace is not diagonalizable (invariance leak " << r.leak << ")";
        throw NotDiagonalizable(msg.str(), r.leak);
      }
      // eig groups equal values contiguously.
      Eigen::Index begin = 0;
      const auto k = static_cast<Eigen::Index>(e.values.size());
      while (begin < k) {
        Eigen::Index end = begin + 1;
        while (end < k && e.values[end] == e.values[begin]) ++end;
        next.push_back(orthonormalize(cell * e.vectors.middleCols(begin, end - begin)));
        begin = end;
      }
    }
    cells = std::move(next);
  }

  SimDiagResult out;
  out.P = Matrix(n, n);
  out.diag_values = Matrix::Zero(fam.size(), n);
  int col = 0;
  for (const Matrix& cell : cells) {
    const int k = static_cast<int>(cell.cols());
    out.P.middleCols(col, k) = cell;
    for (int a = 0; a < fam.size(); ++a) {
      const Restriction r = restrict(fam.op(a), cell, tol);
      const Scalar value = r.matrix.trace() / static_cast<double>(k);
      for (int j = 0; j < k; ++j) out.diag_values(a, col + j) = value;
    }
    out.cells.emplace_back(col, col + k);
    col += k;
  }

  out.condition = condition_number(out.P);
  out.ill_conditioned = out.condition > 1e8;
  const auto lu = out.P.partialPivLu();
  for (int a = 0; a < fam.size(); ++a) {
    const Vector values = out.diag_values.row(a).transpose();
    const Matrix ap = fam.op(a) * out.P;
    const Matrix diag = values.asDiagonal();
    out.reconstruction_residual = std::max(out.reconstruction_residual, (ap - out.P * diag).norm());
    out.offdiag_residual = std::max(out.offdiag_residual, (lu.solve(ap) - diag).norm() / (tol.scale + 1.0));
  }
  return out;
}

}  // namespace anticanon
