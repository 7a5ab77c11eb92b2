#pragma once

#include <vector>

#include "anticanon/family.hpp"
#include "anticanon/numerics.hpp"

namespace anticanon {

struct SimDiagResult {
  /// n x n change of basis with unit-norm columns. Columns of one refinement
  /// cell are orthonormal and contiguous.
  Matrix P;
  /// N x n; (a, j) is the eigenvalue of operator a on column j.
  Matrix diag_values;
  /// max_a ||P^-1 A_a P - diag(values_a)||_F / (scale + 1).
  double offdiag_residual = 0.0;
  /// max_a ||A_a P - P diag(values_a)||_F.
  double reconstruction_residual = 0.0;
  double condition = 1.0;
  /// Warning channel: condition of P above 1e8.
  bool ill_conditioned = false;
  /// Column ranges [begin, end) of the final joint eigenspaces, in order.
  std::vector<std::pair<int, int>> cells;
};

/// max over pairs of ||A_a A_b - A_b A_a||_F / (scale^2 + 1); 0 for N = 1.
double commutation_residual(const OperatorFamily& fam, const TolerancePolicy& tol);

/// Joint eigenbasis of a commuting family of diagonalizable operators.
///
/// Partition refinement in family order: every cell starts as an orthonormal
/// basis of an invariant subspace; each operator's restriction to the cell is
/// diagonalized and the cell is split by clustered eigenvalue, with each piece
/// re-orthonormalized before the next operator is applied.
///
/// Throws CommutationViolation if a pair fails to commute and
/// NotDiagonalizable if some restriction has a deficient eigenspace.
SimDiagResult simultaneous_diagonalize(const OperatorFamily& fam, const TolerancePolicy& tol);

}  // namespace anticanon
