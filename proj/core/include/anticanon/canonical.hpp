#pragma once

#include <string>
#include <variant>
#include <vector>

#include "anticanon/decomposition.hpp"
#include "anticanon/family.hpp"
#include "anticanon/numerics.hpp"

namespace anticanon {

/// Canonical form of an anti-commuting pair (A, B) with A^2 = lambda^2 I and B
/// nonsingular, in the basis [X | Y] where X spans the +lambda eigenspace of A
/// (diagonalizing B^2 there) and Y = B X:
///
///   A -> diag(lambda I, -lambda I),  B -> [[0, D], [I, 0]],  B^2 -> diag(D, D).
///
/// The canon_* matrices are assembled from lambda and D, so their zero pattern
/// is exact; all floating-point error lives in local_basis.
struct PairCanonicalForm {
  Matrix local_basis;
  Scalar lambda;
  std::vector<Scalar> D;
  Matrix canon_A;
  Matrix canon_B;
  Matrix canon_B2;
  double residual = 0.0;  // max of ||L^-1 X L - canon_X||_F over A, B, B^2
};

/// One level of the halving recursion.
struct RecursionStep {
  int depth = 0;
  int dim = 0;
  int generators = 0;
  int plus_dim = 0;  // dim of the +1 eigenspace of the first generator
};

/// Simultaneous canonical form of a Clifford representation.
///
/// generators[a] has entries in {0, +-1, +-i}, the generators pairwise
/// anti-commute and each squares to the identity exactly. The block operators
/// satisfy L^-1 A_a L = normalizers[a] * generators[a] up to rounding.
struct CliffordCanonicalForm {
  Matrix local_basis;
  std::vector<Matrix> generators;
  std::vector<Scalar> normalizers;
  std::vector<RecursionStep> recursion_trace;
  int depth = 0;  // number of halvings
  double residual = 0.0;
};

/// Eigendecomposition of the only nonzero operator on a U_a block.
struct SingleOperatorForm {
  Matrix local_basis;
  std::vector<Scalar> values;
  bool opposite_pairs = false;  // some mu_i + mu_j = 0
  double residual = 0.0;
};

/// Throws PreconditionError (pair does not anti-commute), OddDimension,
/// SingularB, NonConstantSquare.
PairCanonicalForm pair_canonical_form(const Matrix& A, const Matrix& B, const TolerancePolicy& tol);

/// `ops` are the block matrices (all k x k), `constants` their square-constants.
/// Throws DimensionObstruction when a halving is impossible (odd dimension, or
/// unequal +-1 eigenspaces, with two or more generators left) and
/// NonConstantSquare when some ops[a]^2 differs from constants[a] I.
CliffordCanonicalForm clifford_canonical_form(const std::vector<Matrix>& ops, const std::vector<Scalar>& constants,
                                              const TolerancePolicy& tol);

struct BlockForm {
  int block = 0;
  /// monostate for Kernel blocks and skipped Degenerate blocks.
  std::variant<std::monostate, SingleOperatorForm, CliffordCanonicalForm, PairCanonicalForm> form;
  bool skipped = false;
  std::string note;
  /// Residual measured in original coordinates (0 for blocks without a form).
  double residual = 0.0;
};

struct CanonicalResult {
  std::vector<BlockForm> forms;  // one per block, in report order
  double max_residual = 0.0;
};

/// Forms for every block of a decomposition: none for the kernel, an
/// eigendecomposition for U_a blocks, the Clifford recursion for Clifford
/// blocks, and a skip note for Degenerate blocks.
CanonicalResult apply_canonical(const DecompositionReport& rep, const OperatorFamily& fam,
                                const TolerancePolicy& tol);

}  // namespace anticanon
