#pragma once

#include <string>
#include <vector>

#include "anticanon/numerics.hpp"

namespace anticanon {

enum class FieldMode { Real, Complex };

std::string to_string(FieldMode mode);
FieldMode field_mode_from_string(const std::string& s);

/// An ordered list of N square n x n operators with unique labels.
/// Construct through `make` (validating) or `unchecked` (tests, internal use).
class OperatorFamily {
 public:
  OperatorFamily() = default;

  /// Throws PreconditionError on ragged sizes, duplicate labels, non-finite
  /// entries, or non-real entries in real mode. Empty labels become "A1".."AN".
  static OperatorFamily make(std::vector<Matrix> ops, std::vector<std::string> labels = {},
                             FieldMode mode = FieldMode::Complex);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(ops_.size()); }
  const std::vector<Matrix>& ops() const { return ops_; }
  const Matrix& op(int a) const { return ops_.at(a); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int a) const { return labels_.at(a); }
  FieldMode field_mode() const { return mode_; }

  /// Largest operator 2-norm over the members; 1 for an all-zero family.
  double scale() const;

  /// Default policy with scale() filled in.
  TolerancePolicy tolerance(TolerancePolicy base = {}) const;

 private:
  int dim_ = 0;
  std::vector<Matrix> ops_;
  std::vector<std::string> labels_;
  FieldMode mode_ = FieldMode::Complex;
};

enum class OperatorKind { Diagonalizable, SquareDiagonalizableOnly, Unsupported };

std::string to_string(OperatorKind kind);

struct OperatorClass {
  OperatorKind kind = OperatorKind::Unsupported;
  double condition = 0.0;  // eigenvector condition of A (or A^2 when A fails)
  int kernel_dim = 0;      // dim Ker(A)
  int kernel_gap = 0;      // dim Ker(A^2) - dim Ker(A)
  bool ill_conditioned = false;
};

/// N x N matrix, entry (a,b) = ||A_a A_b + A_b A_a||_F / (scale^2 + 1), zero diagonal.
RealMatrix anticommutation_residual(const OperatorFamily& fam, const TolerancePolicy& tol);

/// max entry of anticommutation_residual <= rel_zero.
bool is_anticommuting(const OperatorFamily& fam, const TolerancePolicy& tol);

/// Diagonalizable if eig succeeds on A, else SquareDiagonalizableOnly if it
/// succeeds on A^2, else Unsupported. Kernel dimensions use rel_zero*scale
/// for A and rel_zero*scale^2 for A^2.
OperatorClass classify_operator(const Matrix& a, const TolerancePolicy& tol);

/// Max over a != b of the scaled ||A_a^2 A_b^2 - A_b^2 A_a^2|| and
/// ||A_a A_b^2 - A_b^2 A_a||. Both vanish for any anti-commuting family.
double check_squared_commutes(const OperatorFamily& fam, const TolerancePolicy& tol);

/// True iff some member has A_a^2 = 0 (numerically).
bool has_square_zero_member(const OperatorFamily& fam, const TolerancePolicy& tol);

/// True iff the members, flattened to length n^2, have rank N (singular value
/// threshold rel_zero*scale*n). Throws PreconditionError when a member squares
/// to zero: the independence claim does not cover such families.
bool check_linear_independence(const OperatorFamily& fam, const TolerancePolicy& tol);

}  // namespace anticanon
