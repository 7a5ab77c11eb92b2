#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace anticanon {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Zero and cluster thresholds, both relative to `scale`.
///
/// `scale` is the largest operator 2-norm in the family under study and is
/// fixed once per job (see `with_scale`). Everything that compares a number
/// against zero or against another eigenvalue goes through this policy.
struct TolerancePolicy {
  double rel_zero = 1e-9;
  double eig_cluster = 1e-7;
  double scale = 1.0;

  /// Throws PreconditionError unless 0 < rel_zero <= eig_cluster < 1 and scale > 0.
  void validate() const;

  double zero_threshold() const { return rel_zero * scale; }
  double cluster_radius() const { return eig_cluster * scale; }

  /// Same relative thresholds at a different scale.
  TolerancePolicy with_scale(double s) const;

  /// rel_zero overridden; eig_cluster kept at 100 x rel_zero.
  static TolerancePolicy from_rel_zero(double rel_zero);
};

double frobenius_norm(const Matrix& m);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// Ratio of extreme singular values; infinity for a singular matrix.
double condition_number(const Matrix& m);

bool all_finite(const Matrix& m);

struct EigResult {
  std::vector<Scalar> values;  // one per column of `vectors`, cluster means
  Matrix vectors;
  bool ok = false;
  double residual = 0.0;   // ||M V - V diag(values)||_F
  double condition = 0.0;  // of `vectors`
  bool ill_conditioned = false;
};

/// Clustered eigendecomposition.
///
/// Eigenvalues within eig_cluster*scale of each other (single linkage) are
/// reported as their mean. Each cluster of multiplicity m contributes an
/// orthonormal basis of the m-dimensional numerical null space of (M - mu I);
/// `ok` is false when any cluster lacks m such directions (a Jordan block),
/// or the assembled eigenvector matrix is numerically singular. Clusters are
/// ordered by (real, imag) of their representative.
EigResult eig(const Matrix& m, const TolerancePolicy& tol);

/// Single-linkage clustering of scalars. Returns the cluster id of each
/// input; ids are ordered by the (real, imag) order of the cluster means.
std::vector<int> cluster_scalars(const std::vector<Scalar>& values, double radius,
                                 std::vector<Scalar>* means = nullptr);

/// Orthonormal basis of the numerical null space: right singular vectors
/// whose singular value is <= rel_zero*scale. Full-rank input gives 0 columns.
Matrix kernel_basis(const Matrix& m, const TolerancePolicy& tol);

/// Orthonormal basis of the right singular vectors of `m` whose singular
/// value is <= threshold.
Matrix null_space(const Matrix& m, double threshold);

/// Numerical rank with an absolute singular-value threshold.
int numerical_rank(const Matrix& m, double threshold);

struct Restriction {
  Matrix matrix;
  double leak = 0.0;
};

/// Matrix of `m` in the column basis `basis` (least squares), with the
/// invariance defect ||M B - B R||_F / (tol.scale + 1). Throws PreconditionError
/// for a rank-deficient basis.
Restriction restrict(const Matrix& m, const Matrix& basis, const TolerancePolicy& tol);

/// Modified Gram-Schmidt on the columns, in place order. Throws
/// PreconditionError if a column collapses below `threshold`.
Matrix orthonormalize(const Matrix& columns, double threshold = 1e-12);

/// Principal square root: argument in (-pi/2, pi/2].
Scalar principal_sqrt(Scalar c);

/// Strict weak order on scalars by real part, then imaginary part.
bool scalar_less(const Scalar& a, const Scalar& b);

}  // namespace anticanon
