#include "anticanon/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "anticanon/errors.hpp"

namespace anticanon {

namespace {

// Beyond this the assembled eigenvector matrix is treated as singular.
constexpr double kSingularCondition = 1e14;
constexpr double kIllConditioned = 1e8;

// Eigen's divide-and-conquer SVD is much faster than Jacobi at these sizes but
// occasionally returns wrong singular values. Those results break the identity
// sum(sigma^2) = ||M||_F^2, which is cheap to check.
bool consistent(const Eigen::VectorXd& s, const Matrix& m) {
  const double f = m.squaredNorm();
  return std::abs(s.squaredNorm() - f) <= 1e-10 * f;
}

Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<Matrix> svd(m);
  if (consistent(svd.singularValues(), m)) return svd.singularValues();
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

void TolerancePolicy::validate() const {
  if (!(rel_zero > 0.0 && rel_zero <= eig_cluster && eig_cluster < 1.0)) {
    throw PreconditionError("tolerance policy requires 0 < rel_zero <= eig_cluster < 1 (got rel_zero=" +
                            std::to_string(rel_zero) + ", eig_cluster=" + std::to_string(eig_cluster) + ")");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw PreconditionError("tolerance scale must be positive and finite");
  }
}

TolerancePolicy TolerancePolicy::with_scale(double s) const {
  TolerancePolicy t = *this;
  t.scale = s > 0.0 ? s : 1.0;
  return t;
}

TolerancePolicy TolerancePolicy::from_rel_zero(double rz) {
  TolerancePolicy t;
  t.rel_zero = rz;
  t.eig_cluster = 100.0 * rz;
  t.validate();
  return t;
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  // Largest eigenvalue of the Gram matrix; only the top singular value is needed.
  const Matrix gram = m.cols() <= m.rows() ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double condition_number(const Matrix& m) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

bool scalar_less(const Scalar& a, const Scalar& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<int> cluster_scalars(const std::vector<Scalar>& values, double radius,
                                 std::vector<Scalar>* means) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= radius) {
        const int a = find_root(parent, i);
        const int b = find_root(parent, j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  std::vector<int> root_to_raw(n, -1);
  std::vector<Scalar> sums;
  std::vector<int> counts;
  std::vector<int> raw(n);
  for (int i = 0; i < n; ++i) {
    const int r = find_root(parent, i);
    if (root_to_raw[r] < 0) {
      root_to_raw[r] = static_cast<int>(sums.size());
      sums.emplace_back(0.0);
      counts.push_back(0);
    }
    raw[i] = root_to_raw[r];
    sums[raw[i]] += values[i];
    ++counts[raw[i]];
  }

  const int k = static_cast<int>(sums.size());
  std::vector<Scalar> cluster_means(k);
  for (int c = 0; c < k; ++c) cluster_means[c] = sums[c] / static_cast<double>(counts[c]);

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scalar_less(cluster_means[a], cluster_means[b]); });
  std::vector<int> rank(k);
  for (int r = 0; r < k; ++r) rank[order[r]] = r;

  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = rank[raw[i]];
  if (means) {
    means->resize(k);
    for (int c = 0; c < k; ++c) (*means)[rank[c]] = cluster_means[c];
  }
  return ids;
}

EigResult eig(const Matrix& m, const TolerancePolicy& tol) {
  if (m.rows() != m.cols()) throw PreconditionError("eig: matrix must be square");
  EigResult out;
  const Eigen::Index n = m.rows();
  if (n == 0) {
    out.ok = true;
    out.vectors = Matrix(0, 0);
    out.condition = 1.0;
    return out;
  }

  Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) return out;

  std::vector<Scalar> raw(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::vector<Scalar> means;
  const std::vector<int> ids = cluster_scalars(raw, tol.cluster_radius(), &means);
  std::vector<int> multiplicity(means.size(), 0);
  for (int id : ids) ++multiplicity[id];

  out.vectors = Matrix::Zero(n, n);
  Eigen::Index filled = 0;
  for (std::size_t c = 0; c < means.size(); ++c) {
    const int mult = multiplicity[c];
    const Matrix shifted = m - means[c] * Matrix::Identity(n, n);
    const double bound = tol.cluster_radius() * std::max(1, mult);
    auto null_vectors = [&](const auto& svd) -> std::optional<Matrix> {
      // The mult smallest singular values must all be numerically zero.
      if (!consistent(svd.singularValues(), shifted) || svd.singularValues()(n - mult) > bound) return std::nullopt;
      Matrix v = svd.matrixV().rightCols(mult);
      if ((shifted * v).norm() > bound) return std::nullopt;
      return v;
    };
    // Anything the fast SVD gets wrong is redone by Jacobi.
    std::optional<Matrix> v = null_vectors(Eigen::BDCSVD<Matrix>(shifted, Eigen::ComputeFullV));
    if (!v) v = null_vectors(Eigen::JacobiSVD<Matrix>(shifted, Eigen::ComputeFullV));
    if (!v) {
      out.ok = false;
      return out;
    }
    out.vectors.middleCols(filled, mult) = *v;
    for (int k = 0; k < mult; ++k) out.values.push_back(means[c]);
    filled += mult;
  }

  out.condition = condition_number(out.vectors);
  if (!(out.condition < kSingularCondition)) {
    out.ok = false;
    return out;
  }
  out.ill_conditioned = out.condition > kIllConditioned;

  Vector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = out.values[i];
  out.residual = (m * out.vectors - out.vectors * diag.asDiagonal()).norm();
  out.ok = true;
  return out;
}

Matrix null_space(const Matrix& m, double threshold) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Matrix(0, 0);
  auto trailing = [&](const auto& svd) {
    const Eigen::VectorXd& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > threshold) ++rank;
    return Matrix(svd.matrixV().rightCols(n - rank));
  };
  const Eigen::BDCSVD<Matrix> fast(m, Eigen::ComputeFullV);
  if (consistent(fast.singularValues(), m)) {
    Matrix v = trailing(fast);
    if (v.cols() == 0 || (m * v).norm() <= 2.0 * threshold * std::sqrt(static_cast<double>(v.cols()))) return v;
  }
  return trailing(Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullV));
}

Matrix kernel_basis(const Matrix& m, const TolerancePolicy& tol) {
  if (m.rows() != m.cols()) throw PreconditionError("kernel_basis: matrix must be square");
  if (m.cols() == 0) return Matrix(0, 0);
  return null_space(m, tol.zero_threshold());
}

int numerical_rank(const Matrix& m, double threshold) {
  const Eigen::VectorXd s = singular_values(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  return rank;
}

Restriction restrict(const Matrix& m, const Matrix& basis, const TolerancePolicy& tol) {
  if (m.rows() != m.cols()) throw PreconditionError("restrict: matrix must be square");
  if (basis.rows() != m.rows()) throw PreconditionError("restrict: basis has the wrong number of rows");
  Restriction out;
  const Eigen::Index k = basis.cols();
  if (k == 0) {
    out.matrix = Matrix(0, 0);
    return out;
  }

  const Matrix image = m * basis;
  const Matrix gram = basis.adjoint() * basis;
  const bool orthonormal = (gram - Matrix::Identity(k, k)).norm() <= 1e-13 * static_cast<double>(k);
  if (orthonormal) {
    out.matrix = basis.adjoint() * image;
  } else {
    const Eigen::ColPivHouseholderQR<Matrix> qr(basis);
    const auto r = qr.matrixR().diagonal().cwiseAbs();
    if (!(r(k - 1) > 1e-12 * r(0))) throw PreconditionError("restrict: basis columns are linearly dependent");
    out.matrix = qr.solve(image);
  }
  out.leak = (image - basis * out.matrix).norm() / (tol.scale + 1.0);
  return out;
}

Matrix orthonormalize(const Matrix& columns, double threshold) {
  Matrix q = columns;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const Scalar proj = q.col(i).dot(q.col(j));
        q.col(j) -= proj * q.col(i);
      }
    }
    const double norm = q.col(j).norm();
    if (!(norm > threshold)) throw PreconditionError("orthonormalize: columns are linearly dependent");
    q.col(j) /= norm;
  }
  return q;
}

Scalar principal_sqrt(Scalar c) {
  Scalar s = std::sqrt(c);
  if (s.real() == 0.0 && s.imag() < 0.0) s = -s;
  if (s.real() < 0.0) s = -s;
  return s;
}

}  // namespace anticanon
