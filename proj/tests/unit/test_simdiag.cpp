#include <gtest/gtest.h>

#include "anticanon/errors.hpp"
#include "anticanon/simdiag.hpp"
#include "oracles.hpp"

using namespace anticanon;

namespace {

Matrix diag(std::initializer_list<Scalar> d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (auto x : d) v(i++) = x;
  return v.asDiagonal();
}

// Multiset of per-column value tuples, rounded for comparison.
std::vector<std::vector<long>> column_tuples(const SimDiagResult& r) {
  std::vector<std::vector<long>> out;
  for (Eigen::Index j = 0; j < r.diag_values.cols(); ++j) {
    std::vector<long> t;
    for (Eigen::Index a = 0; a < r.diag_values.rows(); ++a) {
      t.push_back(std::lround(r.diag_values(a, j).real() * 1e6));
      t.push_back(std::lround(r.diag_values(a, j).imag() * 1e6));
    }
    out.push_back(t);
  }
  return oracle_ref::sorted(out);
}

}  // namespace

TEST(SimultaneousDiagonalize, AlreadyDiagonal) {
  const auto f = OperatorFamily::make({diag({1, 2}), diag({3, 3})});
  const SimDiagResult r = simultaneous_diagonalize(f, f.tolerance());
  EXPECT_LT(r.offdiag_residual, 1e-14);
  for (Eigen::Index j = 0; j < 2; ++j) {
    int nonzero = 0;
    for (Eigen::Index i = 0; i < 2; ++i)
      if (std::abs(r.P(i, j)) > 1e-12) ++nonzero;
    EXPECT_EQ(nonzero, 1);
  }
  EXPECT_EQ(column_tuples(r), (std::vector<std::vector<long>>{{1000000, 0, 3000000, 0}, {2000000, 0, 3000000, 0}}));
}

TEST(SimultaneousDiagonalize, IdentityMember) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  const auto f = OperatorFamily::make({Matrix::Identity(2, 2), m});
  const SimDiagResult r = simultaneous_diagonalize(f, f.tolerance());
  for (Eigen::Index j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(r.diag_values(0, j) - Scalar(1.0)), 0.0, 1e-12);
  // eigenvalues of [[1,2],[3,4]]: (5 +- sqrt(33)) / 2
  std::vector<double> ev = {r.diag_values(1, 0).real(), r.diag_values(1, 1).real()};
  ev = oracle_ref::sorted(ev);
  EXPECT_NEAR(ev[0], (5.0 - std::sqrt(33.0)) / 2.0, 1e-12);
  EXPECT_NEAR(ev[1], (5.0 + std::sqrt(33.0)) / 2.0, 1e-12);
}

TEST(SimultaneousDiagonalize, RecoversJointSpectrum) {
  std::mt19937_64 gen(2024);
  const Matrix S = oracle_ref::random_basis(3, 20.0, gen);
  const Matrix Si = S.inverse();
  const auto f = OperatorFamily::make({Matrix(S * diag({1, 1, 2}) * Si), Matrix(S * diag({5, 7, 7}) * Si)});
  const SimDiagResult r = simultaneous_diagonalize(f, f.tolerance());
  EXPECT_EQ(column_tuples(r), (std::vector<std::vector<long>>{
                                  {1000000, 0, 5000000, 0}, {1000000, 0, 7000000, 0}, {2000000, 0, 7000000, 0}}));
  EXPECT_LT(r.offdiag_residual, 1e-10);
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(r.P.col(j).norm(), 1.0, 1e-14);
}

TEST(SimultaneousDiagonalize, RejectsNonCommuting) {
  Matrix s1(2, 2), s2(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 1, 0, 0, -1;
  const auto f = OperatorFamily::make({s1, s2});
  EXPECT_THROW(simultaneous_diagonalize(f, f.tolerance()), CommutationViolation);
}

TEST(SimultaneousDiagonalize, RejectsDefectiveMember) {
  Matrix j(2, 2);
  j << 0, 1, 0, 0;
  const auto f = OperatorFamily::make({j});
  EXPECT_THROW(simultaneous_diagonalize(f, f.tolerance()), NotDiagonalizable);
}

TEST(CommutationResidual, Examples) {
  const auto diagonal = OperatorFamily::make({diag({1, 2}), diag({3, 4})});
  EXPECT_EQ(commutation_residual(diagonal, diagonal.tolerance()), 0.0);
  Matrix s1(2, 2), s2(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, Scalar(0, -1), Scalar(0, 1), 0;
  const auto pauli = OperatorFamily::make({s1, s2});
  // [s1, s2] = 2i s3, ||.||_F = 2 sqrt 2, scaled by scale^2 + 1 = 2.
  EXPECT_GT(commutation_residual(pauli, pauli.tolerance()), 0.5);
  const auto single = OperatorFamily::make({s1});
  EXPECT_EQ(commutation_residual(single, single.tolerance()), 0.0);
}
