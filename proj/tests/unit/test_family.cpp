#include <gtest/gtest.h>

#include "anticanon/errors.hpp"
#include "anticanon/family.hpp"
#include "oracles.hpp"

using namespace anticanon;

namespace {

Matrix sigma1() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix sigma2() {
  Matrix m(2, 2);
  m << 0, Scalar(0, -1), Scalar(0, 1), 0;
  return m;
}
Matrix nilpotent() {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}

TolerancePolicy tol_for(const OperatorFamily& f) { return f.tolerance(); }

}  // namespace

TEST(OperatorFamily, ValidatesInput) {
  EXPECT_THROW(OperatorFamily::make({}), PreconditionError);
  EXPECT_THROW(OperatorFamily::make({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), PreconditionError);
  EXPECT_THROW(OperatorFamily::make({sigma1(), sigma1()}, {"a", "a"}), PreconditionError);
  EXPECT_THROW(OperatorFamily::make({sigma2()}, {}, FieldMode::Real), PreconditionError);
  Matrix bad = sigma1();
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(OperatorFamily::make({bad}), PreconditionError);

  const auto f = OperatorFamily::make({sigma1(), sigma2()});
  EXPECT_EQ(f.label(0), "A1");
  EXPECT_EQ(f.label(1), "A2");
  EXPECT_EQ(f.dim(), 2);
  EXPECT_EQ(f.size(), 2);
}

TEST(AnticommutationResidual, PauliPairIsZero) {
  const auto f = OperatorFamily::make({sigma1(), sigma2()});
  const RealMatrix r = anticommutation_residual(f, tol_for(f));
  EXPECT_EQ(r(0, 1), 0.0);
  EXPECT_EQ(r(1, 0), 0.0);
  EXPECT_TRUE(is_anticommuting(f, tol_for(f)));
  EXPECT_EQ(oracle_ref::anticommutator(sigma1(), sigma2()).norm(), 0.0);
}

TEST(AnticommutationResidual, IdentitiesCommute) {
  const auto f = OperatorFamily::make({Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
  const RealMatrix r = anticommutation_residual(f, tol_for(f));
  // ||2I||_F / (1 + 1)
  EXPECT_NEAR(r(0, 1), std::sqrt(8.0) / 2.0, 1e-14);
  EXPECT_FALSE(is_anticommuting(f, tol_for(f)));
}

TEST(AnticommutationResidual, SingletonIsVacuous) {
  const auto f = OperatorFamily::make({sigma1()});
  const RealMatrix r = anticommutation_residual(f, tol_for(f));
  EXPECT_EQ(r.rows(), 1);
  EXPECT_EQ(r(0, 0), 0.0);
  EXPECT_TRUE(is_anticommuting(f, tol_for(f)));
}

TEST(ClassifyOperator, Examples) {
  const TolerancePolicy tol;
  const OperatorClass swap = classify_operator(sigma1(), tol);
  EXPECT_EQ(swap.kind, OperatorKind::Diagonalizable);
  EXPECT_EQ(swap.kernel_gap, 0);

  const OperatorClass nil = classify_operator(nilpotent(), tol);
  EXPECT_EQ(nil.kind, OperatorKind::SquareDiagonalizableOnly);
  EXPECT_EQ(nil.kernel_gap, 1);
  EXPECT_EQ(nil.kernel_dim, 1);

  const OperatorClass zero = classify_operator(Matrix::Zero(2, 2), tol);
  EXPECT_EQ(zero.kind, OperatorKind::Diagonalizable);
  EXPECT_EQ(zero.kernel_dim, 2);
}

TEST(ClassifyOperator, UnsupportedWhenSquareIsDefective) {
  // 3x3 nilpotent of index 3: A^2 is a nonzero nilpotent.
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = 1;
  a(1, 2) = 1;
  EXPECT_EQ(classify_operator(a, TolerancePolicy{}).kind, OperatorKind::Unsupported);
  // Jordan block with nonzero eigenvalue: the square is defective too.
  Matrix j(2, 2);
  j << 2, 1, 0, 2;
  EXPECT_EQ(classify_operator(j, TolerancePolicy{}).kind, OperatorKind::Unsupported);
}

TEST(CheckSquaredCommutes, Examples) {
  const auto pauli = OperatorFamily::make({sigma1(), sigma2()});
  EXPECT_EQ(check_squared_commutes(pauli, tol_for(pauli)), 0.0);
  const auto single = OperatorFamily::make({nilpotent()});
  EXPECT_EQ(check_squared_commutes(single, tol_for(single)), 0.0);
}

TEST(CheckLinearIndependence, Examples) {
  const auto pauli = OperatorFamily::make({sigma1(), sigma2()});
  EXPECT_TRUE(check_linear_independence(pauli, tol_for(pauli)));

  const auto parallel = OperatorFamily::make({sigma1(), Matrix(2.0 * sigma1())});
  EXPECT_FALSE(check_linear_independence(parallel, tol_for(parallel)));
  EXPECT_GT(oracle_ref::anticommutator(sigma1(), 2.0 * sigma1()).norm(), 1.0);

  const auto single = OperatorFamily::make({sigma1()});
  EXPECT_TRUE(check_linear_independence(single, tol_for(single)));
  const auto zero = OperatorFamily::make({Matrix::Zero(2, 2)});
  EXPECT_TRUE(has_square_zero_member(zero, tol_for(zero)));
  EXPECT_THROW(check_linear_independence(zero, tol_for(zero)), PreconditionError);
}

TEST(FieldMode, StringRoundTrip) {
  EXPECT_EQ(field_mode_from_string(to_string(FieldMode::Real)), FieldMode::Real);
  EXPECT_EQ(field_mode_from_string(to_string(FieldMode::Complex)), FieldMode::Complex);
  EXPECT_THROW(field_mode_from_string("quaternion"), PreconditionError);
}
