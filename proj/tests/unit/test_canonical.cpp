#include <gtest/gtest.h>

#include "anticanon/canonical.hpp"
#include "anticanon/errors.hpp"
#include "anticanon/oracle.hpp"
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

TolerancePolicy scaled(double s) {
  TolerancePolicy t;
  t.scale = s;
  return t;
}

void expect_exact_clifford(const std::vector<Matrix>& g) {
  for (std::size_t a = 0; a < g.size(); ++a) {
    EXPECT_TRUE(oracle_ref::unit_pattern(g[a]));
    EXPECT_TRUE(oracle_ref::exactly_pm_identity(oracle_ref::multiply(g[a], g[a])));
    for (std::size_t b = a + 1; b < g.size(); ++b)
      EXPECT_TRUE(oracle_ref::exactly_zero(oracle_ref::anticommutator(g[a], g[b])));
  }
}

}  // namespace

TEST(PairCanonicalForm, TwoByTwo) {
  Matrix a(2, 2);
  a << 1, 0, 0, -1;
  const auto f = pair_canonical_form(a, sigma1(), scaled(1.0));
  EXPECT_EQ(f.lambda, Scalar(1.0));
  ASSERT_EQ(f.D.size(), 1u);
  EXPECT_NEAR(std::abs(f.D[0] - Scalar(1.0)), 0.0, 1e-14);
  Matrix ca(2, 2), cb(2, 2);
  ca << 1, 0, 0, -1;
  cb << 0, 1, 1, 0;
  EXPECT_LT((f.canon_A - ca).norm(), 1e-14);
  EXPECT_LT((f.canon_B - cb).norm(), 1e-14);
  EXPECT_LT(f.residual, 1e-14);
}

TEST(PairCanonicalForm, FourByFourDisplay) {
  Eigen::VectorXcd d(4);
  d << 2, 2, -2, -2;
  const Matrix A = d.asDiagonal();
  Matrix B = Matrix::Zero(4, 4);
  B(0, 2) = 3;
  B(1, 3) = 5;
  B(2, 0) = 1;
  B(3, 1) = 1;
  Eigen::VectorXcd b2(4);
  b2 << 3, 5, 3, 5;
  EXPECT_EQ((oracle_ref::multiply(B, B) - Matrix(b2.asDiagonal())).norm(), 0.0);

  const auto f = pair_canonical_form(A, B, scaled(5.0));
  EXPECT_EQ(f.lambda, Scalar(2.0));
  ASSERT_EQ(f.D.size(), 2u);
  std::vector<double> D = {f.D[0].real(), f.D[1].real()};
  EXPECT_NEAR(oracle_ref::sorted(D)[0], 3.0, 1e-12);
  EXPECT_NEAR(oracle_ref::sorted(D)[1], 5.0, 1e-12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      EXPECT_EQ(f.canon_A(i, j + 2), Scalar(0.0));
      EXPECT_EQ(f.canon_A(i + 2, j), Scalar(0.0));
      EXPECT_EQ(f.canon_B(i, j), Scalar(0.0));
      EXPECT_EQ(f.canon_B(i + 2, j + 2), Scalar(0.0));
      EXPECT_EQ(f.canon_B(i + 2, j), i == j ? Scalar(1.0) : Scalar(0.0));
      EXPECT_EQ(f.canon_B2(i, j + 2), Scalar(0.0));
    }
  EXPECT_EQ(f.canon_B2(0, 0), f.D[0]);
  EXPECT_EQ(f.canon_B2(2, 2), f.D[0]);
  EXPECT_LT(f.residual, 1e-12);
}

TEST(PairCanonicalForm, Guards) {
  Matrix a(2, 2);
  a << 1, 0, 0, -1;
  EXPECT_THROW(pair_canonical_form(a, Matrix::Identity(2, 2), scaled(1.0)), PreconditionError);
  Eigen::VectorXcd d(3);
  d << 1, -1, 1;
  EXPECT_THROW(pair_canonical_form(d.asDiagonal(), Matrix::Zero(3, 3), scaled(1.0)), OddDimension);
  Eigen::VectorXcd e(2);
  e << 1, -2;
  EXPECT_THROW(pair_canonical_form(e.asDiagonal(), Matrix::Zero(2, 2), scaled(2.0)), NonConstantSquare);
  EXPECT_THROW(pair_canonical_form(a, Matrix::Zero(2, 2), scaled(1.0)), SingularB);
}

TEST(CliffordCanonicalForm, PauliPair) {
  const auto f = clifford_canonical_form({sigma1(), sigma2()}, {1.0, 1.0}, scaled(1.0));
  EXPECT_EQ(f.depth, 1);
  ASSERT_EQ(f.generators.size(), 2u);
  Matrix h1(2, 2), h2(2, 2);
  h1 << 1, 0, 0, -1;
  h2 << 0, 1, 1, 0;
  EXPECT_EQ(f.generators[0], h1);
  EXPECT_EQ(f.generators[1], h2);
  expect_exact_clifford(f.generators);
  EXPECT_LT(f.residual, 1e-14);
}

TEST(CliffordCanonicalForm, SingleOperatorSortsEigenvalues) {
  Eigen::VectorXcd d(3);
  d << 5, -5, 5;
  const auto f = clifford_canonical_form({Matrix(d.asDiagonal())}, {25.0}, scaled(5.0));
  ASSERT_EQ(f.generators.size(), 1u);
  Eigen::VectorXcd h(3);
  h << 1, 1, -1;
  EXPECT_EQ(f.generators[0], Matrix(h.asDiagonal()));
  EXPECT_NEAR(std::abs(f.normalizers[0] - Scalar(5.0)), 0.0, 1e-14);
}

TEST(CliffordCanonicalForm, FourGeneratorsOnFourDimensions) {
  oracle::BlockSpec b;
  b.kind = BlockKind::Clifford;
  b.dim = 4;
  b.support = {0, 1, 2, 3};
  b.constants = {{0, 2.0}, {1, 3.0}, {2, 5.0}, {3, 7.0}};
  b.seed = 9;
  const auto built = oracle::build_family({b}, 4, FieldMode::Complex);
  oracle::ScrambleSpec s;
  s.perm_seed = 5;
  const auto fam = oracle::scramble(built.family, s);
  const auto f = clifford_canonical_form(fam.ops(), {2.0, 3.0, 5.0, 7.0}, fam.tolerance());
  EXPECT_EQ(f.depth, 2);
  ASSERT_FALSE(f.recursion_trace.empty());
  EXPECT_EQ(f.recursion_trace.back().dim, 1);
  expect_exact_clifford(f.generators);
  const Matrix Li = f.local_basis.inverse();
  for (int a = 0; a < 4; ++a)
    EXPECT_LT((Li * fam.op(a) * f.local_basis - f.normalizers[a] * f.generators[a]).norm(), 1e-10 * 4 * fam.scale());
}

TEST(CliffordCanonicalForm, DimensionObstruction) {
  // Three dimensions cannot carry two anti-commuting invertible generators.
  Eigen::VectorXcd d(3);
  d << 1, -1, 1;
  Matrix b = Matrix::Zero(3, 3);
  b(0, 1) = 1;
  b(1, 0) = 1;
  EXPECT_THROW(clifford_canonical_form({Matrix(d.asDiagonal()), b}, {1.0, 1.0}, scaled(1.0)), DimensionObstruction);
}

TEST(CliffordCanonicalForm, NonConstantSquare) {
  Eigen::VectorXcd d(2);
  d << 1, -2;
  EXPECT_THROW(clifford_canonical_form({Matrix(d.asDiagonal())}, {1.0}, scaled(2.0)), NonConstantSquare);
}

TEST(ApplyCanonical, PauliAndDiagonal) {
  const auto pauli = OperatorFamily::make({sigma1(), sigma2()});
  const auto rep = decompose(pauli, pauli.tolerance());
  const auto res = apply_canonical(rep, pauli, pauli.tolerance());
  ASSERT_EQ(res.forms.size(), 1u);
  ASSERT_TRUE(std::holds_alternative<CliffordCanonicalForm>(res.forms[0].form));
  EXPECT_LT(res.max_residual, 1e-13);

  Eigen::VectorXcd d(2);
  d << 3, 0;
  const auto single = OperatorFamily::make({Matrix(d.asDiagonal())});
  const auto rep2 = decompose(single, single.tolerance());
  const auto res2 = apply_canonical(rep2, single, single.tolerance());
  ASSERT_EQ(res2.forms.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(res2.forms[0].form));
  ASSERT_TRUE(std::holds_alternative<SingleOperatorForm>(res2.forms[1].form));
  EXPECT_NEAR(std::abs(std::get<SingleOperatorForm>(res2.forms[1].form).values[0] - Scalar(3.0)), 0.0, 1e-13);
}

TEST(ApplyCanonical, WorkedExampleDepths) {
  const auto built = oracle::build_family(oracle::worked_example_specs(), 5, FieldMode::Complex);
  oracle::ScrambleSpec s;
  s.perm_seed = 8;
  const auto fam = oracle::scramble(built.family, s);
  const auto rep = decompose(fam, fam.tolerance());
  const auto res = apply_canonical(rep, fam, fam.tolerance());
  int built_forms = 0;
  for (const auto& f : res.forms) {
    if (std::holds_alternative<std::monostate>(f.form)) continue;
    ++built_forms;
    if (const auto* c = std::get_if<CliffordCanonicalForm>(&f.form)) {
      expect_exact_clifford(c->generators);
      if (c->generators.size() == 4) EXPECT_EQ(c->depth, 2);
    }
  }
  EXPECT_EQ(built_forms, 7);
  EXPECT_LT(res.max_residual, 1e-9 * fam.scale());
}

TEST(ApplyCanonical, SkipsDegenerate) {
  Matrix n = Matrix::Zero(2, 2);
  n(0, 1) = 1;
  const auto fam = OperatorFamily::make({n});
  const auto rep = decompose(fam, fam.tolerance());
  const auto res = apply_canonical(rep, fam, fam.tolerance());
  ASSERT_EQ(res.forms.size(), 1u);
  EXPECT_TRUE(res.forms[0].skipped);
  EXPECT_FALSE(res.forms[0].note.empty());
  EXPECT_TRUE(std::holds_alternative<std::monostate>(res.forms[0].form));
}
