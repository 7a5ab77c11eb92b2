#include <set>

#include <gtest/gtest.h>

#include "anticanon/canonical.hpp"
#include "anticanon/decomposition.hpp"
#include "anticanon/oracle.hpp"
#include "anticanon/simdiag.hpp"
#include "oracles.hpp"

using namespace anticanon;

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class CorpusProperty : public ::testing::TestWithParam<int> {};

}  // namespace

TEST_P(CorpusProperty, DecompositionInvariants) {
  const auto corpus = oracle::sample_corpus(60, 100 + static_cast<std::uint64_t>(GetParam()));
  for (const auto& c : corpus) {
    SCOPED_TRACE(c.name);
    const auto built = oracle::build_family(c.specs, c.N, c.mode);
    const auto fam = oracle::scramble(built.family, c.scramble);
    const auto tol = fam.tolerance();
    const auto rep = decompose(fam, tol);

    std::vector<int> cols;
    for (const auto& b : rep.blocks) cols.insert(cols.end(), b.columns.begin(), b.columns.end());
    cols = oracle_ref::sorted(cols);
    ASSERT_EQ(static_cast<int>(cols.size()), fam.dim());
    for (int i = 0; i < fam.dim(); ++i) EXPECT_EQ(cols[i], i);

    // Distinct Clifford supports of size i are at most C(N, i).
    std::vector<std::set<std::vector<int>>> supports(c.N + 1);
    for (const auto& b : rep.blocks)
      if (b.kind == BlockKind::Clifford) supports[b.support.size()].insert(b.support);
    for (int i = 0; i <= c.N; ++i) EXPECT_LE(static_cast<long>(supports[i].size()), binomial(c.N, i));

    int kernel = 0;
    for (const auto& b : rep.blocks)
      if (b.kind == BlockKind::Kernel) kernel += b.dim();
    if (!rep.has_degenerate()) EXPECT_EQ(kernel, oracle_ref::common_kernel_dim(fam.ops()));

    EXPECT_LE(verify_block_invariance(rep, fam, tol), 1e-8);
    EXPECT_TRUE(oracle::compare_reports(built.expected, rep).match);

    // A second, different scramble of the same family gives the same skeleton.
    auto other = c.scramble;
    other.perm_seed += 1000;
    const auto fam2 = oracle::scramble(built.family, other);
    const auto cmp = oracle::compare_skeletons(oracle::skeleton_of(rep), oracle::skeleton_of(decompose(fam2, fam2.tolerance())));
    EXPECT_TRUE(cmp.match) << cmp.diff;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CorpusProperty, ::testing::Range(0, 3));

TEST(Property, RealOracleFamiliesStayReal) {
  const auto corpus = oracle::sample_corpus(70, 5);
  for (const auto& c : corpus) {
    if (c.mode != FieldMode::Real) continue;
    const auto fam = oracle::scramble(oracle::build_family(c.specs, c.N, c.mode).family, c.scramble);
    for (const auto& a : fam.ops()) EXPECT_EQ(a.imag().norm(), 0.0) << c.name;
  }
}

TEST(Property, DiagonalFamiliesAreInvariantExactly) {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> pick(-2, 2);
  for (int t = 0; t < 20; ++t) {
    // Two anti-commuting diagonal operators must have disjoint supports.
    Eigen::VectorXcd d1 = Eigen::VectorXcd::Zero(6), d2 = Eigen::VectorXcd::Zero(6);
    for (int i = 0; i < 3; ++i) d1(i) = pick(gen);
    for (int i = 3; i < 6; ++i) d2(i) = pick(gen);
    const auto fam = OperatorFamily::make({Matrix(d1.asDiagonal()), Matrix(d2.asDiagonal())});
    if (fam.scale() == 0.0) continue;
    const auto rep = decompose(fam, fam.tolerance());
    EXPECT_EQ(verify_block_invariance(rep, fam, fam.tolerance()), 0.0);
  }
}

TEST(Property, PrincipalSqrtSquares) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> d;
  for (int i = 0; i < 1000; ++i) {
    const Scalar c(d(gen) * 10, d(gen) * 10);
    const Scalar s = principal_sqrt(c);
    EXPECT_LT(std::abs(s * s - c), 1e-13 * (1 + std::abs(c)));
    EXPECT_GE(s.real(), 0.0);
  }
}
