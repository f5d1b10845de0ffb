#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nclid/error.hpp"
#include "nclid/graph.hpp"
#include "nclid/stats.hpp"
#include "oracles.hpp"
#include "test_graphs.hpp"

using namespace nclid;
using namespace nclid::stats;

namespace {

// Two-sided exact p by walking every |a|-subset of the pooled sample with
// std::next_permutation and counting pairs directly.
double exact_p_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  auto u = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (double p : x) {
      for (double q : y) s += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
    }
    return s;
  };
  const double center = a.size() * b.size() / 2.0;
  const double observed = std::abs(u(a, b) - center);
  std::vector<char> pick(pooled.size(), 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(a.size()), 1);
  std::sort(pick.begin(), pick.end());
  double hits = 0, total = 0;
  do {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < pooled.size(); ++i) (pick[i] ? x : y).push_back(pooled[i]);
    total += 1;
    if (std::abs(u(x, y) - center) >= observed - 1e-9) hits += 1;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return hits / total;
}

}  // namespace

TEST(FractionalRanks, TiesShareTheAverageRank) {
  const std::vector<double> x{10, 20, 20, 5, 20};
  EXPECT_EQ(fractional_ranks(x), (std::vector<double>{2, 4, 4, 1, 4}));
}

TEST(Spearman, IdenticalAndReversed) {
  const std::vector<double> x{3, 1, 4, 1.5, 9, 2.6};
  EXPECT_NEAR(spearman(x, x), 1.0, 1e-15);
  std::vector<double> sorted = x, rev = x;
  std::sort(sorted.begin(), sorted.end());
  std::sort(rev.rbegin(), rev.rend());
  EXPECT_NEAR(spearman(sorted, rev), -1.0, 1e-15);
}

TEST(Spearman, TiedExampleMatchesHandRanks) {
  const double rho = spearman(std::vector<double>{1, 2, 2, 4}, std::vector<double>{10, 20, 30, 40});
  EXPECT_NEAR(rho, oracle::pearson_by_hand({1, 2.5, 2.5, 4}, {1, 2, 3, 4}), 1e-12);
  EXPECT_NEAR(rho, 0.9486832980505138, 1e-12);
}

TEST(Spearman, TiedFixturesMatchHandRankedPearson) {
  struct Fixture {
    std::vector<double> x, y, rx, ry;
  };
  const std::vector<Fixture> fixtures{
      {{5, 5, 5, 1, 2}, {1, 2, 3, 4, 5}, {4, 4, 4, 1, 2}, {1, 2, 3, 4, 5}},
      {{0.1, 0.3, 0.3, 0.2, 0.3, 0.0}, {7, 7, 1, 2, 3, 3}, {2, 5, 5, 3, 5, 1}, {5.5, 5.5, 1, 2, 3.5, 3.5}},
      {{1, 1, 2, 2}, {2, 1, 2, 1}, {1.5, 1.5, 3.5, 3.5}, {3.5, 1.5, 3.5, 1.5}},
  };
  for (const auto& f : fixtures) {
    EXPECT_EQ(fractional_ranks(f.x), f.rx);
    EXPECT_EQ(fractional_ranks(f.y), f.ry);
    EXPECT_NEAR(spearman(f.x, f.y), oracle::pearson_by_hand(f.rx, f.ry), 1e-12);
  }
}

TEST(Spearman, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(12), y(12), tx, ty;
    for (auto& v : x) v = std::round(u(rng) * 2) / 2;  // coarse grid forces ties
    for (auto& v : y) v = u(rng);
    for (double v : x) tx.push_back(std::exp(v));
    for (double v : y) ty.push_back(3.0 * v * v * v - 1.0);
    EXPECT_NEAR(spearman(x, y), spearman(tx, ty), 1e-12);
    std::vector<double> affine;
    for (double v : x) affine.push_back(2.5 * v + 7.0);
    EXPECT_NEAR(spearman(x, affine), 1.0, 1e-12);
  }
}

TEST(Spearman, RejectsDegenerateInput) {
  EXPECT_THROW(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), NumericalError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InputError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), InputError);
}

TEST(MannWhitney, FullSeparation) {
  const auto r = mann_whitney_u(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  EXPECT_EQ(r.u_statistic, 0.0);
  EXPECT_EQ(r.ps_h, 0.0);
  EXPECT_EQ(r.ps_l, 1.0);
  EXPECT_EQ(r.p_e, 0.0);
}

TEST(MannWhitney, EqualSingletons) {
  const auto r = mann_whitney_u(std::vector<double>{5}, std::vector<double>{5});
  EXPECT_EQ(r.p_e, 1.0);
  EXPECT_EQ(r.ps_h, 0.0);
  EXPECT_EQ(r.ps_l, 0.0);
}

TEST(MannWhitney, PairEnumeration) {
  const auto r = mann_whitney_u(std::vector<double>{1, 3}, std::vector<double>{2});
  EXPECT_EQ(r.ps_h, 0.5);
  EXPECT_EQ(r.ps_l, 0.5);
  EXPECT_EQ(r.u_statistic, 1.0);
}

TEST(MannWhitney, ProbabilitiesOfSuperiorityPartitionThePairGrid) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(0, 4);
  std::uniform_int_distribution<std::size_t> len(1, 15);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(len(rng)), b(len(rng));
    for (auto& v : a) v = small(rng);
    for (auto& v : b) v = small(rng);
    const auto r = mann_whitney_u(a, b);
    EXPECT_NEAR(r.ps_h + r.ps_l + r.p_e, 1.0, 1e-12);
    EXPECT_NEAR(r.ps_h, 1.0 - r.ps_l - r.p_e, 1e-12);
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
    EXPECT_EQ(r.accepted, r.p_value > kMwuAlpha);
  }
}

TEST(MannWhitney, NormalApproximationMatchesReferenceValue) {
  // Reference: two-sided asymptotic test with tie and continuity corrections.
  const std::vector<double> a{1.5, 2.0, 2.0, 3.1, 4.7, 5.0, 6.2, 6.2, 7.0};
  const std::vector<double> b{2.0, 3.3, 4.0, 6.2, 8.1, 8.4, 9.0, 9.5, 10.0, 11.0};
  const auto r = mann_whitney_u(a, b);
  EXPECT_FALSE(r.exact);
  EXPECT_DOUBLE_EQ(r.u_a, 19.0);
  EXPECT_NEAR(r.p_value, 0.0366707910509401, 1e-12);
}

TEST(MannWhitney, ExactPermutationMatchesReferenceValues) {
  const auto r = mann_whitney_u(std::vector<double>{1, 4, 7}, std::vector<double>{2, 3, 9, 10});
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.u_a, 4.0);
  EXPECT_NEAR(r.p_value, 0.6285714285714286, 1e-12);
  EXPECT_NEAR(mann_whitney_exact_p(std::vector<double>{3, 1, 4, 1.5}, std::vector<double>{5, 9, 2.6, 5.3, 5.8}),
              0.06349206349206349, 1e-12);
}

TEST(MannWhitney, ExactPermutationMatchesSubsetOracle) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> value(0, 6);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(len(rng)), b(len(rng));
    for (auto& v : a) v = value(rng);
    for (auto& v : b) v = value(rng);
    EXPECT_NEAR(mann_whitney_exact_p(a, b), exact_p_oracle(a, b), 1e-12);
  }
}

TEST(MannWhitney, UsesExactTestUpToTheLimit) {
  std::vector<double> a(6), b(6);
  std::iota(a.begin(), a.end(), 0.0);
  std::iota(b.begin(), b.end(), 3.5);
  EXPECT_TRUE(mann_whitney_u(a, b).exact);
  b.push_back(20.0);
  EXPECT_FALSE(mann_whitney_u(a, b).exact);
}

TEST(MannWhitney, RejectsEmptySamples) {
  EXPECT_THROW(mann_whitney_u(std::vector<double>{}, std::vector<double>{1}), InputError);
}

TEST(SplitByMean, StrictlyAboveTheMeanIsHigh) {
  const auto s = split_by_mean(std::vector<double>{0, 0, 4});
  EXPECT_EQ(s.high, (std::vector<std::size_t>{2}));
  EXPECT_EQ(s.low, (std::vector<std::size_t>{0, 1}));
  const auto flat = split_by_mean(std::vector<double>{2, 2, 2});
  EXPECT_TRUE(flat.high.empty());
  EXPECT_EQ(flat.low.size(), 3u);
}

TEST(Skewness, SymmetricSampleIsZero) { EXPECT_NEAR(skewness(std::vector<double>{1, 2, 3}), 0.0, 1e-15); }

TEST(Skewness, MatchesDirectMoments) {
  // Mean 2.25, m2 = 15.1875, m3 = 68.34375, so g1 = 2 / sqrt(3).
  EXPECT_NEAR(skewness(std::vector<double>{0, 0, 0, 9}), 2.0 / std::sqrt(3.0), 1e-12);
}

TEST(Skewness, ZacharyDegreeSequence) {
  const Graph g = load_edge_list_file(nclid::testing::data_path("zachary.edges"));
  std::vector<double> deg;
  for (NodeId v = 0; v < g.node_count(); ++v) deg.push_back(static_cast<double>(g.degree(v)));
  EXPECT_NEAR(skewness(deg), 2.00, 0.05);
}

TEST(Skewness, RejectsDegenerateInput) {
  EXPECT_THROW(skewness(std::vector<double>{1, 1, 1}), NumericalError);
  EXPECT_THROW(skewness(std::vector<double>{1, 2}), InputError);
}

TEST(NormalTail, KnownValues) {
  EXPECT_DOUBLE_EQ(normal_sf(0.0), 0.5);
  EXPECT_NEAR(normal_sf(1.959963984540054), 0.025, 1e-12);
  EXPECT_NEAR(normal_sf(-1.0), 0.8413447460685429, 1e-12);
}
