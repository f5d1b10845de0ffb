#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nclid::stats {

/// 1-based fractional ranks; tied values share the average of their ranks.
std::vector<double> fractional_ranks(std::span<const double> x);

double mean(std::span<const double> x);

/// Pearson product-moment correlation. Throws NumericalError when either
/// input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman's rho as the Pearson correlation of fractional ranks. Requires
/// equal lengths >= 3; a constant input throws NumericalError.
double spearman(std::span<const double> x, std::span<const double> y);

struct MwuResult {
  double u_statistic = 0.0;  // min(U_a, U_b)
  double u_a = 0.0;          // pairs with a > b, ties counted as 1/2
  double p_value = 1.0;      // two-sided
  bool exact = false;        // p from the permutation distribution
  bool accepted = true;      // p > 0.05
  double ps_h = 0.0;         // Pr(a > b)
  double ps_l = 0.0;         // Pr(b > a)
  double p_e = 0.0;          // Pr(a == b)
};

inline constexpr double kMwuAlpha = 0.05;
inline constexpr std::size_t kExactMwuLimit = 12;

/// Mann-Whitney U test of stochastic equality. Uses the exact permutation
/// distribution of U when |a| + |b| <= kExactMwuLimit, otherwise the normal
/// approximation with tie and continuity corrections.
MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Normal-approximation p-value regardless of sample size.
double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b);

/// Exact two-sided p-value by enumerating every split of the pooled sample.
double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b);

struct MeanSplit {
  std::vector<std::size_t> high;  // strictly above the mean
  std::vector<std::size_t> low;   // everything else
};

MeanSplit split_by_mean(std::span<const double> scores);

/// Biased Fisher-Pearson skewness g1 = m3 / m2^(3/2). Requires at least three
/// values with nonzero variance.
double skewness(std::span<const double> x);

/// Standard normal upper tail Pr(Z > z).
double normal_sf(double z);

}  // namespace nclid::stats
