#include "nclid/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "nclid/error.hpp"

namespace nclid::stats {

std::vector<double> fractional_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // positions i..j (0-based) share the mean rank of i+1..j+1
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("pearson: length mismatch");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericalError("correlation undefined for a constant input");
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("spearman: length mismatch");
  if (x.size() < 3) throw InputError("spearman: need at least 3 observations");
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

double u_of(std::span<const double> a, std::span<const double> b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) {
      if (x > y)
        u += 1.0;
      else if (x == y)
        u += 0.5;
    }
  }
  return u;
}

}  // namespace

double mann_whitney_normal_p(std::span<const double> a, std::span<const double> b) {
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  if (n < 2) return 1.0;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  const double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
  if (variance <= 0.0) return 1.0;
  const double deviation = std::abs(u_of(a, b) - n1 * n2 / 2.0);
  const double z = std::max(0.0, deviation - 0.5) / std::sqrt(variance);
  return std::min(1.0, 2.0 * normal_sf(z));
}

double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  if (n > 20) throw InputError("exact Mann-Whitney enumeration limited to 20 observations");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const double center = static_cast<double>(a.size() * b.size()) / 2.0;
  const double observed = std::abs(u_of(a, b) - center);

  std::uint64_t hits = 0, total = 0;
  std::vector<double> left, right;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != a.size()) continue;
    left.clear();
    right.clear();
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? left : right).push_back(pooled[i]);
    ++total;
    if (std::abs(u_of(left, right) - center) >= observed - 1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("mann_whitney_u: both samples must be nonempty");
  MwuResult r;
  std::size_t greater = 0, less = 0, equal = 0;
  for (double x : a) {
    for (double y : b) {
      if (x > y)
        ++greater;
      else if (x < y)
        ++less;
      else
        ++equal;
    }
  }
  const double pairs = static_cast<double>(a.size() * b.size());
  r.u_a = static_cast<double>(greater) + 0.5 * static_cast<double>(equal);
  r.u_statistic = std::min(r.u_a, pairs - r.u_a);
  r.ps_h = static_cast<double>(greater) / pairs;
  r.ps_l = static_cast<double>(less) / pairs;
  r.p_e = static_cast<double>(equal) / pairs;
  r.exact = a.size() + b.size() <= kExactMwuLimit;
  r.p_value = r.exact ? mann_whitney_exact_p(a, b) : mann_whitney_normal_p(a, b);
  r.accepted = r.p_value > kMwuAlpha;
  return r;
}

MeanSplit split_by_mean(std::span<const double> scores) {
  MeanSplit s;
  const double m = mean(scores);
  for (std::size_t i = 0; i < scores.size(); ++i) (scores[i] > m ? s.high : s.low).push_back(i);
  return s;
}

double skewness(std::span<const double> x) {
  if (x.size() < 3) throw InputError("skewness: need at least 3 values");
  const double m = mean(x);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  if (m2 == 0.0) throw NumericalError("skewness undefined for zero variance");
  return m3 / std::pow(m2, 1.5);
}

}  // namespace nclid::stats
