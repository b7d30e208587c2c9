#ifndef NVGEN_STATS_HPP
#define NVGEN_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nvgen {

struct DivisionUndefined : std::runtime_error {
  DivisionUndefined() : std::runtime_error("NVR undefined: no compiling variants") {}
};

struct BadLevel : std::runtime_error {
  explicit BadLevel(double l)
      : std::runtime_error("confidence level " + std::to_string(l) + " out of (0,1)") {}
};

struct EmptySample : std::runtime_error {
  EmptySample() : std::runtime_error("rank-sum test needs nonempty samples") {}
};

// neutral / compiled (Def of the neutral variant rate)
inline double computeNvr(long long neutralCount, long long compiledCount) {
  if (neutralCount < 0 || compiledCount < neutralCount)
    throw std::invalid_argument("need 0 <= neutral <= compiled");
  if (compiledCount == 0) throw DivisionUndefined();
  return static_cast<double>(neutralCount) / static_cast<double>(compiledCount);
}

inline std::string formatPercent(double fraction, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, fraction * 100.0);
  return buf;
}

// Acklam's rational approximation of the standard normal quantile.
inline double normalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw BadLevel(p);
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - plow) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

inline double normalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct ConfidenceInterval {
  double pointEstimate = 0;
  double low = 0;
  double high = 0;
  double halfWidth = 0;
};

// Normal-approximation (Wald) interval: p^ +/- z * sqrt(p^(1-p^)/n).
inline ConfidenceInterval binomialCi(long long successes, long long n, double level) {
  if (n < 1 || successes < 0 || successes > n)
    throw std::invalid_argument("need 0 <= successes <= n, n >= 1");
  if (!(level > 0.0 && level < 1.0)) throw BadLevel(level);
  double z = normalQuantile(1.0 - (1.0 - level) / 2.0);
  double phat = static_cast<double>(successes) / static_cast<double>(n);
  double half = z * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
  return {phat, phat - half, phat + half, half};
}

// Wilson score interval, available behind the --wilson flag for small n.
inline ConfidenceInterval wilsonCi(long long successes, long long n, double level) {
  if (n < 1 || successes < 0 || successes > n)
    throw std::invalid_argument("need 0 <= successes <= n, n >= 1");
  if (!(level > 0.0 && level < 1.0)) throw BadLevel(level);
  double z = normalQuantile(1.0 - (1.0 - level) / 2.0);
  double phat = static_cast<double>(successes) / static_cast<double>(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (phat + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {center, center - half, center + half, half};
}

// ---------------------------------------------------------------------------
// Wilcoxon rank-sum (two-sided, midranks for ties)
// ---------------------------------------------------------------------------

struct WilcoxonResult {
  double statistic = 0;  // rank sum of sample A
  double pValue = 1;
  std::string method;  // "exact" or "normal-approx"
};

namespace detail {

struct PooledRanks {
  std::vector<double> ranks;  // midranks, pooled order irrelevant
  std::vector<double> ranksA;
  double tieCorrection = 0;  // sum of t^3 - t over tie groups
};

inline PooledRanks midranks(const std::vector<double>& a, const std::vector<double>& b) {
  struct Item {
    double value;
    bool fromA;
  };
  std::vector<Item> items;
  for (double v : a) items.push_back({v, true});
  for (double v : b) items.push_back({v, false});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& x, const Item& y) { return x.value < y.value; });
  PooledRanks out;
  out.ranks.resize(items.size());
  std::vector<double> rankOf(items.size());
  size_t i = 0;
  while (i < items.size()) {
    size_t j = i;
    while (j + 1 < items.size() && items[j + 1].value == items[i].value) ++j;
    double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    double t = static_cast<double>(j - i + 1);
    out.tieCorrection += t * t * t - t;
    for (size_t k = i; k <= j; ++k) rankOf[k] = mid;
    i = j + 1;
  }
  for (size_t k = 0; k < items.size(); ++k) {
    out.ranks[k] = rankOf[k];
    if (items[k].fromA) out.ranksA.push_back(rankOf[k]);
  }
  return out;
}

// P(|W' - E| >= |W - E|) over all equally likely rank assignments.
inline double exactTwoSided(const std::vector<double>& ranks, size_t nA, double observedDev,
                            double mean) {
  size_t n = ranks.size();
  long long total = 0, extreme = 0;
  std::vector<size_t> pick(nA);
  const double eps = 1e-9;
  std::function<void(size_t, size_t, double)> rec = [&](size_t start, size_t chosen,
                                                        double sum) {
    if (chosen == nA) {
      ++total;
      if (std::abs(sum - mean) >= observedDev - eps) ++extreme;
      return;
    }
    for (size_t i = start; i + (nA - chosen) <= n; ++i) rec(i + 1, chosen + 1, sum + ranks[i]);
  };
  rec(0, 0, 0.0);
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace detail

inline WilcoxonResult wilcoxonExact(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw EmptySample();
  detail::PooledRanks pr = detail::midranks(a, b);
  double w = 0;
  for (double r : pr.ranksA) w += r;
  double n = static_cast<double>(a.size() + b.size());
  double mean = static_cast<double>(a.size()) * (n + 1.0) / 2.0;
  WilcoxonResult res;
  res.statistic = w;
  res.method = "exact";
  res.pValue = detail::exactTwoSided(pr.ranks, a.size(), std::abs(w - mean), mean);
  return res;
}

// Normal approximation with midrank tie correction and continuity correction.
inline WilcoxonResult wilcoxonApprox(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw EmptySample();
  detail::PooledRanks pr = detail::midranks(a, b);
  double w = 0;
  for (double r : pr.ranksA) w += r;
  double nA = static_cast<double>(a.size()), nB = static_cast<double>(b.size());
  double n = nA + nB;
  double mean = nA * (n + 1.0) / 2.0;
  double var = (nA * nB / 12.0) * ((n + 1.0) - pr.tieCorrection / (n * (n - 1.0)));
  WilcoxonResult res;
  res.statistic = w;
  res.method = "normal-approx";
  if (var <= 0) {
    res.pValue = 1.0;
    return res;
  }
  double z = (std::abs(w - mean) - 0.5) / std::sqrt(var);
  if (z < 0) z = 0;
  res.pValue = std::min(1.0, 2.0 * (1.0 - normalCdf(z)));
  return res;
}

// Exact enumeration for small pooled sizes, normal approximation beyond.
inline WilcoxonResult wilcoxonRankSum(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw EmptySample();
  if (a.size() + b.size() <= 12) return wilcoxonExact(a, b);
  return wilcoxonApprox(a, b);
}

}  // namespace nvgen

#endif  // NVGEN_STATS_HPP
