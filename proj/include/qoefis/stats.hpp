#pragma once

// Validation statistics: descriptive summaries with t-based confidence
// intervals, RMSE and the two-tailed paired-samples t-test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qoefis/error.hpp"

namespace qoefis {

namespace detail {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta function I_x(a, b).
[[nodiscard]] inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

// P(T <= t) for Student's t with df degrees of freedom, through
// P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
[[nodiscard]] inline double student_t_cdf(double t, double df) {
  if (!std::isfinite(t)) throw InvalidArgument("student_t_cdf needs a finite t");
  if (!(df >= 1.0) || !std::isfinite(df)) throw InvalidArgument("student_t_cdf needs df >= 1");
  if (t == 0.0) return 0.5;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

// Inverse of student_t_cdf by bisection.
[[nodiscard]] inline double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("student_t_quantile needs p in (0, 1)");
  if (p == 0.5) return 0.0;
  double lo = -1.0;
  double hi = 1.0;
  while (student_t_cdf(lo, df) > p) lo *= 2.0;
  while (student_t_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  double se_mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double confidence = 0.95;
};

namespace detail {

inline double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_sd(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace detail

// CI = mean -/+ t_{(1+confidence)/2, n-1} * sd / sqrt(n)
[[nodiscard]] inline DescriptiveStats descriptive(std::span<const double> values, double confidence = 0.95) {
  if (values.empty()) throw InvalidArgument("descriptive statistics need at least one value");
  if (values.size() < 2) throw InvalidArgument("standard deviation and interval need n >= 2");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  detail::require_finite(values, "sample");

  DescriptiveStats s;
  s.n = values.size();
  s.confidence = confidence;
  s.mean = detail::mean_of(values);
  s.sd = detail::sample_sd(values, s.mean);
  s.se_mean = s.sd / std::sqrt(static_cast<double>(s.n));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = s.n / 2;
  s.median = s.n % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  const double half = student_t_quantile(0.5 * (1.0 + confidence), static_cast<double>(s.n - 1)) * s.se_mean;
  s.ci_lo = s.mean - half;
  s.ci_hi = s.mean + half;
  return s;
}

// Pairs are (truth, estimate).
[[nodiscard]] inline double rmse(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw InvalidArgument("rmse needs at least one pair");
  double ss = 0.0;
  for (const auto& [truth, estimate] : pairs) {
    if (!std::isfinite(truth) || !std::isfinite(estimate)) throw InvalidArgument("rmse input is not finite");
    ss += (estimate - truth) * (estimate - truth);
  }
  return std::sqrt(ss / static_cast<double>(pairs.size()));
}

struct TTestResult {
  double t = 0.0;  // +/-inf when every difference is the same nonzero value
  std::size_t df = 0;
  double p = 1.0;  // two-tailed
  double alpha = 0.05;
  bool reject_null = false;
  double mean_difference = 0.0;
  double sd_difference = 0.0;
  bool exact_difference = false;  // sd of differences is 0 but the mean is not
};

// Two-tailed test of H0: mean(a - b) = 0.
//
// With zero spread in the differences the statistic is undefined: all-zero
// differences give t = 0, p = 1; a constant nonzero difference gives
// t = +/-inf, p = 0 and sets exact_difference.
[[nodiscard]] inline TTestResult paired_t_test(std::span<const std::pair<double, double>> pairs, double alpha = 0.05) {
  if (pairs.size() < 2) throw InvalidArgument("paired t-test needs n >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  std::vector<double> d;
  d.reserve(pairs.size());
  for (const auto& [a, b] : pairs) d.push_back(a - b);
  detail::require_finite(d, "paired sample");

  TTestResult r;
  r.alpha = alpha;
  r.df = pairs.size() - 1;
  r.mean_difference = detail::mean_of(d);
  r.sd_difference = detail::sample_sd(d, r.mean_difference);
  if (r.sd_difference == 0.0) {
    if (r.mean_difference == 0.0) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
      r.p = 0.0;
      r.exact_difference = true;
    }
  } else {
    r.t = r.mean_difference / (r.sd_difference / std::sqrt(static_cast<double>(pairs.size())));
    const double p = 2.0 * student_t_cdf(-std::abs(r.t), static_cast<double>(r.df));
    r.p = std::clamp(p, 0.0, 1.0);
  }
  r.reject_null = r.p <= alpha;
  return r;
}

}  // namespace qoefis
