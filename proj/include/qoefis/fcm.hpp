#pragma once

// One-dimensional fuzzy c-means and construction of output membership
// functions from the resulting cluster centres.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qoefis/error.hpp"
#include "qoefis/fuzzy.hpp"

namespace qoefis {

struct FcmConfig {
  std::size_t clusters = 4;
  double fuzzifier = 2.0;  // m > 1
  double tolerance = 1e-6;  // on the largest centre movement
  std::size_t max_iterations = 300;
  std::uint64_t seed = 0;
  // Independent seeded initialisations; the run with the lowest final
  // objective wins (earliest on ties).
  std::size_t restarts = 10;

  void validate() const {
    if (clusters < 1) throw InvalidArgument("fcm needs at least one cluster");
    if (!(fuzzifier > 1.0) || !std::isfinite(fuzzifier)) throw InvalidArgument("fcm fuzzifier must be > 1");
    if (!(tolerance > 0.0)) throw InvalidArgument("fcm tolerance must be > 0");
    if (max_iterations < 1) throw InvalidArgument("fcm max_iterations must be >= 1");
    if (restarts < 1) throw InvalidArgument("fcm restarts must be >= 1");
  }
};

struct FcmResult {
  std::vector<double> centers;  // ascending
  // memberships[k][i]: degree of point k (input order) in cluster i
  std::vector<std::vector<double>> memberships;
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
  bool converged = false;
};

// Standard FCM membership update. A point that coincides with one or more
// centres belongs to them crisply (shared equally).
[[nodiscard]] inline std::vector<double> fcm_membership_row(double x, std::span<const double> centers,
                                                            double fuzzifier) {
  const std::size_t c = centers.size();
  std::vector<double> row(c, 0.0);
  std::vector<double> d2(c);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < c; ++i) {
    d2[i] = (x - centers[i]) * (x - centers[i]);
    if (d2[i] == 0.0) ++zeros;
  }
  if (zeros > 0) {
    for (std::size_t i = 0; i < c; ++i) row[i] = d2[i] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
    return row;
  }
  // u_i = 1 / sum_j (d2_i / d2_j)^(1/(m-1)), evaluated as w_i / sum(w) with
  // w_i = (d2_min / d2_i)^(1/(m-1)) in (0, 1] to stay clear of overflow.
  const double exponent = 1.0 / (fuzzifier - 1.0);
  const double d2_min = *std::min_element(d2.begin(), d2.end());
  double total = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    row[i] = std::pow(d2_min / d2[i], exponent);
    total += row[i];
  }
  for (auto& u : row) u /= total;
  return row;
}

// J_m = sum_k sum_i u_ki^m (x_k - v_i)^2
[[nodiscard]] inline double fcm_objective(std::span<const double> points, std::span<const double> centers,
                                          const std::vector<std::vector<double>>& memberships, double fuzzifier) {
  double j = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double d = points[k] - centers[i];
      j += std::pow(memberships[k][i], fuzzifier) * d * d;
    }
  }
  return j;
}

namespace detail {

struct FcmRun {
  std::vector<double> centers;
  std::vector<std::vector<double>> memberships;
  std::vector<double> trace;
  std::size_t iterations = 0;
  bool converged = false;
};

inline std::vector<std::vector<double>> fcm_memberships(std::span<const double> points,
                                                        std::span<const double> centers, double m) {
  std::vector<std::vector<double>> u;
  u.reserve(points.size());
  for (double x : points) u.push_back(fcm_membership_row(x, centers, m));
  return u;
}

inline FcmRun fcm_run(std::span<const double> points, std::vector<double> centers, const FcmConfig& config) {
  const double m = config.fuzzifier;
  const std::size_t c = centers.size();
  FcmRun run;
  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    auto u = fcm_memberships(points, centers, m);
    run.trace.push_back(fcm_objective(points, centers, u, m));

    std::vector<double> next(c);
    double shift = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
      double num = 0.0;
      double den = 0.0;
      for (std::size_t k = 0; k < points.size(); ++k) {
        const double w = std::pow(u[k][i], m);
        num += w * points[k];
        den += w;
      }
      next[i] = den > 0.0 ? num / den : centers[i];
      shift = std::max(shift, std::abs(next[i] - centers[i]));
    }
    centers = std::move(next);
    run.iterations = iter;
    if (shift < config.tolerance) {
      run.converged = true;
      break;
    }
  }
  run.memberships = fcm_memberships(points, centers, m);
  run.trace.push_back(fcm_objective(points, centers, run.memberships, m));
  run.centers = std::move(centers);
  return run;
}

}  // namespace detail

// Clusters scalar points into config.clusters fuzzy groups.
//
// Work is done on the sorted points and initial centres are drawn from the
// sorted distinct values, so the result does not depend on input order.
[[nodiscard]] inline FcmResult fcm_cluster(std::span<const double> points, const FcmConfig& config) {
  config.validate();
  for (double x : points) {
    if (!std::isfinite(x)) throw InvalidArgument("fcm input contains a non-finite value");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<double> sorted(points.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = points[order[k]];

  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t c = config.clusters;
  if (distinct.size() < c) {
    throw InvalidArgument("fcm needs at least " + std::to_string(c) + " distinct points, got " +
                          std::to_string(distinct.size()));
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, distinct.size() - 1);
  detail::FcmRun best;
  bool have_best = false;
  for (std::size_t r = 0; r < config.restarts; ++r) {
    std::vector<double> init;
    while (init.size() < c) {
      const double v = distinct[pick(rng)];
      if (std::find(init.begin(), init.end(), v) == init.end()) init.push_back(v);
    }
    std::sort(init.begin(), init.end());
    auto run = detail::fcm_run(sorted, std::move(init), config);
    if (!have_best || run.trace.back() < best.trace.back()) {
      best = std::move(run);
      have_best = true;
    }
  }

  std::vector<std::size_t> by_center(c);
  std::iota(by_center.begin(), by_center.end(), std::size_t{0});
  std::stable_sort(by_center.begin(), by_center.end(),
                   [&](std::size_t a, std::size_t b) { return best.centers[a] < best.centers[b]; });

  FcmResult result;
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.objective_trace = std::move(best.trace);
  for (std::size_t i : by_center) result.centers.push_back(best.centers[i]);
  result.memberships.assign(points.size(), std::vector<double>(c));
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t i = 0; i < c; ++i) result.memberships[order[k]][i] = best.memberships[k][by_center[i]];
  }
  return result;
}

// Triangle i peaks at centre i with feet on the neighbouring centres; the
// first and last triangles reach out to the universe bounds.
[[nodiscard]] inline std::vector<TriangularMF> mfs_from_centers(std::span<const double> centers,
                                                                const Universe& universe,
                                                                std::span<const std::string> labels) {
  universe.validate();
  if (centers.empty()) throw InvalidArgument("at least one centre is required");
  if (centers.size() != labels.size()) throw InvalidArgument("one label per centre is required");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!universe.contains(centers[i])) throw RangeError("centre lies outside the universe");
    if (i > 0 && !(centers[i - 1] < centers[i])) {
      throw InvalidArgument("centres must be strictly increasing (duplicate centre)");
    }
  }
  const std::size_t n = centers.size();
  std::vector<TriangularMF> mfs;
  mfs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    mfs.push_back({labels[i], i == 0 ? universe.lo : centers[i - 1], centers[i],
                   i + 1 == n ? universe.hi : centers[i + 1]});
  }
  return mfs;
}

}  // namespace qoefis
