/*
 * Copyright 2026 The MRF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Metric-space contract and the Fréchet functionals built on top of it:
// pairwise distance matrices, medoids, variances and the weighted Fréchet
// mean dispatch that every downstream module goes through.

#ifndef MRF_METRIC_CORE_HPP_
#define MRF_METRIC_CORE_HPP_

#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrf/common.hpp"

namespace mrf {

// A metric space supplies an opaque point type, a validity predicate, a
// distance and a weighted-Fréchet-mean solver. The solver counter lives on
// the space handle and is bumped by weighted_frechet_mean() only.
template <class S>
concept MetricSpace = requires(const S& space, const typename S::Point& p,
                               std::span<const typename S::Point> points,
                               std::span<const double> weights) {
  typename S::Point;
  { S::kName } -> std::convertible_to<std::string_view>;
  { space.validate(p) };
  { space.distance(p, p) } -> std::convertible_to<double>;
  { space.solve_frechet_mean(points, weights) } -> std::same_as<typename S::Point>;
  { space.solver_counter() } -> std::same_as<const SolverCounter&>;
};

// Optional fast path: spaces whose distance factors through a per-point
// transform (e.g. an SRVF) expose it so bulk computations transform each
// point once.
template <class S>
concept PreparedDistance = MetricSpace<S> && requires(const S& space, const typename S::Point& p) {
  space.prepare(p);
  { space.prepared_distance(space.prepare(p), space.prepare(p)) } -> std::convertible_to<double>;
};

using WeightVector = std::vector<double>;

inline constexpr double kWeightSumTolerance = 1e-12;

// Throws unless every weight is >= 0 and the weights sum to one (or are all
// zero when `allow_degenerate`).
inline void check_weights(std::span<const double> w, bool allow_degenerate = false) {
  double total = 0.0;
  bool all_zero = true;
  for (double wi : w) {
    if (!(wi >= 0.0) || !std::isfinite(wi)) {
      throw ValidationError("weight vector has a negative or non-finite entry");
    }
    all_zero = all_zero && wi == 0.0;
    total += wi;
  }
  if (all_zero && allow_degenerate) return;
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw ValidationError("weights must sum to 1 (got " + std::to_string(total) + ")");
  }
}

// Symmetric n x n matrix of response distances with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  double squared(std::size_t i, std::size_t j) const {
    const double d = entries_[i * n_ + j];
    return d * d;
  }

  // Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value) {
    entries_[i * n_ + j] = value;
    entries_[j * n_ + i] = value;
  }

  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

template <MetricSpace S>
double distance(const S& space, const typename S::Point& a, const typename S::Point& b) {
  space.validate(a);
  space.validate(b);
  return space.distance(a, b);
}

// Computes the upper triangle of pairwise distances and mirrors it.
template <MetricSpace S>
DistanceMatrix distance_matrix(const S& space, std::span<const typename S::Point> samples,
                               unsigned threads = 1) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      space.validate(samples[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  const std::size_t n = samples.size();
  DistanceMatrix delta(n);
  if constexpr (PreparedDistance<S>) {
    using Prepared = decltype(space.prepare(samples[0]));
    std::vector<Prepared> prepared(n);
    parallel_for(n, threads, [&](std::size_t i) { prepared[i] = space.prepare(samples[i]); });
    parallel_for(n, threads, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) delta.set(i, j, space.prepared_distance(prepared[i], prepared[j]));
    });
  } else {
    parallel_for(n, threads, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) delta.set(i, j, space.distance(samples[i], samples[j]));
    });
  }
  return delta;
}

// Index i in `members` minimizing sum_{j in members} delta(i, j)^2; ties go
// to the lowest index.
inline std::size_t frechet_medoid(const DistanceMatrix& delta, std::span<const std::size_t> members) {
  if (members.empty()) throw Error("frechet_medoid: empty member set");
  std::size_t best = members.front();
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t candidate : members) {
    double sum = 0.0;
    for (std::size_t j : members) sum += delta.squared(candidate, j);
    if (sum < best_sum || (sum == best_sum && candidate < best)) {
      best_sum = sum;
      best = candidate;
    }
  }
  return best;
}

// Mean squared distance from `center` to the members.
inline double frechet_variance(const DistanceMatrix& delta, std::span<const std::size_t> members,
                               std::size_t center) {
  if (members.empty()) throw Error("frechet_variance: empty member set");
  bool found = false;
  double sum = 0.0;
  for (std::size_t j : members) {
    found = found || j == center;
    sum += delta.squared(center, j);
  }
  if (!found) throw Error("frechet_variance: center is not a member");
  return sum / static_cast<double>(members.size());
}

// argmin over samples with positive weight of sum_j w_j d(Y_i, Y_j)^2.
// Zero-weight samples are neither candidates nor contributors. Used as the
// starting point of the iterative solvers.
template <MetricSpace S>
std::size_t weighted_medoid(const S& space, std::span<const typename S::Point> samples,
                            std::span<const double> w) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) support.push_back(i);
  if (support.empty()) throw DegenerateWeightsError("weighted_medoid: all weights are zero");
  const std::size_t m = support.size();
  std::vector<double> cost(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double d = space.distance(samples[support[a]], samples[support[b]]);
      cost[a] += w[support[b]] * d * d;
      cost[b] += w[support[a]] * d * d;
    }
  }
  std::size_t best = 0;
  for (std::size_t a = 1; a < m; ++a)
    if (cost[a] < cost[best]) best = a;
  return support[best];
}

// Weighted Fréchet functional sum_i w_i d(omega, Y_i)^2.
template <MetricSpace S>
double frechet_functional(const S& space, std::span<const typename S::Point> samples,
                          std::span<const double> w, const typename S::Point& omega) {
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (w[i] == 0.0) continue;
    const double d = space.distance(omega, samples[i]);
    total += w[i] * d * d;
  }
  return total;
}

// argmin_omega sum_i w_i d(omega, Y_i)^2, delegated to the space's solver.
// Increments the space's solver counter by exactly one.
template <MetricSpace S>
typename S::Point weighted_frechet_mean(const S& space, std::span<const typename S::Point> samples,
                                        std::span<const double> w) {
  if (samples.size() != w.size()) throw Error("weighted_frechet_mean: size mismatch");
  if (samples.empty()) throw Error("weighted_frechet_mean: no samples");
  check_weights(w);
  space.solver_counter().increment();
  return space.solve_frechet_mean(samples, w);
}

// Uniform weights over `members` of a sample of size n.
inline WeightVector uniform_weights(std::size_t n, std::span<const std::size_t> members) {
  WeightVector w(n, 0.0);
  const double each = 1.0 / static_cast<double>(members.size());
  for (std::size_t i : members) w[i] = each;
  return w;
}

}  // namespace mrf

#endif  // MRF_METRIC_CORE_HPP_
