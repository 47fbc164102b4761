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

// 2-Wasserstein space of univariate distributions, each stored as its
// quantile function sampled on an equispaced interior grid of (0, 1). The
// distance is the L2[0,1] distance between quantile functions and the
// weighted barycenter is the isotonic projection of the pointwise average.

#ifndef MRF_SPACES_WASSERSTEIN_HPP_
#define MRF_SPACES_WASSERSTEIN_HPP_

#include <cmath>
#include <span>
#include <vector>

#include "mrf/metric_core.hpp"
#include "mrf/pava.hpp"

namespace mrf {

struct QuantileFunction {
  std::vector<double> values;

  friend bool operator==(const QuantileFunction&, const QuantileFunction&) = default;
};

class WassersteinSpace {
 public:
  using Point = QuantileFunction;
  static constexpr std::string_view kName = "wasserstein";
  static constexpr std::size_t kDefaultGridSize = 100;

  explicit WassersteinSpace(std::size_t grid_size = kDefaultGridSize)
      : grid_size_(grid_size), quad_(trapezoid_weights(grid_size)) {
    if (grid_size < 2) throw ConfigError("wasserstein grid needs at least 2 nodes");
  }

  std::size_t grid_size() const { return grid_size_; }

  // u_m = (m + 1) / (M + 1), m = 0..M-1.
  std::vector<double> grid() const {
    std::vector<double> u(grid_size_);
    for (std::size_t m = 0; m < grid_size_; ++m)
      u[m] = static_cast<double>(m + 1) / static_cast<double>(grid_size_ + 1);
    return u;
  }

  void validate(const Point& p) const {
    if (p.values.size() != grid_size_)
      throw ValidationError("quantile grid has length " + std::to_string(p.values.size()) +
                            ", expected " + std::to_string(grid_size_));
    for (std::size_t m = 0; m < grid_size_; ++m) {
      if (!std::isfinite(p.values[m])) throw ValidationError("quantile value is not finite");
      if (m > 0 && p.values[m] < p.values[m - 1])
        throw ValidationError("quantile grid is not nondecreasing at index " + std::to_string(m));
    }
  }

  double distance(const Point& p, const Point& q) const {
    if (p.values.size() != grid_size_ || q.values.size() != grid_size_)
      throw ValidationError("wasserstein_distance: grid mismatch");
    double sum = 0.0;
    for (std::size_t m = 0; m < grid_size_; ++m) {
      const double diff = p.values[m] - q.values[m];
      sum += quad_[m] * diff * diff;
    }
    return std::sqrt(sum);
  }

  Point solve_frechet_mean(std::span<const Point> samples, std::span<const double> w) const {
    std::vector<double> average(grid_size_, 0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (w[i] == 0.0) continue;
      for (std::size_t m = 0; m < grid_size_; ++m) average[m] += w[i] * samples[i].values[m];
    }
    return {pava_isotonic(average, quad_)};
  }

  const SolverCounter& solver_counter() const { return counter_; }

 private:
  std::size_t grid_size_;
  std::vector<double> quad_;
  SolverCounter counter_;
};

inline double wasserstein_distance(const QuantileFunction& p, const QuantileFunction& q) {
  if (p.values.size() != q.values.size()) throw ValidationError("wasserstein_distance: grid mismatch");
  return WassersteinSpace(p.values.size()).distance(p, q);
}

inline QuantileFunction wasserstein_mean(std::span<const QuantileFunction> samples,
                                         std::span<const double> w) {
  if (samples.empty() || samples.size() != w.size()) throw Error("wasserstein_mean: bad input sizes");
  check_weights(w);
  return WassersteinSpace(samples.front().values.size()).solve_frechet_mean(samples, w);
}

}  // namespace mrf

#endif  // MRF_SPACES_WASSERSTEIN_HPP_
