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

#ifndef MRF_SPACES_EUCLIDEAN_HPP_
#define MRF_SPACES_EUCLIDEAN_HPP_

#include <cmath>
#include <span>

#include "mrf/metric_core.hpp"

namespace mrf {

// The real line with |a - b|. Every Fréchet quantity has a closed form here,
// which makes it the oracle space for forest-level tests.
class EuclideanSpace {
 public:
  using Point = double;
  static constexpr std::string_view kName = "euclidean";

  void validate(Point p) const {
    if (!std::isfinite(p)) throw ValidationError("euclidean point is not finite");
  }

  double distance(Point a, Point b) const { return std::abs(a - b); }

  Point solve_frechet_mean(std::span<const Point> samples, std::span<const double> w) const {
    double mean = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) mean += w[i] * samples[i];
    return mean;
  }

  const SolverCounter& solver_counter() const { return counter_; }

 private:
  SolverCounter counter_;
};

}  // namespace mrf

#endif  // MRF_SPACES_EUCLIDEAN_HPP_
