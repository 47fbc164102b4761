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

// Warping functions (boundary-preserving diffeomorphisms of [0, 1]) sampled
// on an equispaced grid of T nodes. The metric is the arc length between
// square-root velocity functions on the unit sphere of L2[0, 1]; all
// integrals use the trapezoid rule on the same grid.
//
// Points are warping grids, never composed curves: with the template fixed,
// distances between curves in one orbit reduce to distances between their
// warpings.

#ifndef MRF_SPACES_WARPING_HPP_
#define MRF_SPACES_WARPING_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mrf/metric_core.hpp"

namespace mrf {

struct WarpingFunction {
  std::vector<double> values;

  friend bool operator==(const WarpingFunction&, const WarpingFunction&) = default;
};

struct SrvfPoint {
  std::vector<double> values;

  friend bool operator==(const SrvfPoint&, const SrvfPoint&) = default;
};

inline constexpr double kWarpingEndpointTolerance = 1e-9;
inline constexpr double kSrvfNormTolerance = 1e-6;

// Equispaced grid t_i = i / (T - 1).
inline std::vector<double> warping_grid(std::size_t size) {
  std::vector<double> t(size);
  for (std::size_t i = 0; i < size; ++i) t[i] = static_cast<double>(i) / static_cast<double>(size - 1);
  return t;
}

inline void validate_warping(const WarpingFunction& g) {
  const auto& v = g.values;
  if (v.size() < 3) throw ValidationError("warping grid needs at least 3 nodes");
  if (std::abs(v.front()) > kWarpingEndpointTolerance || std::abs(v.back() - 1.0) > kWarpingEndpointTolerance)
    throw ValidationError("warping does not fix the endpoints 0 and 1");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw ValidationError("warping value is not finite");
    if (!(v[i] > v[i - 1]))
      throw ValidationError("warping is not strictly increasing at index " + std::to_string(i));
  }
}

// Inner product, norm and geodesic tools on the unit sphere of L2[0, 1],
// realized on the grid with trapezoid quadrature.
class HilbertSphere {
 public:
  explicit HilbertSphere(std::size_t size) : quad_(trapezoid_weights(size)) {}

  std::size_t size() const { return quad_.size(); }

  double inner(std::span<const double> a, std::span<const double> b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < quad_.size(); ++i) s += quad_[i] * a[i] * b[i];
    return s;
  }
  double norm(std::span<const double> a) const { return std::sqrt(inner(a, a)); }

  // 2 asin(|a - b| / 2), which is arccos <a, b> for unit a, b, computed
  // without the cancellation arccos suffers near 1.
  double arc(std::span<const double> a, std::span<const double> b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < quad_.size(); ++i) {
      const double d = a[i] - b[i];
      s += quad_[i] * d * d;
    }
    return 2.0 * std::asin(std::clamp(0.5 * std::sqrt(s), 0.0, 1.0));
  }

  void normalize(std::vector<double>& a) const {
    const double n = norm(a);
    for (double& x : a) x /= n;
  }

  std::vector<double> exp(std::span<const double> base, std::span<const double> tangent) const {
    std::vector<double> v(tangent.begin(), tangent.end());
    const double along = inner(base, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= along * base[i];
    const double len = norm(v);
    std::vector<double> out(base.begin(), base.end());
    if (len == 0.0) return out;
    const double c = std::cos(len);
    const double s = std::sin(len) / len;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * base[i] + s * v[i];
    normalize(out);
    return out;
  }

  // Log_base(target), accumulated as weight * Log into `acc`.
  void accumulate_log(std::span<const double> base, std::span<const double> target, double weight,
                      std::vector<double>& acc) const {
    const double c = inner(base, target);
    double s2 = 0.0;
    for (std::size_t i = 0; i < quad_.size(); ++i) {
      const double r = target[i] - c * base[i];
      s2 += quad_[i] * r * r;
    }
    const double s = std::sqrt(s2);
    if (s == 0.0) {
      if (c < 0.0) throw Error("SRVF log map: antipodal points");
      return;
    }
    const double factor = weight * std::atan2(s, c) / s;
    for (std::size_t i = 0; i < quad_.size(); ++i) acc[i] += factor * (target[i] - c * base[i]);
  }

 private:
  std::vector<double> quad_;
};

// psi = sqrt(gamma'), renormalized to unit L2 norm. The derivative uses
// fourth-order centered differences in the interior and second-order
// one-sided differences at the ends; wherever a higher-order stencil is not
// positive (rough inputs) the node falls back to the second-order centered
// (first-order one-sided) difference, which is positive for any strictly
// increasing grid.
inline SrvfPoint srvf(const WarpingFunction& g) {
  validate_warping(g);
  const auto& v = g.values;
  const std::size_t n = v.size();
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> psi(n);
  psi[0] = (v[1] - v[0]) / h;
  psi[n - 1] = (v[n - 1] - v[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) psi[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  if (n >= 5) {
    auto refine = [&](std::size_t i, double d) {
      if (d > 0.0) psi[i] = d;
    };
    refine(0, (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h));
    refine(n - 1, (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h));
    for (std::size_t i = 2; i + 2 < n; ++i)
      refine(i, (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h));
  }
  for (double& p : psi) p = std::sqrt(p);
  HilbertSphere(n).normalize(psi);
  return {std::move(psi)};
}

// gamma(t) = int_0^t psi^2, trapezoid rule, rescaled so gamma(1) = 1.
inline WarpingFunction srvf_inverse(const SrvfPoint& psi) {
  const auto& p = psi.values;
  const std::size_t n = p.size();
  if (n < 2) throw ValidationError("SRVF grid needs at least 2 nodes");
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) g[i] = g[i - 1] + 0.5 * h * (p[i - 1] * p[i - 1] + p[i] * p[i]);
  const double total = g[n - 1];
  for (double& x : g) x /= total;
  g[0] = 0.0;
  g[n - 1] = 1.0;
  return {std::move(g)};
}

struct WarpingSolverOptions {
  int max_iterations = 200;
  double tolerance = 1e-8;
};

class WarpingSpace {
 public:
  using Point = WarpingFunction;
  static constexpr std::string_view kName = "warping";
  static constexpr std::size_t kDefaultGridSize = 100;

  using Options = WarpingSolverOptions;

  explicit WarpingSpace(std::size_t grid_size = kDefaultGridSize, Options options = {})
      : grid_size_(grid_size), options_(options), sphere_(grid_size) {
    if (grid_size < 3) throw ConfigError("warping grid needs at least 3 nodes");
  }

  std::size_t grid_size() const { return grid_size_; }
  const HilbertSphere& hilbert_sphere() const { return sphere_; }

  void validate(const Point& g) const {
    if (g.values.size() != grid_size_)
      throw ValidationError("warping grid has length " + std::to_string(g.values.size()) + ", expected " +
                            std::to_string(grid_size_));
    validate_warping(g);
  }

  double distance(const Point& a, const Point& b) const {
    if (a.values.size() != grid_size_ || b.values.size() != grid_size_)
      throw ValidationError("warping_distance: grid mismatch");
    return sphere_.arc(srvf(a).values, srvf(b).values);
  }

  SrvfPoint prepare(const Point& g) const { return srvf(g); }
  double prepared_distance(const SrvfPoint& a, const SrvfPoint& b) const { return sphere_.arc(a.values, b.values); }

  Point solve_frechet_mean(std::span<const Point> samples, std::span<const double> w) const {
    std::vector<std::size_t> support;
    std::vector<SrvfPoint> psis;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (w[i] == 0.0) continue;
      support.push_back(i);
      psis.push_back(srvf(samples[i]));
    }
    if (support.empty()) throw DegenerateWeightsError("warping mean: all weights are zero");
    const std::size_t m = support.size();

    std::vector<double> cost(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        const double d = sphere_.arc(psis[a].values, psis[b].values);
        cost[a] += w[support[b]] * d * d;
        cost[b] += w[support[a]] * d * d;
      }
    }
    const std::size_t start = static_cast<std::size_t>(std::min_element(cost.begin(), cost.end()) - cost.begin());

    std::vector<double> mu = psis[start].values;
    std::vector<double> grad(grid_size_);
    double grad_norm = 0.0;
    for (int iter = 0; iter <= options_.max_iterations; ++iter) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t a = 0; a < m; ++a) sphere_.accumulate_log(mu, psis[a].values, w[support[a]], grad);
      grad_norm = sphere_.norm(grad);
      if (grad_norm < options_.tolerance) return srvf_inverse({std::move(mu)});
      if (iter == options_.max_iterations) break;
      mu = sphere_.exp(mu, grad);
    }
    throw ConvergenceError("SRVF Karcher mean did not converge", options_.max_iterations, grad_norm);
  }

  const SolverCounter& solver_counter() const { return counter_; }

 private:
  std::size_t grid_size_;
  Options options_;
  HilbertSphere sphere_;
  SolverCounter counter_;
};

inline double warping_distance(const WarpingFunction& a, const WarpingFunction& b) {
  if (a.values.size() != b.values.size()) throw ValidationError("warping_distance: grid mismatch");
  return WarpingSpace(a.values.size()).distance(a, b);
}

inline WarpingFunction warping_karcher_mean(std::span<const WarpingFunction> samples, std::span<const double> w,
                                            WarpingSpace::Options options = {}) {
  if (samples.empty() || samples.size() != w.size()) throw Error("warping_karcher_mean: bad input sizes");
  check_weights(w);
  return WarpingSpace(samples.front().values.size(), options).solve_frechet_mean(samples, w);
}

}  // namespace mrf

#endif  // MRF_SPACES_WARPING_HPP_
