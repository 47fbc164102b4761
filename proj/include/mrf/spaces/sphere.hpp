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

#ifndef MRF_SPACES_SPHERE_HPP_
#define MRF_SPACES_SPHERE_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <span>

#include "mrf/metric_core.hpp"

namespace mrf {

using Vec3 = std::array<double, 3>;

namespace vec3 {

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

}  // namespace vec3

struct SpherePoint {
  Vec3 coords{0.0, 0.0, 1.0};

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;
};

inline constexpr double kUnitNormTolerance = 1e-9;

// Great-circle distance. atan2(|a x b|, a.b) equals arccos(a.b) but keeps full
// precision for nearly equal and nearly antipodal points.
inline double sphere_distance(const SpherePoint& a, const SpherePoint& b) {
  return std::atan2(vec3::norm(vec3::cross(a.coords, b.coords)), vec3::dot(a.coords, b.coords));
}

// Exp_base(U) = cos|U| base + sin|U| U/|U|. Components of U along `base` are
// removed first.
inline SpherePoint sphere_exp(const SpherePoint& base, const Vec3& tangent) {
  const Vec3 u = vec3::sub(tangent, vec3::scale(base.coords, vec3::dot(base.coords, tangent)));
  const double len = vec3::norm(u);
  if (len == 0.0) return base;
  Vec3 out = vec3::add(vec3::scale(base.coords, std::cos(len)), vec3::scale(u, std::sin(len) / len));
  return {vec3::scale(out, 1.0 / vec3::norm(out))};
}

// Inverse of sphere_exp on the complement of the cut locus.
inline Vec3 sphere_log(const SpherePoint& base, const SpherePoint& target) {
  const double c = vec3::dot(base.coords, target.coords);
  const Vec3 v = vec3::sub(target.coords, vec3::scale(base.coords, c));
  const double s = vec3::norm(v);
  if (s == 0.0) {
    if (c < 0.0) throw Error("sphere_log: target is antipodal to base");
    return {0.0, 0.0, 0.0};
  }
  if (c < 0.0 && s < 1e-15) throw Error("sphere_log: target is antipodal to base");
  return vec3::scale(v, std::atan2(s, c) / s);
}

struct SphereSolverOptions {
  int max_iterations = 200;
  double tolerance = 1e-9;
};

// The unit sphere S^2 in R^3 with the great-circle metric. Weighted means
// are Karcher means found by Riemannian gradient descent with unit step,
// started at the weighted medoid.
class SphereSpace {
 public:
  using Point = SpherePoint;
  static constexpr std::string_view kName = "sphere";

  using Options = SphereSolverOptions;

  SphereSpace() = default;
  explicit SphereSpace(Options options) : options_(options) {}

  const Options& options() const { return options_; }

  void validate(const Point& p) const {
    for (double c : p.coords)
      if (!std::isfinite(c)) throw ValidationError("sphere point is not finite");
    if (std::abs(vec3::norm(p.coords) - 1.0) > kUnitNormTolerance)
      throw ValidationError("sphere point is not unit norm");
  }

  double distance(const Point& a, const Point& b) const { return sphere_distance(a, b); }

  Point solve_frechet_mean(std::span<const Point> samples, std::span<const double> w) const {
    check_hemisphere(samples, w);
    SpherePoint mu = samples[weighted_medoid(*this, samples, w)];
    double grad_norm = 0.0;
    for (int iter = 0; iter < options_.max_iterations; ++iter) {
      const Vec3 g = tangent_mean(mu, samples, w);
      grad_norm = vec3::norm(g);
      if (grad_norm < options_.tolerance) return mu;
      mu = sphere_exp(mu, g);
    }
    grad_norm = vec3::norm(tangent_mean(mu, samples, w));
    if (grad_norm < options_.tolerance) return mu;
    throw ConvergenceError("sphere Karcher mean did not converge", options_.max_iterations, grad_norm);
  }

  // Riemannian gradient of -1/2 sum_i w_i d(mu, Y_i)^2, i.e. sum_i w_i Log_mu(Y_i).
  static Vec3 tangent_mean(const SpherePoint& mu, std::span<const Point> samples,
                           std::span<const double> w) {
    Vec3 g{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (w[i] == 0.0) continue;
      g = vec3::add(g, vec3::scale(sphere_log(mu, samples[i]), w[i]));
    }
    return g;
  }

  const SolverCounter& solver_counter() const { return counter_; }

 private:
  // The Karcher mean is unique only within an open hemisphere; reject inputs
  // with nearly antipodal pairs.
  void check_hemisphere(std::span<const Point> samples, std::span<const double> w) const {
    constexpr double kLimit = std::numbers::pi - 1e-6;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (w[i] == 0.0) continue;
      for (std::size_t j = i + 1; j < samples.size(); ++j) {
        if (w[j] == 0.0) continue;
        if (sphere_distance(samples[i], samples[j]) >= kLimit)
          throw Error("sphere Karcher mean: samples " + std::to_string(i) + " and " +
                      std::to_string(j) + " are nearly antipodal");
      }
    }
  }

  Options options_;
  SolverCounter counter_;
};

inline SpherePoint sphere_karcher_mean(std::span<const SpherePoint> samples, std::span<const double> w,
                                       SphereSpace::Options options = {}) {
  if (samples.empty() || samples.size() != w.size()) throw Error("sphere_karcher_mean: bad input sizes");
  check_weights(w);
  return SphereSpace(options).solve_frechet_mean(samples, w);
}

}  // namespace mrf

#endif  // MRF_SPACES_SPHERE_HPP_
