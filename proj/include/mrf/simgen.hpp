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

// Simulation scenarios. Every scenario shares the single-index model
//
//   eta(x) = alpha + (x - 0.5)' beta / sqrt(d),   x ~ Unif[0, 1]^d,
//
// with alpha, beta standard normal and fixed per dataset, maps eta to a
// conditional Fréchet mean m(x) in the response space and perturbs it with
// a space-specific noise map whose Fréchet mean is m(x).

#ifndef MRF_SIMGEN_HPP_
#define MRF_SIMGEN_HPP_

#include <boost/math/distributions/normal.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/spaces/euclidean.hpp"
#include "mrf/spaces/sphere.hpp"
#include "mrf/spaces/warping.hpp"
#include "mrf/spaces/wasserstein.hpp"

namespace mrf {

enum class SpaceKind { euclidean, wasserstein, sphere, warping };

inline std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return EuclideanSpace::kName;
    case SpaceKind::wasserstein: return WassersteinSpace::kName;
    case SpaceKind::sphere: return SphereSpace::kName;
    case SpaceKind::warping: return WarpingSpace::kName;
  }
  return "unknown";
}

inline SpaceKind parse_space_kind(std::string_view name) {
  if (name == "euclidean") return SpaceKind::euclidean;
  if (name == "wasserstein") return SpaceKind::wasserstein;
  if (name == "sphere") return SpaceKind::sphere;
  if (name == "warping") return SpaceKind::warping;
  throw ConfigError("unknown space '" + std::string(name) + "'");
}

struct ScenarioConfig {
  SpaceKind space = SpaceKind::euclidean;
  std::size_t n_train = 100;
  std::size_t d = 2;
  std::size_t n_test = 100;
  std::uint64_t seed = 0;
};

struct SingleIndexParams {
  double alpha = 0.0;
  std::vector<double> beta;

  friend bool operator==(const SingleIndexParams&, const SingleIndexParams&) = default;
};

template <class Rng>
SingleIndexParams draw_single_index_params(std::size_t d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SingleIndexParams p;
  p.alpha = normal(rng);
  p.beta.resize(d);
  for (double& b : p.beta) b = normal(rng);
  return p;
}

inline double eta(std::span<const double> x, const SingleIndexParams& p) {
  if (x.size() != p.beta.size()) throw ValidationError("eta: covariate dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - 0.5) * p.beta[i];
  return p.alpha + s / std::sqrt(static_cast<double>(x.size()));
}

template <class Point>
struct Dataset {
  Matrix x;
  std::vector<Point> y;
  std::vector<Point> truth;  // noiseless m(X_i)

  std::size_t size() const { return y.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

template <class Rng>
Matrix uniform_covariates(std::size_t n, std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) x(i, j) = unif(rng);
  return x;
}

inline double standard_normal_quantile(double u) {
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), u);
}

// ---------------------------------------------------------------------------
// Euclidean sanity scenario: m(x) = logistic(eta), Y = m + N(0, sd^2).

struct EuclideanScenario {
  double noise_sd = 0.1;
};

template <class Rng>
Dataset<double> gen_euclidean(std::size_t n, const SingleIndexParams& params, Rng& rng,
                              const EuclideanScenario& opts = {}) {
  Dataset<double> data{uniform_covariates(n, params.beta.size(), rng), {}, {}};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = logistic(eta(data.x.row(i), params));
    data.truth.push_back(m);
    data.y.push_back(opts.noise_sd > 0.0 ? m + opts.noise_sd * normal(rng) : m);
  }
  return data;
}

// ---------------------------------------------------------------------------
// Wasserstein: m(x) is N(mu, sigma^2) with mu = eta and
// sigma = sigma0 + gamma * logistic(eta); responses compose the quantile
// function with eps(v) = v - sin(pi k v) / |pi k|, k uniform on
// {-4..4} \ {0}.

struct WassersteinScenario {
  std::size_t grid_size = WassersteinSpace::kDefaultGridSize;
  double sigma0 = 1.0;
  double gamma = 2.5;
  bool noise = true;
};

inline double wasserstein_sigma(double eta_value, const WassersteinScenario& opts = {}) {
  return opts.sigma0 + opts.gamma * logistic(eta_value);
}

inline QuantileFunction normal_quantile_grid(double mu, double sigma, std::span<const double> grid) {
  QuantileFunction q;
  q.values.reserve(grid.size());
  for (double u : grid) q.values.push_back(mu + sigma * standard_normal_quantile(u));
  return q;
}

inline double distortion_noise(double v, int k) {
  const double pk = std::numbers::pi * static_cast<double>(k);
  return v - std::sin(pk * v) / std::abs(pk);
}

template <class Rng>
int draw_distortion_frequency(Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 7);
  const int r = pick(rng);
  return r < 4 ? r - 4 : r - 3;  // {-4,-3,-2,-1,1,2,3,4}
}

template <class Rng>
Dataset<QuantileFunction> gen_wasserstein(std::size_t n, const SingleIndexParams& params, Rng& rng,
                                          const WassersteinScenario& opts = {}) {
  const std::vector<double> grid = WassersteinSpace(opts.grid_size).grid();
  Dataset<QuantileFunction> data{uniform_covariates(n, params.beta.size(), rng), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const double e = eta(data.x.row(i), params);
    QuantileFunction m = normal_quantile_grid(e, wasserstein_sigma(e, opts), grid);
    QuantileFunction y = m;
    if (opts.noise) {
      const int k = draw_distortion_frequency(rng);
      for (double& v : y.values) v = distortion_noise(v, k);
    }
    data.truth.push_back(std::move(m));
    data.y.push_back(std::move(y));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Sphere: m(x) = g(nu), nu = logistic(eta), with
// g(nu) = (sqrt(1 - nu^2) cos(pi nu), sqrt(1 - nu^2) sin(pi nu), nu);
// Y = Exp_m(U), U isotropic Gaussian in the tangent plane.

struct SphereScenario {
  double noise_variance = 0.1;
};

inline SpherePoint sphere_mean_curve(double nu) {
  const double r = std::sqrt(std::max(0.0, 1.0 - nu * nu));
  return {{r * std::cos(std::numbers::pi * nu), r * std::sin(std::numbers::pi * nu), nu}};
}

// Orthonormal basis of the tangent plane at p: Gram-Schmidt of the
// coordinate axis least aligned with p, completed by a cross product.
inline std::pair<Vec3, Vec3> tangent_basis(const SpherePoint& p) {
  std::size_t axis = 0;
  for (std::size_t c = 1; c < 3; ++c)
    if (std::abs(p.coords[c]) < std::abs(p.coords[axis])) axis = c;
  Vec3 e{0.0, 0.0, 0.0};
  e[axis] = 1.0;
  Vec3 first = vec3::sub(e, vec3::scale(p.coords, vec3::dot(e, p.coords)));
  first = vec3::scale(first, 1.0 / vec3::norm(first));
  return {first, vec3::cross(p.coords, first)};
}

template <class Rng>
Dataset<SpherePoint> gen_sphere(std::size_t n, const SingleIndexParams& params, Rng& rng,
                                const SphereScenario& opts = {}) {
  Dataset<SpherePoint> data{uniform_covariates(n, params.beta.size(), rng), {}, {}};
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(opts.noise_variance);
  for (std::size_t i = 0; i < n; ++i) {
    const SpherePoint m = sphere_mean_curve(logistic(eta(data.x.row(i), params)));
    SpherePoint y = m;
    if (sd > 0.0) {
      const auto [e1, e2] = tangent_basis(m);
      const double z1 = sd * normal(rng);
      const double z2 = sd * normal(rng);
      y = sphere_exp(m, vec3::add(vec3::scale(e1, z1), vec3::scale(e2, z2)));
    }
    data.truth.push_back(m);
    data.y.push_back(y);
  }
  return data;
}

// ---------------------------------------------------------------------------
// Warping: m(x) = gamma_a(u) = (exp(4au) - 1) / (exp(4a) - 1) with
// a = 3 (logistic(eta) - 0.5). The SRVF of the mean is perturbed by a
// Gaussian process with exponential covariance tau^2 exp(-|s - t| / ell),
// projected onto the tangent space and pushed through the sphere's
// exponential map. Draws leaving the positive hemisphere are resampled.

struct WarpingScenario {
  std::size_t grid_size = WarpingSpace::kDefaultGridSize;
  double tau2 = 0.01;
  double length_scale = 0.3;
  int max_resamples = 100;
};

inline double exponential_warp(double a, double u) {
  if (std::abs(a) < 1e-12) return u;
  return std::expm1(4.0 * a * u) / std::expm1(4.0 * a);
}

inline WarpingFunction exponential_warping(double a, std::size_t grid_size) {
  WarpingFunction g;
  for (double u : warping_grid(grid_size)) g.values.push_back(exponential_warp(a, u));
  g.values.front() = 0.0;
  g.values.back() = 1.0;
  return g;
}

inline double warping_shape(double eta_value) { return 3.0 * (logistic(eta_value) - 0.5); }

// Template curve y0(u) = (1 - (u - 0.5)^2) sin(9 pi u); responses are y0
// composed with their warping. Only used for export/visualization.
inline double warping_template(double u) {
  return (1.0 - (u - 0.5) * (u - 0.5)) * std::sin(9.0 * std::numbers::pi * u);
}

// Zero-mean GP with covariance tau2 * exp(-|s - t| / ell) on an equispaced
// grid; exact as an AR(1) recursion.
template <class Rng>
std::vector<double> exponential_gp(std::size_t size, double tau2, double length_scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double tau = std::sqrt(tau2);
  const double rho = std::exp(-1.0 / (static_cast<double>(size - 1) * length_scale));
  const double innovation = tau * std::sqrt(1.0 - rho * rho);
  std::vector<double> v(size);
  v[0] = tau * normal(rng);
  for (std::size_t i = 1; i < size; ++i) v[i] = rho * v[i - 1] + innovation * normal(rng);
  return v;
}

template <class Rng>
WarpingFunction perturb_warping(const WarpingFunction& mean, const WarpingScenario& opts, Rng& rng) {
  const SrvfPoint psi = srvf(mean);
  if (!(opts.tau2 > 0.0)) return srvf_inverse(psi);
  const HilbertSphere sphere(psi.values.size());
  for (int attempt = 0; attempt < opts.max_resamples; ++attempt) {
    std::vector<double> noisy =
        sphere.exp(psi.values, exponential_gp(psi.values.size(), opts.tau2, opts.length_scale, rng));
    bool positive = true;
    for (double v : noisy) positive = positive && v > 0.0;
    if (positive) return srvf_inverse({std::move(noisy)});
  }
  throw Error("warping noise left the positive hemisphere " + std::to_string(opts.max_resamples) + " times");
}

template <class Rng>
Dataset<WarpingFunction> gen_warping(std::size_t n, const SingleIndexParams& params, Rng& rng,
                                     const WarpingScenario& opts = {}) {
  Dataset<WarpingFunction> data{uniform_covariates(n, params.beta.size(), rng), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    WarpingFunction m = exponential_warping(warping_shape(eta(data.x.row(i), params)), opts.grid_size);
    data.y.push_back(perturb_warping(m, opts, rng));
    data.truth.push_back(std::move(m));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Scenario traits: ties a space type to its generator and default options.

template <class S>
struct Scenario;

template <>
struct Scenario<EuclideanSpace> {
  using Options = EuclideanScenario;
  static constexpr SpaceKind kKind = SpaceKind::euclidean;
  static EuclideanSpace make_space(const Options&) { return EuclideanSpace(); }
  static std::size_t grid_size(const Options&) { return 1; }
  template <class Rng>
  static Dataset<double> generate(std::size_t n, const SingleIndexParams& p, Rng& rng, const Options& o) {
    return gen_euclidean(n, p, rng, o);
  }
};

template <>
struct Scenario<WassersteinSpace> {
  using Options = WassersteinScenario;
  static constexpr SpaceKind kKind = SpaceKind::wasserstein;
  static WassersteinSpace make_space(const Options& o) { return WassersteinSpace(o.grid_size); }
  static std::size_t grid_size(const Options& o) { return o.grid_size; }
  template <class Rng>
  static Dataset<QuantileFunction> generate(std::size_t n, const SingleIndexParams& p, Rng& rng, const Options& o) {
    return gen_wasserstein(n, p, rng, o);
  }
};

template <>
struct Scenario<SphereSpace> {
  using Options = SphereScenario;
  static constexpr SpaceKind kKind = SpaceKind::sphere;
  static SphereSpace make_space(const Options&) { return SphereSpace(); }
  static std::size_t grid_size(const Options&) { return 3; }
  template <class Rng>
  static Dataset<SpherePoint> generate(std::size_t n, const SingleIndexParams& p, Rng& rng, const Options& o) {
    return gen_sphere(n, p, rng, o);
  }
};

template <>
struct Scenario<WarpingSpace> {
  using Options = WarpingScenario;
  static constexpr SpaceKind kKind = SpaceKind::warping;
  static WarpingSpace make_space(const Options& o) { return WarpingSpace(o.grid_size); }
  static std::size_t grid_size(const Options& o) { return o.grid_size; }
  template <class Rng>
  static Dataset<WarpingFunction> generate(std::size_t n, const SingleIndexParams& p, Rng& rng, const Options& o) {
    return gen_warping(n, p, rng, o);
  }
};

// Calls fn(SpaceTag<S>{}) with the space type matching `kind`.
template <class S>
struct SpaceTag {
  using type = S;
};

template <class Fn>
decltype(auto) with_space(SpaceKind kind, Fn&& fn) {
  switch (kind) {
    case SpaceKind::euclidean: return fn(SpaceTag<EuclideanSpace>{});
    case SpaceKind::wasserstein: return fn(SpaceTag<WassersteinSpace>{});
    case SpaceKind::sphere: return fn(SpaceTag<SphereSpace>{});
    case SpaceKind::warping: return fn(SpaceTag<WarpingSpace>{});
  }
  throw ConfigError("unknown space kind");
}

// One replicate: fresh single-index parameters shared by a training set and
// an independent test set.
template <class Point>
struct Replicate {
  SingleIndexParams params;
  Dataset<Point> train;
  Dataset<Point> test;

  friend bool operator==(const Replicate&, const Replicate&) = default;
};

template <class S>
Replicate<typename S::Point> make_replicate(const ScenarioConfig& cfg,
                                            const typename Scenario<S>::Options& opts = {}) {
  if (cfg.d == 0) throw ConfigError("scenario needs d >= 1");
  std::mt19937_64 rng(cfg.seed);
  Replicate<typename S::Point> rep;
  rep.params = draw_single_index_params(cfg.d, rng);
  rep.train = Scenario<S>::generate(cfg.n_train, rep.params, rng, opts);
  rep.test = Scenario<S>::generate(cfg.n_test, rep.params, rng, opts);
  return rep;
}

// ---------------------------------------------------------------------------
// Text dataset format. Doubles are written in shortest round-trip form so a
// dump re-reads bit-exactly.
//
//   mrf-dataset 1
//   space <name>
//   n <rows>
//   d <covariates>
//   seed <u64>
//   grid <grid size>
//   payload <doubles per response>
//   alpha <double>
//   beta <d doubles>
//   data
//   <d covariates> <response payload> <true-mean payload>     (n rows)

inline void flatten(double p, std::vector<double>& out) { out.push_back(p); }
inline void flatten(const QuantileFunction& p, std::vector<double>& out) {
  out.insert(out.end(), p.values.begin(), p.values.end());
}
inline void flatten(const SpherePoint& p, std::vector<double>& out) {
  out.insert(out.end(), p.coords.begin(), p.coords.end());
}
inline void flatten(const WarpingFunction& p, std::vector<double>& out) {
  out.insert(out.end(), p.values.begin(), p.values.end());
}

template <class Point>
Point unflatten(std::span<const double> v);
template <>
inline double unflatten<double>(std::span<const double> v) { return v[0]; }
template <>
inline QuantileFunction unflatten<QuantileFunction>(std::span<const double> v) {
  return {std::vector<double>(v.begin(), v.end())};
}
template <>
inline SpherePoint unflatten<SpherePoint>(std::span<const double> v) { return {{v[0], v[1], v[2]}}; }
template <>
inline WarpingFunction unflatten<WarpingFunction>(std::span<const double> v) {
  return {std::vector<double>(v.begin(), v.end())};
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error("cannot parse number '" + std::string(token) + "'");
  return v;
}

struct DatasetHeader {
  SpaceKind space = SpaceKind::euclidean;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::size_t grid = 0;
  std::size_t payload = 0;
  SingleIndexParams params;

  friend bool operator==(const DatasetHeader&, const DatasetHeader&) = default;
};

template <class Point>
void write_dataset_rows(std::ostream& out, const Dataset<Point>& data) {
  std::vector<double> buf;
  for (std::size_t i = 0; i < data.size(); ++i) {
    buf.clear();
    for (double v : data.x.row(i)) buf.push_back(v);
    flatten(data.y[i], buf);
    flatten(data.truth[i], buf);
    for (std::size_t k = 0; k < buf.size(); ++k) out << (k ? " " : "") << format_double(buf[k]);
    out << '\n';
  }
}

template <class Point>
void write_dataset(std::ostream& out, const DatasetHeader& header, const Dataset<Point>& data) {
  out << "mrf-dataset 1\n"
      << "space " << to_string(header.space) << "\n"
      << "n " << data.size() << "\n"
      << "d " << data.x.cols() << "\n"
      << "seed " << header.seed << "\n"
      << "grid " << header.grid << "\n";
  std::vector<double> buf;
  if (!data.y.empty()) flatten(data.y.front(), buf);
  out << "payload " << buf.size() << "\n";
  out << "alpha " << format_double(header.params.alpha) << "\n";
  out << "beta";
  for (double b : header.params.beta) out << ' ' << format_double(b);
  out << "\ndata\n";
  write_dataset_rows(out, data);
}

// A whole replicate in one file: the training set as above, then a line
// `test <rows>` followed by the test rows in the same layout.
template <class Point>
void write_replicate(std::ostream& out, const DatasetHeader& header, const Replicate<Point>& rep) {
  write_dataset(out, header, rep.train);
  out << "test " << rep.test.size() << "\n";
  write_dataset_rows(out, rep.test);
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline std::vector<std::string_view> expect_key(const std::string& line, std::string_view key) {
  auto tokens = split_ws(line);
  if (tokens.empty() || tokens.front() != key) throw Error("dataset header: expected '" + std::string(key) + "'");
  return tokens;
}

inline std::uint64_t parse_u64(std::string_view token) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error("cannot parse integer '" + std::string(token) + "'");
  return v;
}

}  // namespace detail

inline DatasetHeader read_dataset_header(std::istream& in) {
  std::string line;
  auto next = [&](std::string_view key) {
    if (!std::getline(in, line)) throw Error("dataset header truncated");
    return detail::expect_key(line, key);
  };
  auto single = [&](std::string_view key) {
    auto t = next(key);
    if (t.size() != 2) throw Error("dataset header: malformed '" + std::string(key) + "' line");
    return std::string(t[1]);
  };
  if (single("mrf-dataset") != "1") throw Error("unsupported dataset version");
  DatasetHeader h;
  h.space = parse_space_kind(single("space"));
  h.n = detail::parse_u64(single("n"));
  h.d = detail::parse_u64(single("d"));
  h.seed = detail::parse_u64(single("seed"));
  h.grid = detail::parse_u64(single("grid"));
  h.payload = detail::parse_u64(single("payload"));
  h.params.alpha = parse_double(single("alpha"));
  const auto beta = next("beta");
  for (std::size_t k = 1; k < beta.size(); ++k) h.params.beta.push_back(parse_double(beta[k]));
  if (h.params.beta.size() != h.d) throw Error("dataset header: beta length differs from d");
  next("data");
  return h;
}

template <class Point>
Dataset<Point> read_dataset_rows(std::istream& in, const DatasetHeader& h) {
  Dataset<Point> data{Matrix(h.n, h.d), {}, {}};
  std::string line;
  std::vector<double> row;
  const std::size_t width = h.d + 2 * h.payload;
  for (std::size_t i = 0; i < h.n; ++i) {
    if (!std::getline(in, line)) throw Error("dataset truncated at row " + std::to_string(i));
    row.clear();
    for (std::string_view t : detail::split_ws(line)) row.push_back(parse_double(t));
    if (row.size() != width) throw Error("dataset row " + std::to_string(i) + " has wrong width");
    for (std::size_t j = 0; j < h.d; ++j) data.x(i, j) = row[j];
    const std::span<const double> all(row);
    data.y.push_back(unflatten<Point>(all.subspan(h.d, h.payload)));
    data.truth.push_back(unflatten<Point>(all.subspan(h.d + h.payload, h.payload)));
  }
  return data;
}

template <class Point>
std::pair<DatasetHeader, Dataset<Point>> read_dataset(std::istream& in) {
  DatasetHeader h = read_dataset_header(in);
  return {h, read_dataset_rows<Point>(in, h)};
}

template <class Point>
std::pair<DatasetHeader, Replicate<Point>> read_replicate(std::istream& in) {
  auto [header, train] = read_dataset<Point>(in);
  std::string line;
  if (!std::getline(in, line)) throw Error("replicate file has no test section");
  const auto tokens = detail::expect_key(line, "test");
  if (tokens.size() != 2) throw Error("malformed 'test' line");
  DatasetHeader test_header = header;
  test_header.n = detail::parse_u64(tokens[1]);
  Replicate<Point> rep{header.params, std::move(train), read_dataset_rows<Point>(in, test_header)};
  return {header, std::move(rep)};
}

}  // namespace mrf

#endif  // MRF_SIMGEN_HPP_
