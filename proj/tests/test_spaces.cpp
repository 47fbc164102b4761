#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mrf/metric_core.hpp"
#include "test_support.hpp"

namespace mrf {
namespace {

using testing::Rng;

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ----------------------------------------------------------------- Wasserstein

TEST(Wasserstein, GridAndQuadrature) {
  const WassersteinSpace space(4);
  const std::vector<double> grid = space.grid();
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.2);
  EXPECT_DOUBLE_EQ(grid.back(), 0.8);
  // Trapezoid weights (1, 2, 2, 1) / 6.
  const QuantileFunction zero{{0, 0, 0, 0}};
  const QuantileFunction q{{1, 1, 1, 2}};
  EXPECT_NEAR(space.distance(zero, q), std::sqrt(1.0 / 6 + 2.0 / 6 + 2.0 / 6 + 4.0 / 6), 1e-15);
}

TEST(Wasserstein, ShiftedNormals) {
  const WassersteinSpace space;
  const QuantileFunction a = normal_quantile_grid(0.0, 1.0, space.grid());
  const QuantileFunction b = normal_quantile_grid(2.0, 1.0, space.grid());
  EXPECT_NEAR(space.distance(a, b), 2.0, 1e-12);

  const std::vector<QuantileFunction> y{a, b};
  const std::vector<double> w{0.5, 0.5};
  const QuantileFunction mean = weighted_frechet_mean(space, std::span<const QuantileFunction>(y), w);
  const QuantileFunction expected = normal_quantile_grid(1.0, 1.0, space.grid());
  EXPECT_LT(max_abs_diff(mean.values, expected.values), 1e-12);
}

TEST(Wasserstein, MeanOfScaledNormalsAveragesSigma) {
  const WassersteinSpace space;
  const std::vector<QuantileFunction> y{normal_quantile_grid(0.0, 1.0, space.grid()),
                                        normal_quantile_grid(0.0, 3.0, space.grid())};
  const std::vector<double> w{0.25, 0.75};
  const QuantileFunction mean = weighted_frechet_mean(space, std::span<const QuantileFunction>(y), w);
  EXPECT_LT(max_abs_diff(mean.values, normal_quantile_grid(0.0, 2.5, space.grid()).values), 1e-12);
}

TEST(Wasserstein, MeanIsMonotoneAndMinimizes) {
  Rng rng(31);
  const WassersteinSpace space;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<QuantileFunction> y;
    for (int i = 0; i < 7; ++i) y.push_back(testing::random_quantile(rng));
    const std::vector<double> w = testing::random_simplex(y.size(), rng);
    const QuantileFunction mean = weighted_frechet_mean(space, std::span<const QuantileFunction>(y), w);
    EXPECT_NO_THROW(space.validate(mean));
    const double f = frechet_functional(space, std::span<const QuantileFunction>(y), w, mean);
    // Perturbing the mean never helps.
    for (int probe = 0; probe < 10; ++probe) {
      QuantileFunction other = mean;
      const double shift = 0.01 * (probe - 5);
      for (std::size_t m = 0; m < other.values.size(); ++m) other.values[m] += shift * (1.0 + 0.01 * m);
      EXPECT_LE(f, frechet_functional(space, std::span<const QuantileFunction>(y), w, other) + 1e-12);
    }
  }
}

TEST(Wasserstein, FreeFunctionsAgreeWithSpace) {
  Rng rng(32);
  const QuantileFunction a = testing::random_quantile(rng);
  const QuantileFunction b = testing::random_quantile(rng);
  EXPECT_EQ(wasserstein_distance(a, b), WassersteinSpace().distance(a, b));
  const std::vector<QuantileFunction> y{a, b};
  const std::vector<double> w{0.3, 0.7};
  EXPECT_EQ(wasserstein_mean(y, w), WassersteinSpace().solve_frechet_mean(y, w));
}

// ---------------------------------------------------------------------- Sphere

TEST(Sphere, ExpLogExamples) {
  const SpherePoint e1{{1, 0, 0}};
  const SpherePoint e2{{0, 1, 0}};
  const Vec3 v = sphere_log(e1, e2);
  EXPECT_NEAR(v[0], 0.0, 1e-15);
  EXPECT_NEAR(v[1], std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(v[2], 0.0, 1e-15);
  const SpherePoint back = sphere_exp(e1, v);
  EXPECT_NEAR(back.coords[0], 0.0, 1e-15);
  EXPECT_NEAR(back.coords[1], 1.0, 1e-15);
  EXPECT_EQ(sphere_exp(e1, {0, 0, 0}), e1);
  const Vec3 zero = sphere_log(e1, e1);
  EXPECT_EQ(vec3::norm(zero), 0.0);
  EXPECT_THROW(sphere_log(e1, SpherePoint{{-1, 0, 0}}), Error);
}

TEST(Sphere, ExpLogRoundTrip) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const SpherePoint p = testing::random_sphere_point(rng);
    const SpherePoint q = testing::sphere_point_near(p, 2.5, rng);
    const Vec3 v = sphere_log(p, q);
    EXPECT_NEAR(vec3::dot(v, p.coords), 0.0, 1e-12);
    EXPECT_NEAR(vec3::norm(v), sphere_distance(p, q), 1e-12);
    const SpherePoint r = sphere_exp(p, v);
    EXPECT_LT(sphere_distance(q, r), 1e-12);
  }
}

TEST(Sphere, SymmetricConfigurationMeanIsPole) {
  const double t = 0.4;
  const std::vector<SpherePoint> y{{{std::sin(t), 0, std::cos(t)}},
                                   {{-std::sin(t), 0, std::cos(t)}},
                                   {{0, std::sin(t), std::cos(t)}},
                                   {{0, -std::sin(t), std::cos(t)}}};
  const std::vector<double> w(4, 0.25);
  const SpherePoint mean = weighted_frechet_mean(SphereSpace(), std::span<const SpherePoint>(y), w);
  EXPECT_LT(sphere_distance(mean, SpherePoint{{0, 0, 1}}), 1e-8);
}

TEST(Sphere, WeightedGeodesicPoint) {
  // Two points: the weighted mean lies on the geodesic at fraction w2.
  const SpherePoint a{{1, 0, 0}};
  const SpherePoint b{{0, 0, 1}};
  const std::vector<SpherePoint> y{a, b};
  const std::vector<double> w{0.75, 0.25};
  const SpherePoint mean = weighted_frechet_mean(SphereSpace(), std::span<const SpherePoint>(y), w);
  const double angle = 0.25 * std::numbers::pi / 2;
  EXPECT_NEAR(mean.coords[0], std::cos(angle), 1e-9);
  EXPECT_NEAR(mean.coords[2], std::sin(angle), 1e-9);
}

TEST(Sphere, KarcherMeanIsLocalMinimum) {
  Rng rng(42);
  const SphereSpace space;
  for (int trial = 0; trial < 30; ++trial) {
    const SpherePoint center = testing::random_sphere_point(rng);
    std::vector<SpherePoint> y;
    for (int i = 0; i < 9; ++i) y.push_back(testing::sphere_point_near(center, 1.0, rng));
    const std::vector<double> w = testing::random_simplex(y.size(), rng);
    const SpherePoint mean = weighted_frechet_mean(space, std::span<const SpherePoint>(y), w);
    EXPECT_NEAR(vec3::norm(mean.coords), 1.0, 1e-12);
    EXPECT_LT(vec3::norm(SphereSpace::tangent_mean(mean, y, w)), 1e-9);
    const double f = frechet_functional(space, std::span<const SpherePoint>(y), w, mean);
    const auto [e1, e2] = tangent_basis(mean);
    for (int k = 0; k < 16; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / 16.0;
      const Vec3 dir = vec3::add(vec3::scale(e1, 1e-3 * std::cos(phi)), vec3::scale(e2, 1e-3 * std::sin(phi)));
      EXPECT_LE(f, frechet_functional(space, std::span<const SpherePoint>(y), w, sphere_exp(mean, dir)));
    }
  }
}

TEST(Sphere, RejectsAntipodalSupport) {
  const std::vector<SpherePoint> y{{{1, 0, 0}}, {{-1, 0, 0}}};
  const std::vector<double> w{0.5, 0.5};
  EXPECT_THROW(weighted_frechet_mean(SphereSpace(), std::span<const SpherePoint>(y), w), Error);
  // A zero weight removes the conflict.
  const std::vector<double> w2{1.0, 0.0};
  EXPECT_EQ(weighted_frechet_mean(SphereSpace(), std::span<const SpherePoint>(y), w2), y[0]);
}

TEST(Sphere, ConvergenceErrorCarriesDiagnostics) {
  const std::vector<SpherePoint> y{{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}};
  const std::vector<double> w{0.2, 0.3, 0.5};
  try {
    SphereSpace(SphereSolverOptions{1, 1e-15}).solve_frechet_mean(y, w);
    FAIL() << "expected non-convergence";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 1);
    EXPECT_GT(e.grad_norm(), 0.0);
  }
}

// --------------------------------------------------------------------- Warping

// Closed form distance from the identity to gamma_a.
double identity_distance_exact(double a) {
  const double inner = std::sqrt(4.0 * a / std::expm1(4.0 * a)) * std::expm1(2.0 * a) / (2.0 * a);
  return std::acos(std::min(1.0, inner));
}

TEST(Warping, SrvfOfIdentityIsOne) {
  const SrvfPoint psi = srvf(exponential_warping(0.0, 50));
  for (double v : psi.values) EXPECT_NEAR(v, 1.0, 1e-14);
  const WarpingFunction g = srvf_inverse(psi);
  EXPECT_LT(max_abs_diff(g.values, warping_grid(50)), 1e-14);
}

TEST(Warping, SrvfOfSquare) {
  const std::vector<double> t = warping_grid(100);
  WarpingFunction g;
  for (double u : t) g.values.push_back(u * u);
  const SrvfPoint psi = srvf(g);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_NEAR(psi.values[i], std::sqrt(2.0 * t[i]), 2e-3) << i;
}

TEST(Warping, SrvfRoundTripAtExtremeShapes) {
  for (double a = -3.0; a <= 3.0; a += 0.25) {
    const WarpingFunction g = exponential_warping(a, 100);
    const WarpingFunction back = srvf_inverse(srvf(g));
    EXPECT_LT(max_abs_diff(g.values, back.values), 1e-3) << "a = " << a;
    EXPECT_NO_THROW(validate_warping(back));
  }
}

TEST(Warping, SrvfHasUnitNorm) {
  Rng rng(51);
  const HilbertSphere sphere(100);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(sphere.norm(srvf(testing::random_warping(rng)).values), 1.0, 1e-12);
}

TEST(Warping, DistanceMatchesClosedForm) {
  for (double a : {-1.0, 0.3, 1.0, 2.0, 3.0}) {
    const double exact = identity_distance_exact(a);
    const double coarse = warping_distance(exponential_warping(0.0, 100), exponential_warping(a, 100));
    const double fine = warping_distance(exponential_warping(0.0, 1000), exponential_warping(a, 1000));
    EXPECT_NEAR(coarse, exact, 5e-3) << "a = " << a;
    EXPECT_NEAR(fine, exact, 2e-4) << "a = " << a;
    EXPECT_LT(std::abs(fine - exact), std::abs(coarse - exact) + 1e-12);
  }
}

TEST(Warping, DistanceIsBounded) {
  Rng rng(52);
  for (int i = 0; i < 50; ++i) {
    const double d = warping_distance(testing::random_warping(rng), testing::random_warping(rng));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, std::numbers::pi / 2 + 1e-12);
  }
}

TEST(Warping, KarcherMidpointOfTwo) {
  const WarpingSpace space;
  const std::vector<WarpingFunction> y{exponential_warping(-1.0, 100), exponential_warping(1.5, 100)};
  const std::vector<double> w{0.5, 0.5};
  const WarpingFunction mean = weighted_frechet_mean(space, std::span<const WarpingFunction>(y), w);
  const HilbertSphere& sphere = space.hilbert_sphere();
  std::vector<double> mid(100);
  const SrvfPoint p = srvf(y[0]);
  const SrvfPoint q = srvf(y[1]);
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = p.values[i] + q.values[i];
  sphere.normalize(mid);
  EXPECT_LT(max_abs_diff(mean.values, srvf_inverse({mid}).values), 1e-6);
  EXPECT_NEAR(space.distance(mean, y[0]), space.distance(mean, y[1]), 1e-3);
}

TEST(Warping, KarcherOfIdenticalSamplesIsRoundTrip) {
  const WarpingFunction g = exponential_warping(0.8, 100);
  const std::vector<WarpingFunction> y{g, g, g};
  const std::vector<double> w{0.2, 0.3, 0.5};
  const WarpingFunction mean = warping_karcher_mean(y, w);
  EXPECT_LT(max_abs_diff(mean.values, srvf_inverse(srvf(g)).values), 1e-12);
}

TEST(Warping, KarcherMeanIsStationary) {
  Rng rng(53);
  const WarpingSpace space;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<WarpingFunction> y;
    for (int i = 0; i < 6; ++i) y.push_back(testing::random_warping(rng));
    const std::vector<double> w = testing::random_simplex(y.size(), rng);
    const WarpingFunction mean = weighted_frechet_mean(space, std::span<const WarpingFunction>(y), w);
    EXPECT_NO_THROW(space.validate(mean));
  }
}

TEST(Warping, RejectsBadGrids) {
  EXPECT_THROW(WarpingSpace(2), ConfigError);
  EXPECT_THROW(validate_warping({{0.0, 0.5, 0.9}}), ValidationError);
  EXPECT_THROW(validate_warping({{0.0, 0.5, 0.5, 1.0}}), ValidationError);
  EXPECT_THROW(WarpingSpace(4).validate(exponential_warping(0.0, 5)), ValidationError);
}

// --------------------------------------------------- Properties for all spaces

template <class S>
void check_one_hot(const S& space, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<typename S::Point> y;
  for (int i = 0; i < 5; ++i) y.push_back(testing::random_point<S>(rng));
  for (std::size_t k = 0; k < y.size(); ++k) {
    std::vector<double> w(y.size(), 0.0);
    w[k] = 1.0;
    const auto mean = weighted_frechet_mean(space, std::span<const typename S::Point>(y), w);
    if constexpr (std::is_same_v<S, WarpingSpace>) {
      EXPECT_LT(max_abs_diff(mean.values, y[k].values), 1e-3);
    } else {
      EXPECT_LT(space.distance(mean, y[k]), 1e-9) << S::kName;
    }
  }
}

template <class S>
void check_not_worse_than_medoid(const S& space, std::uint64_t seed) {
  Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<typename S::Point> y;
    if constexpr (std::is_same_v<S, SphereSpace>) {
      const SpherePoint c = testing::random_sphere_point(rng);
      for (int i = 0; i < 8; ++i) y.push_back(testing::sphere_point_near(c, 1.2, rng));
    } else {
      for (int i = 0; i < 8; ++i) y.push_back(testing::random_point<S>(rng));
    }
    const std::vector<double> w = testing::random_simplex(y.size(), rng);
    const std::span<const typename S::Point> ys(y);
    const auto mean = weighted_frechet_mean(space, ys, w);
    const double f = frechet_functional(space, ys, w, mean);
    for (const auto& p : y) EXPECT_LE(f, frechet_functional(space, ys, w, p) + 1e-12) << S::kName;
  }
}

TEST(AllSpaces, OneHotWeightsReturnTheSample) {
  check_one_hot(EuclideanSpace(), 61);
  check_one_hot(WassersteinSpace(), 62);
  check_one_hot(SphereSpace(), 63);
  check_one_hot(WarpingSpace(), 64);
}

TEST(AllSpaces, SolverNeverWorseThanAnySample) {
  check_not_worse_than_medoid(EuclideanSpace(), 71);
  check_not_worse_than_medoid(WassersteinSpace(), 72);
  check_not_worse_than_medoid(SphereSpace(), 73);
  check_not_worse_than_medoid(WarpingSpace(), 74);
}

}  // namespace
}  // namespace mrf
