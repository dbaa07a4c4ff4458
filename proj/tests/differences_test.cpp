#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frolov/differences.hpp"

using frolov::Box;
using frolov::Scale;
using frolov::SeminormGrid;
using frolov::SmoothnessParams;
using frolov::SupportedFunction;
using frolov::TensorFunction;

namespace {

double tent(double x) { return std::max(0.0, 1.0 - std::abs(x)); }

SupportedFunction tent_1d() {
  return {1, [](std::span<const double> x) { return tent(x[0]); }, Box{{-1.0}, {1.0}}, false};
}

TensorFunction bump_2d() {
  TensorFunction f;
  f.factors = {frolov::bspline_bump(2, 0.0, 1.0), frolov::bspline_bump(3, 0.1, 0.9)};
  f.support = Box::unit(2);
  return f;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Straight nested-loop evaluation of the discretized seminorm, written
// without the library's level engine, for comparison.
double brute_seminorm(const std::function<double(double, double)>& f, int d, const Box& support,
                      const SmoothnessParams& sp, const SeminormGrid& g, Scale scale) {
  const int m = sp.order();
  const double p = sp.p, theta = sp.theta;
  const int G = g.lp_grid, Q = g.quad_points, J = g.j_max;
  std::vector<double> lo(2), w(2);
  for (int i = 0; i < d; ++i) {
    lo[i] = support.lo[i] - 0.5 * m;
    w[i] = (support.hi[i] - support.lo[i] + m) / G;
  }
  const double cell = d == 1 ? w[0] : w[0] * w[1];
  const int G2 = d == 1 ? 1 : G, J2 = d == 1 ? 0 : J;
  const double dh = 2.0 / Q;

  auto rect = [&](int j1, int j2, double x1, double x2) {
    // Mean of |mixed difference| over h in [-1,1]^d scaled by 2^-j per axis.
    const bool a1 = j1 > 0, a2 = d == 2 && j2 > 0;
    const int q1n = a1 ? Q : 1, q2n = a2 ? Q : 1;
    const int m1 = a1 ? m : 0, m2 = a2 ? m : 0;
    double sum = 0.0;
    for (int q1 = 0; q1 < q1n; ++q1)
      for (int q2 = 0; q2 < q2n; ++q2) {
        const double h1 = a1 ? (-1.0 + (q1 + 0.5) * dh) * std::pow(2.0, -j1) : 0.0;
        const double h2 = a2 ? (-1.0 + (q2 + 0.5) * dh) * std::pow(2.0, -j2) : 0.0;
        double diff = 0.0;
        for (int i1 = 0; i1 <= m1; ++i1)
          for (int i2 = 0; i2 <= m2; ++i2) {
            const double c = ((m1 - i1) % 2 ? -1.0 : 1.0) * binom(m1, i1) *
                             ((m2 - i2) % 2 ? -1.0 : 1.0) * binom(m2, i2);
            diff += c * f(x1 + i1 * h1, x2 + i2 * h2);
          }
        sum += std::abs(diff);
      }
    const double measure = (a1 ? dh : 2.0) * (d == 1 ? 1.0 : (a2 ? dh : 2.0));
    return sum * measure;
  };

  if (scale == Scale::besov) {
    double outer = 0.0;
    for (int j1 = 0; j1 <= J; ++j1)
      for (int j2 = 0; j2 <= J2; ++j2) {
        double acc = 0.0;
        for (int g1 = 0; g1 < G; ++g1)
          for (int g2 = 0; g2 < G2; ++g2) {
            const double x1 = lo[0] + (g1 + 0.5) * w[0];
            const double x2 = d == 1 ? 0.0 : lo[1] + (g2 + 0.5) * w[1];
            acc += std::pow(rect(j1, j2, x1, x2), p);
          }
        const double norm = std::pow(acc * cell, 1.0 / p);
        outer += std::pow(std::pow(2.0, sp.s * (j1 + j2)) * norm, theta);
      }
    return std::pow(outer, 1.0 / theta);
  }
  double acc = 0.0;
  for (int g1 = 0; g1 < G; ++g1)
    for (int g2 = 0; g2 < G2; ++g2) {
      const double x1 = lo[0] + (g1 + 0.5) * w[0];
      const double x2 = d == 1 ? 0.0 : lo[1] + (g2 + 0.5) * w[1];
      double inner = 0.0;
      for (int j1 = 0; j1 <= J; ++j1)
        for (int j2 = 0; j2 <= J2; ++j2)
          inner += std::pow(std::pow(2.0, sp.s * (j1 + j2)) * rect(j1, j2, x1, x2), theta);
      acc += std::pow(std::pow(inner, 1.0 / theta), p);
    }
  return std::pow(acc * cell, 1.0 / p);
}

}  // namespace

TEST(Differences, UnivariateExamples) {
  auto sq = [](double t) { return t * t; };
  auto cube = [](double t) { return t * t * t; };
  EXPECT_DOUBLE_EQ(frolov::univariate_difference(sq, 2, 1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(frolov::univariate_difference(cube, 3, 0.5, 0.0), 0.75);
  EXPECT_DOUBLE_EQ(frolov::univariate_difference(sq, 0, 0.3, 1.5), 2.25);
  EXPECT_EQ(frolov::univariate_difference([](double t) { return 3.0 * t - 1.0; }, 2, 0.37, 0.9),
            0.0);
  EXPECT_THROW(frolov::univariate_difference(sq, -1, 0.1, 0.0), frolov::InvalidArgument);
}

TEST(Differences, MixedExamples) {
  auto xy = [](std::span<const double> x) { return x[0] * x[1]; };
  const std::vector<int> both{0, 1}, none{}, first{0};
  const std::vector<double> h{1.0, 1.0}, x{0.3, -0.7};
  EXPECT_DOUBLE_EQ(frolov::mixed_difference(xy, 1, std::span<const int>(both),
                                            std::span<const double>(h), std::span<const double>(x)),
                   1.0);
  EXPECT_DOUBLE_EQ(frolov::mixed_difference(xy, 2, std::span<const int>(none),
                                            std::span<const double>(h), std::span<const double>(x)),
                   xy(std::span<const double>(x)));
  // Linear along axis 0: the second difference on that axis vanishes.
  EXPECT_NEAR(frolov::mixed_difference(xy, 2, std::span<const int>(first),
                                       std::span<const double>(h), std::span<const double>(x)),
              0.0, 1e-15);
  const std::vector<int> repeated{1, 1};
  EXPECT_THROW(frolov::mixed_difference(xy, 1, std::span<const int>(repeated),
                                        std::span<const double>(h), std::span<const double>(x)),
               frolov::InvalidArgument);
}

TEST(Differences, AnnihilatesLowDegreePolynomials) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<int> axes{0, 1};
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 3;
    // Degree below m in x1 (any degree in x2) dies under Delta^m along axis 0.
    std::vector<double> c(m * 3);
    for (double& v : c) v = u(rng);
    auto f = [&](std::span<const double> x) {
      double s = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < 3; ++b) s += c[a * 3 + b] * std::pow(x[0], a) * std::pow(x[1], b);
      return s;
    };
    const std::vector<double> h{u(rng), u(rng)}, x{u(rng), u(rng)};
    double scale = 0.0;
    for (double v : c) scale += std::abs(v);
    EXPECT_NEAR(frolov::mixed_difference(f, m, std::span<const int>(axes),
                                         std::span<const double>(h), std::span<const double>(x)),
                0.0, 1e-12 * scale * std::pow(2.0, 2 * m));
  }
}

TEST(RectangularMean, ConstantsAndLinearFunctions) {
  auto c = [](std::span<const double>) { return -1.5; };
  const std::vector<int> none{}, one{0}, both{0, 1};
  const std::vector<double> t{0.5, 0.25}, x{0.1, 0.2};
  EXPECT_DOUBLE_EQ(frolov::rectangular_mean(c, 2, std::span<const int>(none),
                                            std::span<const double>(t), std::span<const double>(x),
                                            8),
                   4.0 * 1.5);
  EXPECT_EQ(frolov::rectangular_mean(c, 1, std::span<const int>(both), std::span<const double>(t),
                                     std::span<const double>(x), 8),
            0.0);
  // int_{-1}^{1} |h| dh = 1 for Delta^1 of the identity with t = 1, times 2 for the idle axis.
  auto lin = [](std::span<const double> y) { return y[0]; };
  const std::vector<double> unit{1.0, 1.0};
  EXPECT_NEAR(frolov::rectangular_mean(lin, 1, std::span<const int>(one),
                                       std::span<const double>(unit), std::span<const double>(x),
                                       64),
              2.0, 1e-12);
  EXPECT_THROW(frolov::rectangular_mean(lin, 1, std::span<const int>(one),
                                        std::span<const double>(unit), std::span<const double>(x),
                                        3),
               frolov::InvalidArgument);
}

TEST(Seminorm, ZeroFunction) {
  SupportedFunction zero{2, [](std::span<const double>) { return 0.0; }, Box::unit(2), false};
  const SmoothnessParams sp{1.5, 2.0, 2.0, 2};
  for (Scale sc : {Scale::besov, Scale::triebel_lizorkin}) {
    EXPECT_EQ(frolov::seminorm(zero, sp, {2, 16, 4}, sc).value, 0.0);
  }
}

TEST(Seminorm, MatchesDirectSummationInOneDimension) {
  const SeminormGrid g{5, 128, 8};
  for (const SmoothnessParams& sp :
       {SmoothnessParams{0.5, 2.0, 2.0, 1}, SmoothnessParams{1.2, 1.0, 1.0, 2},
        SmoothnessParams{1.5, 3.0, 1.5, 2}}) {
    for (Scale sc : {Scale::besov, Scale::triebel_lizorkin}) {
      const double engine = frolov::seminorm(tent_1d(), sp, g, sc).value;
      const double direct =
          brute_seminorm([](double a, double) { return tent(a); }, 1, Box{{-1.0}, {1.0}}, sp, g, sc);
      EXPECT_NEAR(engine, direct, 1e-8 * direct) << to_string(sc) << " s=" << sp.s;
    }
  }
}

TEST(Seminorm, MatchesDirectSummationInTwoDimensions) {
  const SeminormGrid g{3, 24, 6};
  const TensorFunction f = bump_2d();
  for (const SmoothnessParams& sp :
       {SmoothnessParams{1.5, 2.0, 2.0, 2}, SmoothnessParams{1.0, 1.5, 3.0, 3}}) {
    for (Scale sc : {Scale::besov, Scale::triebel_lizorkin}) {
      const double engine = frolov::seminorm(f.as_function(), sp, g, sc).value;
      const double direct = brute_seminorm(
          [&f](double a, double b) { return f.factors[0](a) * f.factors[1](b); }, 2, f.support, sp,
          g, sc);
      EXPECT_NEAR(engine, direct, 1e-8 * direct) << to_string(sc) << " s=" << sp.s;
    }
  }
}

TEST(Seminorm, TensorRouteAgreesWithGeneralEngine) {
  const TensorFunction f = bump_2d();
  const SeminormGrid g{3, 32, 6};
  for (double p : {1.0, 2.0, 4.0}) {
    const SmoothnessParams sp{1.5, p, p, 2};
    for (Scale sc : {Scale::besov, Scale::triebel_lizorkin}) {
      const auto general = frolov::seminorm(f.as_function(), sp, g, sc);
      const auto tensor = frolov::seminorm(f, sp, g, sc);
      EXPECT_NEAR(tensor.value, general.value, 1e-11 * general.value);
      EXPECT_NEAR(tensor.last_level_increment, general.last_level_increment,
                  1e-9 * general.value);
    }
  }
  // For mismatched p and theta only the B-scale still factors.
  const SmoothnessParams sp{1.5, 2.0, 1.0, 2};
  EXPECT_NEAR(frolov::seminorm(f, sp, g, Scale::besov).value,
              frolov::seminorm(f.as_function(), sp, g, Scale::besov).value,
              1e-11 * frolov::seminorm(f, sp, g, Scale::besov).value);
}

TEST(Seminorm, BesovAndTriebelLizorkinCoincideWhenPEqualsTheta) {
  for (double p : {1.0, 2.0, 3.0}) {
    const SmoothnessParams sp{1.5, p, p, 2};
    const auto b = frolov::seminorm(tent_1d(), sp, {6, 256, 8}, Scale::besov).value;
    const auto f = frolov::seminorm(tent_1d(), sp, {6, 256, 8}, Scale::triebel_lizorkin).value;
    EXPECT_NEAR(b, f, 1e-12 * b);
  }
}

TEST(Seminorm, AbsoluteHomogeneity) {
  const SmoothnessParams sp{1.5, 2.0, 1.0, 2};
  const SeminormGrid g{5, 128, 8};
  for (double c : {-2.5, 0.25, 7.0}) {
    SupportedFunction scaled = tent_1d();
    scaled.eval = [c](std::span<const double> x) { return c * tent(x[0]); };
    for (Scale sc : {Scale::besov, Scale::triebel_lizorkin}) {
      const double base = frolov::seminorm(tent_1d(), sp, g, sc).value;
      EXPECT_NEAR(frolov::seminorm(scaled, sp, g, sc).value, std::abs(c) * base, 1e-12 * base);
    }
  }
}

TEST(Seminorm, NondecreasingInTruncationLevel) {
  const SmoothnessParams sp{1.2, 2.0, 2.0, 2};
  for (Scale sc : {Scale::besov, Scale::triebel_lizorkin}) {
    double prev = 0.0;
    for (int j = 0; j <= 7; ++j) {
      const auto r = frolov::seminorm(tent_1d(), sp, {j, 256, 8}, sc);
      EXPECT_GE(r.value, prev);
      EXPECT_GE(r.last_level_increment, 0.0);
      if (j > 0) EXPECT_NEAR(r.value - prev, r.last_level_increment, 1e-10 * r.value);
      prev = r.value;
    }
  }
}

TEST(Seminorm, LevelNormsLayout) {
  const auto r = frolov::seminorm(bump_2d().as_function(), {1.5, 2.0, 2.0, 2}, {2, 16, 4},
                                  Scale::besov);
  EXPECT_EQ(r.level_norms.size(), 9u);
  EXPECT_TRUE(frolov::seminorm(bump_2d(), {1.5, 2.0, 2.0, 2}, {2, 16, 4}, Scale::besov)
                  .level_norms.empty());
}

TEST(Seminorm, ParameterValidation) {
  const SeminormGrid g{2, 16, 4};
  auto run = [&](SmoothnessParams sp, Scale sc) { return frolov::seminorm(tent_1d(), sp, g, sc); };
  EXPECT_THROW(run({1.5, 2.0, 2.0, 1}, Scale::besov), frolov::InvalidArgument);  // m <= s
  EXPECT_THROW(run({0.5, 0.5, 2.0, 1}, Scale::besov), frolov::InvalidArgument);  // s <= sigma_p
  EXPECT_THROW(run({1.0, frolov::kInf, 2.0, 2}, Scale::triebel_lizorkin), frolov::InvalidArgument);
  EXPECT_THROW(run({0.9, 2.0, 0.5, 1}, Scale::triebel_lizorkin), frolov::InvalidArgument);
  EXPECT_THROW(run({-1.0, 2.0, 2.0, 1}, Scale::besov), frolov::InvalidArgument);
  EXPECT_NO_THROW(run({1.0, frolov::kInf, 2.0, 2}, Scale::besov));
  EXPECT_NO_THROW(run({0.9, 2.0, 0.5, 1}, Scale::besov));
  EXPECT_EQ(SmoothnessParams({2.5, 2.0, 2.0, 0}).order(), 3);
}

TEST(Seminorm, JsonRecord) {
  const auto r = frolov::seminorm(tent_1d(), {1.0, frolov::kInf, 2.0, 2}, {3, 32, 4}, Scale::besov);
  const auto j = frolov::to_json(r);
  EXPECT_EQ(j.at("scale"), "B");
  EXPECT_EQ(j.at("p"), "inf");
  EXPECT_EQ(j.at("m"), 2);
  EXPECT_EQ(j.at("j_max"), 3);
  EXPECT_DOUBLE_EQ(j.at("value").get<double>(), r.value);
  EXPECT_TRUE(j.contains("last_level_increment"));
}

TEST(BSpline, PartitionOfUnityAndSupport) {
  for (int deg = 0; deg <= 4; ++deg) {
    for (double x : {0.0, 0.3, 0.77}) {
      double s = 0.0;
      for (int shift = -6; shift <= 6; ++shift) s += frolov::cardinal_bspline(deg, x - shift);
      EXPECT_NEAR(s, 1.0, 1e-14) << "degree " << deg;
    }
    EXPECT_EQ(frolov::cardinal_bspline(deg, -0.01), 0.0);
    EXPECT_EQ(frolov::cardinal_bspline(deg, deg + 1.01), 0.0);
  }
}

TEST(Operators, MultiplierOfConstantIsThePeriodizer) {
  TensorFunction one;
  one.factors = {[](double) { return 1.0; }, [](double) { return 1.0; }};
  one.support = Box::unit(2);
  one.periodic = true;
  const frolov::OperatorSpec op{frolov::BoundedOperator::multiplier, 3, 0.25};
  const auto image = frolov::apply_operator(op, one);
  const frolov::PeriodizerKernel<double> psi(3, 0.25, 2);
  for (double a : {-0.3, -0.1, 0.2, 0.9, 1.1, 1.4})
    for (double b : {-0.2, 0.5, 1.2}) {
      const std::vector<double> x{a, b};
      EXPECT_DOUBLE_EQ(image(std::span<const double>(x)), psi.eval(std::span<const double>(x)));
      EXPECT_DOUBLE_EQ(frolov::apply_operator(op, one.as_function()).eval(std::span<const double>(x)),
                       psi.eval(std::span<const double>(x)));
    }
}

TEST(Operators, ChangeOfVariableImage) {
  TensorFunction g;
  g.factors = {[](double t) { return 1.0 + t; }};
  g.support = Box::unit(1);
  const frolov::OperatorSpec op{frolov::BoundedOperator::change_of_variable, 2, 0.25};
  const auto image = frolov::apply_operator(op, g);
  const frolov::KernelPsiK<double> psi(2);
  for (double t : {0.1, 0.5, 0.8}) {
    EXPECT_DOUBLE_EQ(image.factors[0](t), psi.eval(t, 1) * (1.0 + psi.eval(t, 0)));
  }
  EXPECT_EQ(image.factors[0](0.0), 0.0);
  EXPECT_EQ(image.factors[0](1.2), 0.0);
}

TEST(Operators, BoundednessRatioErrors) {
  TensorFunction zero;
  zero.factors = {[](double) { return 0.0; }};
  zero.support = Box::unit(1);
  zero.periodic = true;
  const SmoothnessParams sp{1.5, 2.0, 2.0, 2};
  const frolov::OperatorSpec mult{frolov::BoundedOperator::multiplier, 3, 0.25};
  EXPECT_THROW(frolov::boundedness_ratio(mult, zero, sp, Scale::besov, {3, 32, 4}),
               frolov::DegenerateDenominator);
  TensorFunction bump;
  bump.factors = {frolov::bspline_bump(3, 0.0, 1.0)};
  bump.support = Box::unit(1);
  EXPECT_THROW(frolov::boundedness_ratio(mult, bump, sp, Scale::besov, {3, 32, 4}),
               frolov::InvalidArgument);
  const frolov::OperatorSpec cov{frolov::BoundedOperator::change_of_variable, 4, 0.25};
  const double ratio = frolov::boundedness_ratio(cov, bump, sp, Scale::besov, {5, 128, 8});
  EXPECT_TRUE(std::isfinite(ratio));
  EXPECT_GT(ratio, 0.0);
}
