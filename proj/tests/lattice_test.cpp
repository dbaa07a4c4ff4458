#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <sstream>

#include "frolov/lattice.hpp"
#include "frolov/verify.hpp"

using frolov::Box;
using frolov::CubatureRule;

namespace {

// Brute-force Frolov nodes: every m with |m|_inf <= bound whose image lies in box.
std::set<std::vector<double>> brute_force_nodes(const frolov::LatticeGenerator<double>& gen,
                                                double a, const Box& box, long long bound) {
  const int d = gen.dim;
  std::set<std::vector<double>> out;
  std::vector<long long> lo(d, -bound), hi(d, bound), m(lo);
  do {
    std::vector<double> x(d, 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) x[i] += gen.at(i, j) * static_cast<double>(m[j]);
      x[i] /= a;
    }
    if (box.contains(std::span<const double>(x))) out.insert(x);
  } while (frolov::detail::next_index(m, lo, hi));
  return out;
}

std::set<std::vector<double>> node_set(const CubatureRule<double>& rule) {
  std::set<std::vector<double>> out;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto x = rule.node(i);
    out.insert(std::vector<double>(x.begin(), x.end()));
  }
  return out;
}

}  // namespace

TEST(FrolovGenerator, OneDimensionalLatticeIsIntegers) {
  const auto gen = frolov::build_frolov_generator<double>(1);
  EXPECT_EQ(gen.poly_coeffs, (std::vector<long long>{-2, 1}));
  ASSERT_EQ(gen.basis.size(), 1u);
  EXPECT_EQ(gen.basis[0], 1.0);
  EXPECT_EQ(gen.det_abs, 1.0);
  EXPECT_EQ(frolov::admissibility_check(gen, 7), 1.0);
}

TEST(FrolovGenerator, TwoDimensionalRootsAndDeterminant) {
  const auto gen = frolov::build_frolov_generator<double>(2);
  EXPECT_EQ(gen.poly_coeffs, (std::vector<long long>{2, -4, 1}));
  std::vector<double> roots = gen.roots;
  std::sort(roots.begin(), roots.end());
  EXPECT_NEAR(roots[0], 2.0 - std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(roots[1], 2.0 + std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(gen.det_abs, 2.0 * std::sqrt(2.0), 1e-13);
}

TEST(FrolovGenerator, RootsHaveSmallResidualsForAllDimensions) {
  for (int d = 1; d <= frolov::kMaxLatticeDim; ++d) {
    const auto gen = frolov::build_frolov_generator<double>(d);
    const auto precise = frolov::build_frolov_generator<frolov::quad>(d);
    ASSERT_EQ(static_cast<int>(gen.roots.size()), d);
    ASSERT_EQ(static_cast<int>(precise.roots.size()), d);
    for (int i = 0; i < d; ++i) {
      const frolov::quad r = precise.roots[i];
      EXPECT_LE(frolov::to_double(abs(frolov::detail::frolov_poly(d, r))), 1e-12);
      // The double root is the rounded refined root, so its own residual is
      // bounded by |P'| times one ulp.
      EXPECT_EQ(gen.roots[i], static_cast<double>(r));
      const double x = gen.roots[i];
      const double ulp = std::nextafter(std::abs(x), INFINITY) - std::abs(x);
      const double bound = std::abs(frolov::detail::frolov_poly_derivative(d, x)) * ulp;
      EXPECT_LE(std::abs(frolov::to_double(frolov::detail::frolov_poly(d, frolov::quad(x)))),
                1e-12 + bound);
    }
    for (int i = 0; i + 1 < d; ++i) {
      for (int j = i + 1; j < d; ++j) EXPECT_GT(std::abs(gen.roots[i] - gen.roots[j]), 1e-9);
    }
  }
}

TEST(FrolovGenerator, DeterminantMatchesVandermondeProduct) {
  for (int d = 1; d <= frolov::kMaxLatticeDim; ++d) {
    const auto gen = frolov::build_frolov_generator<double>(d);
    double vdm = 1.0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) vdm *= gen.roots[j] - gen.roots[i];
    EXPECT_NEAR(gen.det_abs / std::abs(vdm), 1.0, 1e-9) << "d=" << d;
  }
}

TEST(FrolovGenerator, CoefficientsExpandTheProductForm) {
  for (int d = 1; d <= frolov::kMaxLatticeDim; ++d) {
    const auto coeffs = frolov::detail::frolov_poly_coeffs(d);
    for (double x : {-0.5, 0.25, 1.5, 4.0, 7.25}) {
      double horner = 0.0;
      for (int i = d; i >= 0; --i) horner = horner * x + static_cast<double>(coeffs[i]);
      const double product = frolov::detail::frolov_poly(d, x);
      EXPECT_NEAR(horner, product, 1e-9 * std::max(1.0, std::abs(product)));
    }
  }
}

TEST(FrolovGenerator, RejectsDimensionOutOfRange) {
  EXPECT_THROW(frolov::build_frolov_generator<double>(0), frolov::InvalidArgument);
  EXPECT_THROW(frolov::build_frolov_generator<double>(9), frolov::InvalidArgument);
}

TEST(Admissibility, AgreesWithExactIntegerNorms) {
  for (int d : {2, 3}) {
    const auto gen = frolov::build_frolov_generator<double>(d);
    const int radius = d == 2 ? 50 : 20;
    const double value = frolov::admissibility_check(gen, radius);
    const double oracle = frolov::verify::detail::min_integer_norm(gen.poly_coeffs, radius);
    EXPECT_GE(value, 1.0 - 1e-9);
    EXPECT_NEAR(value, oracle, 1e-9 * oracle);
  }
}

TEST(Admissibility, HigherDimensionsSmallRadius) {
  for (int d = 4; d <= 5; ++d) {
    const auto gen = frolov::build_frolov_generator<double>(d);
    EXPECT_GE(frolov::admissibility_check(gen, 3), 1.0 - 1e-9) << "d=" << d;
  }
}

TEST(Admissibility, IdentityBasisIsNotAdmissible) {
  const auto gen = frolov::generator_from_basis<double>(2, {1.0, 0.0, 0.0, 1.0});
  EXPECT_EQ(frolov::admissibility_check(gen, 1), 0.0);
}

TEST(FrolovRule, OneDimensionalScaledIntegers) {
  const auto gen = frolov::build_frolov_generator<double>(1);
  const auto rule = frolov::frolov_rule(gen, 4.0, Box::unit(1));
  ASSERT_EQ(rule.size(), 5u);
  std::vector<double> xs;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    xs.push_back(rule.node(i)[0]);
    EXPECT_DOUBLE_EQ(rule.weight(i), 0.25);
  }
  std::sort(xs.begin(), xs.end());
  EXPECT_EQ(xs, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
}

TEST(FrolovRule, EnumerationMatchesBruteForce) {
  for (int d = 1; d <= 3; ++d) {
    const auto gen = frolov::build_frolov_generator<double>(d);
    for (double a : {2.5, 7.0, 13.3, 20.0}) {
      for (const Box& box : {Box::unit(d), Box::cube(d, -0.25, 1.25)}) {
        const auto rule = frolov::frolov_rule(gen, a, box);
        // m = a V^{-1} x, so |m|_inf <= a |V^{-1}|_inf |box|_inf.
        const auto inv = frolov::detail::inverse(gen.basis, d);
        double row_max = 0.0;
        for (int i = 0; i < d; ++i) {
          double row = 0.0;
          for (int j = 0; j < d; ++j) row += std::abs(inv[i * d + j]);
          row_max = std::max(row_max, row);
        }
        const auto bound = static_cast<long long>(std::ceil(a * row_max * 1.25)) + 1;
        const auto expected = brute_force_nodes(gen, a, box, bound);
        EXPECT_EQ(node_set(rule), expected) << "d=" << d << " a=" << a;
      }
    }
  }
}

TEST(FrolovRule, CountFollowsVolumeOverDeterminant) {
  const auto gen = frolov::build_frolov_generator<double>(2);
  for (double a : {9.0, 10.0, 11.0, 12.0, 13.0}) {
    const auto rule = frolov::frolov_rule(gen, a, Box::unit(2));
    const double expected = a * a / gen.det_abs;
    EXPECT_LE(std::abs(static_cast<double>(rule.size()) - expected), 4.0 * a) << "a=" << a;
  }
}

TEST(FrolovRule, CountScalesLikeADoubling) {
  for (int d = 1; d <= 3; ++d) {
    const auto gen = frolov::build_frolov_generator<double>(d);
    double a = 2.0;
    while (frolov::frolov_rule(gen, a, Box::unit(d)).size() < 1000) a *= 1.5;
    std::size_t prev = 0;
    for (double s = a; s <= 2.0 * a; s *= 1.1) {
      const std::size_t n = frolov::frolov_rule(gen, s, Box::unit(d)).size();
      EXPECT_GE(n, prev);
      prev = n;
    }
    const double ratio = static_cast<double>(frolov::frolov_rule(gen, 2 * a, Box::unit(d)).size()) /
                         static_cast<double>(frolov::frolov_rule(gen, a, Box::unit(d)).size());
    EXPECT_GE(ratio, 0.8 * std::pow(2.0, d));
    EXPECT_LE(ratio, 1.2 * std::pow(2.0, d));
  }
}

TEST(FrolovRule, EqualWeightsSumToCountTimesWeight) {
  const auto gen = frolov::build_frolov_generator<double>(3);
  const auto rule = frolov::frolov_rule(gen, 12.0, Box::unit(3));
  EXPECT_TRUE(rule.equal_weights());
  const double w = rule.weight(0);
  EXPECT_DOUBLE_EQ(w, gen.det_abs / std::pow(12.0, 3));
  EXPECT_NEAR(rule.abs_weight_sum(), static_cast<double>(rule.size()) * w, 1e-12);
}

TEST(FrolovRule, IntegratesSmoothBumpAccurately) {
  // A function vanishing to high order on the boundary is where Frolov rules shine.
  const auto gen = frolov::build_frolov_generator<double>(2);
  const auto rule = frolov::frolov_rule(gen, 40.0, Box::unit(2));
  auto f = [](std::span<const double> x) {
    double v = 1.0;
    for (double t : x) v *= 140.0 * std::pow(t * (1.0 - t), 3);
    return v;
  };
  EXPECT_NEAR(rule.apply(f), 1.0, 1e-4);
}

TEST(FrolovRule, ErrorsOnBadScaleAndEmptyBox) {
  const auto gen = frolov::build_frolov_generator<double>(2);
  EXPECT_THROW(frolov::frolov_rule(gen, 1.0, Box::unit(2)), frolov::InvalidArgument);
  EXPECT_THROW(frolov::frolov_rule(gen, 1.5, Box::cube(2, 0.01, 0.02)), frolov::EmptyRule);
  EXPECT_THROW(frolov::frolov_rule(gen, 5.0, Box::unit(3)), frolov::DimensionMismatch);
}

TEST(FibonacciRule, FiveNodeExample) {
  const auto rule = frolov::fibonacci_rule<double>(5);
  ASSERT_EQ(rule.size(), 5u);
  const double expected[5][2] = {{0, 0}, {0.2, 0.6}, {0.4, 0.2}, {0.6, 0.8}, {0.8, 0.4}};
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(rule.node(i)[0], expected[i][0]);
    EXPECT_DOUBLE_EQ(rule.node(i)[1], expected[i][1]);
    EXPECT_DOUBLE_EQ(rule.weight(i), 0.2);
  }
}

TEST(FibonacciRule, IntegratesConstantsAndLowFrequencies) {
  for (int idx : {3, 8, 15, 22}) {
    const auto rule = frolov::fibonacci_rule<double>(idx);
    EXPECT_EQ(rule.size(), frolov::fibonacci_number(idx));
    EXPECT_NEAR(rule.apply([](std::span<const double>) { return 1.0; }), 1.0, 1e-14);
  }
  const auto rule = frolov::fibonacci_rule<double>(20);
  // Geometric sum over the i/F column vanishes.
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weight(i) * std::polar(1.0, 2.0 * std::numbers::pi * rule.node(i)[0]);
  }
  EXPECT_LE(std::abs(sum), 1e-12);
}

TEST(FibonacciRule, RejectsTooManyNodes) {
  EXPECT_THROW(frolov::fibonacci_rule<double>(2), frolov::InvalidArgument);
  EXPECT_THROW(frolov::fibonacci_rule<double>(40), frolov::InvalidArgument);
}

TEST(GaussRule, Examples) {
  const auto one = frolov::tensor_gauss_rule<double>(1, 1);
  EXPECT_DOUBLE_EQ(one.node(0)[0], 0.5);
  EXPECT_DOUBLE_EQ(one.weight(0), 1.0);
  const auto two = frolov::tensor_gauss_rule<double>(1, 2);
  EXPECT_NEAR(two.apply([](std::span<const double> x) { return x[0] * x[0] * x[0]; }), 0.25,
              1e-16);
  const auto sq = frolov::tensor_gauss_rule<double>(2, 3);
  EXPECT_NEAR(sq.apply([](std::span<const double>) { return 1.0; }), 1.0, 1e-14);
}

TEST(GaussRule, ExactForMaximalDegree) {
  for (int n : {1, 2, 5, 17, 40, 64}) {
    const auto rule = frolov::tensor_gauss_rule<double>(1, n);
    const int deg = 2 * n - 1;
    const double q = rule.apply([deg](std::span<const double> x) { return std::pow(x[0], deg); });
    EXPECT_NEAR(q, 1.0 / (deg + 1), 1e-14) << "n=" << n;
  }
  EXPECT_THROW(frolov::tensor_gauss_rule<double>(1, 65), frolov::InvalidArgument);
}

TEST(GaussRule, QuadPrecision) {
  const auto rule = frolov::tensor_gauss_rule<frolov::quad>(1, 20);
  const frolov::quad q = rule.apply([](std::span<const frolov::quad> x) { return exp(x[0]); });
  EXPECT_LT(frolov::to_double(abs(q - (exp(frolov::quad(1)) - 1))), 1e-30);
}

TEST(Export, GeneratorJsonAndRuleCsv) {
  const auto gen = frolov::build_frolov_generator<double>(2);
  const auto j = frolov::to_json(gen);
  EXPECT_EQ(j.at("dim"), 2);
  EXPECT_EQ(j.at("poly_coeffs"), nlohmann::json({2, -4, 1}));
  EXPECT_EQ(j.at("basis").size(), 4u);
  EXPECT_NEAR(j.at("det_abs").get<double>(), 2.0 * std::sqrt(2.0), 1e-13);

  const auto rule = frolov::frolov_rule(frolov::build_frolov_generator<double>(1), 4.0, Box::unit(1));
  std::istringstream csv(frolov::to_csv(rule));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x1,weight");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Rule, ValidatesConstruction) {
  EXPECT_THROW(CubatureRule<double>(2, {0.0, 0.0, 1.0}, {1.0}, "bad"), frolov::InvalidArgument);
  EXPECT_THROW(CubatureRule<double>(1, {0.0}, {std::nan("")}, "bad"), frolov::InvalidArgument);
  const CubatureRule<double> ok(1, {0.5}, {2.0}, "ok");
  const auto mapped = frolov::map_to_box(ok, Box{{-1.0}, {3.0}});
  EXPECT_DOUBLE_EQ(mapped.node(0)[0], 1.0);
  EXPECT_DOUBLE_EQ(mapped.weight(0), 8.0);
}
