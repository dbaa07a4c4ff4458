#pragma once

// Iterated differences, rectangular means and discretized Besov /
// Triebel-Lizorkin seminorms on dyadic levels j in {0..j_max}^d.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "frolov/errors.hpp"
#include "frolov/kernels.hpp"
#include "frolov/lattice.hpp"
#include "frolov/rule.hpp"
#include "frolov/transforms.hpp"

namespace frolov {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SmoothnessParams {
  double s = 1.0;
  double p = 2.0;
  double theta = 2.0;
  int m = 0;  // 0 selects floor(s) + 1

  int order() const { return m > 0 ? m : static_cast<int>(std::floor(s)) + 1; }

  static double sigma(double q) { return std::max(1.0 / q - 1.0, 0.0); }
  double sigma_p() const { return sigma(p); }
  double sigma_p_theta() const { return std::max(sigma(p), sigma(theta)); }
};

enum class Scale { besov, triebel_lizorkin };

inline std::string to_string(Scale scale) {
  return scale == Scale::besov ? "B" : "F";
}

/// Truncation and quadrature resolution of a seminorm evaluation.
struct SeminormGrid {
  int j_max = 6;
  int lp_grid = 256;     // midpoints per axis of the L_p grid
  int quad_points = 16;  // midpoints per active axis for the h-integral

  static SeminormGrid defaults(int d) {
    SeminormGrid g;
    g.j_max = d == 1 ? 8 : (d == 2 ? 6 : 4);
    g.lp_grid = 1 << (g.j_max + 2);
    return g;
  }
};

/// A function on R^d together with the box outside which it vanishes, or, when
/// `periodic`, the unit cell of its period lattice Z^d.
struct SupportedFunction {
  int dim = 1;
  std::function<double(std::span<const double>)> eval;
  Box support;
  bool periodic = false;
};

/// f(x) = prod_i factor_i(x_i). Seminorms of such functions factor over axes.
struct TensorFunction {
  std::vector<std::function<double(double)>> factors;
  Box support;
  bool periodic = false;

  int dim() const { return static_cast<int>(factors.size()); }

  double operator()(std::span<const double> x) const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= factors[i](x[i]);
    return v;
  }

  SupportedFunction factor(int i) const {
    const auto& g = factors[i];
    return {1, [g](std::span<const double> t) { return g(t[0]); },
            Box{{support.lo[i]}, {support.hi[i]}}, periodic};
  }

  SupportedFunction as_function() const {
    return {dim(), [self = *this](std::span<const double> x) { return self(x); }, support,
            periodic};
  }
};

struct SeminormResult {
  Scale scale = Scale::besov;
  SmoothnessParams params;
  SeminormGrid grid;
  double value = 0.0;
  double last_level_increment = 0.0;  // value(j_max) - value(j_max - 1)
  // ||R^{e(j)}_m(f, 2^-j, .)||_p for every level j, flattened row-major with
  // base j_max + 1 (axis 0 slowest). Empty for the separable route with d > 1.
  std::vector<double> level_norms;
};

namespace detail {

inline nlohmann::json json_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double binomial_double(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// Stencil coefficients (-1)^(m-j) C(m, j), j = 0..m.
inline std::vector<double> difference_stencil(int m) {
  std::vector<double> c(m + 1);
  for (int j = 0; j <= m; ++j) c[j] = ((m - j) % 2 ? -1.0 : 1.0) * binomial_double(m, j);
  return c;
}

inline double lp_accumulate(double acc, double v, double p) {
  if (std::isinf(p)) return std::max(acc, v);
  return acc + std::pow(v, p);
}

inline double lp_finish(double acc, double cell, double p) {
  if (std::isinf(p)) return acc;
  return std::pow(acc * cell, 1.0 / p);
}

inline void validate(const SmoothnessParams& sp, Scale scale) {
  require(sp.p > 0.0 && sp.theta > 0.0, "seminorm: p and theta must be positive");
  require(std::isfinite(sp.s) && sp.s > 0.0, "seminorm: s must be positive and finite");
  require(sp.m >= 0, "seminorm: m must be nonnegative (0 selects floor(s) + 1)");
  require(sp.order() > sp.s, "seminorm: difference order m must exceed s");
  if (scale == Scale::besov) {
    require(sp.s > sp.sigma_p(), "seminorm: B-scale requires s > sigma_p");
  } else {
    require(std::isfinite(sp.p), "seminorm: F-scale requires p < inf");
    require(sp.s > sp.sigma_p_theta(), "seminorm: F-scale requires s > sigma_{p,theta}");
  }
}

}  // namespace detail

/// sum_{j=0}^m (-1)^(m-j) C(m,j) f(t + j h).
template <class F>
double univariate_difference(F&& f, int m, double h, double t) {
  detail::require(m >= 0, "univariate_difference: m must be nonnegative");
  const std::vector<double> c = detail::difference_stencil(m);
  double sum = 0.0;
  for (int j = 0; j <= m; ++j) sum += c[j] * f(t + j * h);
  return sum;
}

/// prod_{i in e} Delta^m_{h_i, i} applied to f at x; `axes` are 0-based.
template <class F>
double mixed_difference(F&& f, int m, std::span<const int> axes, std::span<const double> h,
                        std::span<const double> x) {
  detail::require(m >= 0, "mixed_difference: m must be nonnegative");
  detail::require(axes.size() <= x.size() && h.size() == x.size(),
                  "mixed_difference: axes, step and point sizes disagree");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    detail::require(axes[a] >= 0 && axes[a] < static_cast<int>(x.size()),
                    "mixed_difference: axis out of range");
    for (std::size_t b = 0; b < a; ++b) {
      detail::require(axes[a] != axes[b], "mixed_difference: repeated axis");
    }
  }
  const std::vector<double> c = detail::difference_stencil(m);
  const int na = static_cast<int>(axes.size());
  std::vector<double> y(x.begin(), x.end());
  if (na == 0) return f(std::span<const double>(y));

  std::vector<long long> idx(na, 0), lo(na, 0), hi(na, m);
  double sum = 0.0;
  do {
    double coeff = 1.0;
    for (int a = 0; a < na; ++a) {
      y[axes[a]] = x[axes[a]] + static_cast<double>(idx[a]) * h[axes[a]];
      coeff *= c[idx[a]];
    }
    sum += coeff * f(std::span<const double>(y));
  } while (detail::next_index(idx, lo, hi));
  return sum;
}

/// int_{[-1,1]^d} |Delta^{m,e}_{(h_1 t_1, ..., h_d t_d)} f(x)| dh by a tensor
/// midpoint rule with `quad_points` nodes per active axis; every inactive axis
/// contributes a factor 2.
template <class F>
double rectangular_mean(F&& f, int m, std::span<const int> axes, std::span<const double> t,
                        std::span<const double> x, int quad_points) {
  detail::require(quad_points >= 4, "rectangular_mean: quad_points must be at least 4");
  detail::require(t.size() == x.size(), "rectangular_mean: scale and point sizes disagree");
  for (double ti : t) {
    detail::require(ti > 0.0 && ti <= 1.0, "rectangular_mean: step scales must lie in (0, 1]");
  }
  const int d = static_cast<int>(x.size());
  const int na = static_cast<int>(axes.size());
  const double inactive = std::ldexp(1.0, d - na);
  if (na == 0) return inactive * std::abs(f(x));

  const double dh = 2.0 / quad_points;
  std::vector<double> h(d, 0.0);
  std::vector<long long> idx(na, 0), lo(na, 0), hi(na, quad_points - 1);
  double sum = 0.0;
  do {
    for (int a = 0; a < na; ++a) {
      h[axes[a]] = (-1.0 + (static_cast<double>(idx[a]) + 0.5) * dh) * t[axes[a]];
    }
    sum += std::abs(mixed_difference(f, m, axes, std::span<const double>(h), x));
  } while (detail::next_index(idx, lo, hi));
  return inactive * sum * std::pow(dh, na);
}

namespace detail {

/// Box carrying the L_p integral: the support enlarged by m/2 per side
/// (steps h t_i with t_i <= 1/2 on active axes reach m/2 out), or the unit
/// cell for periodic functions.
inline Box lp_box(const SupportedFunction& f, int m) {
  if (f.periodic) return Box::unit(f.dim);
  Box b = f.support;
  for (int i = 0; i < f.dim; ++i) {
    b.lo[i] -= 0.5 * m;
    b.hi[i] += 0.5 * m;
  }
  return b;
}

/// Shared level loop. Both scales are accumulated in one pass; each scale is
/// also accumulated without the top shell |j|_inf = j_max so the last-level
/// increment is exact.
inline SeminormResult seminorm_engine(const SupportedFunction& f, const SmoothnessParams& sp,
                                      const SeminormGrid& grid, Scale scale) {
  validate(sp, scale);
  require(f.dim >= 1 && f.dim <= kMaxLatticeDim, "seminorm: unsupported dimension");
  require(static_cast<bool>(f.eval), "seminorm: function has no evaluator");
  require(grid.j_max >= 0, "seminorm: j_max must be nonnegative");
  require(grid.lp_grid >= 1, "seminorm: lp_grid must be positive");
  f.support.validate();
  require(f.support.dim() == f.dim, "seminorm: support dimension mismatch");

  const int d = f.dim;
  const int m = sp.order();
  const int J = grid.j_max;
  const int G = grid.lp_grid;
  const double p = sp.p;
  const double theta = sp.theta;
  const Box box = lp_box(f, m);

  std::vector<std::vector<double>> axis_points(d, std::vector<double>(G));
  double cell = 1.0;
  for (int i = 0; i < d; ++i) {
    const double w = (box.hi[i] - box.lo[i]) / G;
    cell *= w;
    for (int g = 0; g < G; ++g) axis_points[i][g] = box.lo[i] + (g + 0.5) * w;
  }
  std::size_t npoints = 1;
  for (int i = 0; i < d; ++i) npoints *= static_cast<std::size_t>(G);

  // F-scale pointwise inner sums (all levels / levels below the top shell).
  std::vector<double> inner_all(scale == Scale::triebel_lizorkin ? npoints : 0, 0.0);
  std::vector<double> inner_low(inner_all.size(), 0.0);
  double outer_all = 0.0, outer_low = 0.0;  // B-scale level sums

  SeminormResult res;
  res.scale = scale;
  res.params = sp;
  res.params.m = m;
  res.grid = grid;

  auto eval = [&f](std::span<const double> y) { return f.eval(y); };
  std::vector<long long> j(d, 0), jlo(d, 0), jhi(d, J);
  std::vector<double> x(d), t(d);
  std::vector<long long> gi(d, 0), glo(d, 0), ghi(d, G - 1);
  do {
    std::vector<int> axes;
    long long j1 = 0, jinf = 0;
    for (int i = 0; i < d; ++i) {
      if (j[i] != 0) axes.push_back(i);
      t[i] = std::ldexp(1.0, -static_cast<int>(j[i]));
      j1 += j[i];
      jinf = std::max(jinf, j[i]);
    }
    const bool top = jinf == J;
    const double weight = std::exp2(sp.s * static_cast<double>(j1));

    double lp_acc = 0.0;
    std::size_t flat = 0;
    std::fill(gi.begin(), gi.end(), 0);
    do {
      for (int i = 0; i < d; ++i) x[i] = axis_points[i][gi[i]];
      const double r = rectangular_mean(eval, m, std::span<const int>(axes),
                                        std::span<const double>(t), std::span<const double>(x),
                                        grid.quad_points);
      lp_acc = lp_accumulate(lp_acc, r, p);
      if (scale == Scale::triebel_lizorkin) {
        const double term = weight * r;
        inner_all[flat] = lp_accumulate(inner_all[flat], term, theta);
        if (!top) inner_low[flat] = lp_accumulate(inner_low[flat], term, theta);
      }
      ++flat;
    } while (next_index(gi, glo, ghi));

    const double level_norm = lp_finish(lp_acc, cell, p);
    res.level_norms.push_back(level_norm);
    if (scale == Scale::besov) {
      const double term = weight * level_norm;
      outer_all = lp_accumulate(outer_all, term, theta);
      if (!top) outer_low = lp_accumulate(outer_low, term, theta);
    }
  } while (next_index(j, jlo, jhi));

  auto theta_root = [theta](double acc) {
    return std::isinf(theta) ? acc : std::pow(acc, 1.0 / theta);
  };
  double all = 0.0, low = 0.0;
  if (scale == Scale::besov) {
    all = theta_root(outer_all);
    low = theta_root(outer_low);
  } else {
    double acc_all = 0.0, acc_low = 0.0;
    for (std::size_t k = 0; k < npoints; ++k) {
      acc_all = lp_accumulate(acc_all, theta_root(inner_all[k]), p);
      acc_low = lp_accumulate(acc_low, theta_root(inner_low[k]), p);
    }
    all = lp_finish(acc_all, cell, p);
    low = lp_finish(acc_low, cell, p);
  }
  res.value = all;
  res.last_level_increment = J == 0 ? all : all - low;
  return res;
}

}  // namespace detail

/// (sum_j 2^{s|j|_1 theta} ||R^{e(j)}_m(f, 2^-j, .)||_p^theta)^{1/theta},
/// truncated to |j|_inf <= j_max; theta = inf takes the supremum over j.
inline SeminormResult besov_seminorm(const SupportedFunction& f, const SmoothnessParams& params,
                                     const SeminormGrid& grid) {
  return detail::seminorm_engine(f, params, grid, Scale::besov);
}

/// ||(sum_j 2^{s|j|_1 theta} R^{e(j)}_m(f, 2^-j, .)^theta)^{1/theta}||_p with
/// the inner sum formed pointwise on the L_p grid.
inline SeminormResult tl_seminorm(const SupportedFunction& f, const SmoothnessParams& params,
                                  const SeminormGrid& grid) {
  return detail::seminorm_engine(f, params, grid, Scale::triebel_lizorkin);
}

inline SeminormResult seminorm(const SupportedFunction& f, const SmoothnessParams& params,
                               const SeminormGrid& grid, Scale scale) {
  return detail::seminorm_engine(f, params, grid, scale);
}

/// Tensor route: level terms, L_p norms and the theta-sum all factor over
/// axes, so the d-variate seminorm is the product of univariate ones on the
/// same per-axis grids.
inline SeminormResult seminorm(const TensorFunction& f, const SmoothnessParams& params,
                               const SeminormGrid& grid, Scale scale) {
  detail::require(f.dim() >= 1, "seminorm: tensor function has no factors");
  detail::require(f.support.dim() == f.dim(), "seminorm: support dimension mismatch");
  double all = 1.0, low = 1.0;
  SeminormResult res;
  for (int i = 0; i < f.dim(); ++i) {
    SeminormResult r = detail::seminorm_engine(f.factor(i), params, grid, scale);
    all *= r.value;
    low *= r.value - r.last_level_increment;
    if (i == 0) res = std::move(r);
  }
  if (f.dim() > 1) res.level_norms.clear();
  res.value = all;
  res.last_level_increment = grid.j_max == 0 ? all : all - low;
  return res;
}

/// {s, p, theta, m, j_max, lp_grid, value, last_level_increment}.
inline nlohmann::json to_json(const SeminormResult& r) {
  return {{"scale", to_string(r.scale)},
          {"s", r.params.s},
          {"p", detail::json_real(r.params.p)},
          {"theta", detail::json_real(r.params.theta)},
          {"m", r.params.order()},
          {"j_max", r.grid.j_max},
          {"lp_grid", r.grid.lp_grid},
          {"quad_points", r.grid.quad_points},
          {"value", r.value},
          {"last_level_increment", r.last_level_increment}};
}

/// Univariate cardinal B-spline of the given degree, supported on [0, degree+1].
inline double cardinal_bspline(int degree, double x) {
  if (degree == 0) return x >= 0.0 && x < 1.0 ? 1.0 : 0.0;
  if (x <= 0.0 || x >= degree + 1.0) return 0.0;
  return (x * cardinal_bspline(degree - 1, x) +
          (degree + 1.0 - x) * cardinal_bspline(degree - 1, x - 1.0)) /
         degree;
}

/// B-spline of the given degree stretched onto [lo, hi].
inline std::function<double(double)> bspline_bump(int degree, double lo, double hi) {
  detail::require(degree >= 0 && degree <= 10, "bspline_bump: degree must be in [0, 10]");
  detail::require(lo < hi, "bspline_bump: empty support");
  return [=](double x) { return cardinal_bspline(degree, (x - lo) / (hi - lo) * (degree + 1)); };
}

enum class BoundedOperator { change_of_variable, multiplier };

struct OperatorSpec {
  BoundedOperator kind = BoundedOperator::change_of_variable;
  int k = 3;
  double delta = 0.25;  // multiplier only
};

/// The image of a factor: t -> psi'(t) g(psi(t)) on [0,1], or t -> psi(t) g(t)
/// for the periodizer multiplier.
inline TensorFunction apply_operator(const OperatorSpec& op, const TensorFunction& f) {
  TensorFunction out;
  const int d = f.dim();
  if (op.kind == BoundedOperator::change_of_variable) {
    const auto kernel = std::make_shared<KernelPsiK<double>>(op.k);
    for (const auto& g : f.factors) {
      out.factors.push_back([kernel, g](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        const double w = kernel->eval(t, 1);
        return w == 0.0 ? 0.0 : w * g(kernel->eval(t, 0));
      });
    }
    out.support = Box::unit(d);
  } else {
    const auto kernel = std::make_shared<PeriodizerKernel<double>>(op.k, op.delta, 1);
    for (const auto& g : f.factors) {
      out.factors.push_back([kernel, g](double t) {
        const double w = kernel->eval1d(t);
        return w == 0.0 ? 0.0 : w * g(t);
      });
    }
    out.support = Box::cube(d, -op.delta, 1.0 + op.delta);
  }
  out.periodic = false;
  return out;
}

inline SupportedFunction apply_operator(const OperatorSpec& op, const SupportedFunction& f) {
  SupportedFunction out;
  out.dim = f.dim;
  out.periodic = false;
  const auto g = f.eval;
  if (op.kind == BoundedOperator::change_of_variable) {
    const auto kernel = std::make_shared<KernelPsiK<double>>(op.k);
    out.eval = [kernel, g](std::span<const double> x) {
      std::vector<double> y(x.size());
      double w = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || x[i] >= 1.0) return 0.0;
        w *= kernel->eval(x[i], 1);
        y[i] = kernel->eval(x[i], 0);
      }
      return w == 0.0 ? 0.0 : w * g(std::span<const double>(y));
    };
    out.support = Box::unit(f.dim);
  } else {
    const auto kernel = std::make_shared<PeriodizerKernel<double>>(op.k, op.delta, f.dim);
    out.eval = [kernel, g](std::span<const double> x) { return apply_multiplier(*kernel, g, x); };
    out.support = kernel->support();
  }
  return out;
}

namespace detail {

inline double checked_ratio(double num, double den) {
  if (!(den > 1e-14)) {
    throw DegenerateDenominator("boundedness_ratio: seminorm of f is below 1e-14");
  }
  return num / den;
}

inline void check_operator_input(const OperatorSpec& op, bool periodic) {
  if (op.kind == BoundedOperator::multiplier) {
    require(periodic, "boundedness_ratio: the multiplier acts on 1-periodic functions");
  }
}

}  // namespace detail

/// seminorm(op f) / seminorm(f).
inline double boundedness_ratio(const OperatorSpec& op, const TensorFunction& f,
                                const SmoothnessParams& params, Scale scale,
                                const SeminormGrid& grid) {
  detail::check_operator_input(op, f.periodic);
  const double den = seminorm(f, params, grid, scale).value;
  const double num = seminorm(apply_operator(op, f), params, grid, scale).value;
  return detail::checked_ratio(num, den);
}

inline double boundedness_ratio(const OperatorSpec& op, const SupportedFunction& f,
                                const SmoothnessParams& params, Scale scale,
                                const SeminormGrid& grid) {
  detail::check_operator_input(op, f.periodic);
  const double den = seminorm(f, params, grid, scale).value;
  const double num = seminorm(apply_operator(op, f), params, grid, scale).value;
  return detail::checked_ratio(num, den);
}

}  // namespace frolov
