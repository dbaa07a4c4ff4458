#pragma once

// Univariate change-of-variable kernels:
//   psi_k(t) = int_0^t xi^k (1-xi)^k dxi / B(k+1, k+1)   on [0, 1],
// clamped to 0 / 1 outside, and the C-infinity kernel built from
// exp(-1/(xi(1-xi))). Also the quotient diagnostics that decide whether
// |phi^(n)| / |phi|^(1/p) stays bounded near the endpoints.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include "json.hpp"

#include "frolov/errors.hpp"
#include "frolov/numeric.hpp"

namespace frolov {

inline constexpr int kMaxKernelK = 16;

namespace detail {

inline BigInt binomial(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline std::vector<Rational> differentiate(const std::vector<Rational>& c) {
  if (c.size() <= 1) return {Rational(0)};
  std::vector<Rational> out(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) out[i - 1] = c[i] * static_cast<int>(i);
  return out;
}

inline Rational horner(const std::vector<Rational>& c, const Rational& t) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

template <class Real>
Real horner(const std::vector<Real>& c, const Real& t) {
  Real acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

}  // namespace detail

/// Polynomial kernel psi_k with exact rational coefficients.
///
/// Derivative tables for every order 0..2k+1 are kept both exactly and in
/// `Real`. Floating evaluation on (1/2, 1] goes through the symmetry
/// psi(t) = 1 - psi(1 - t), which keeps full relative accuracy next to t = 1.
/// Order 0 is summed in Bernstein form,
/// sum_{j>k} C(2k+1, j) t^j (1-t)^(2k+1-j), whose terms are all positive; the
/// monomial form cancels badly near t = 1/2 for large k.
template <class Real = double>
class KernelPsiK {
 public:
  explicit KernelPsiK(int k) : k_(k) {
    detail::require(k >= 1 && k <= kMaxKernelK, "KernelPsiK: k must be in [1, 16]");
    // 1 / B(k+1, k+1) = (2k+1)! / (k!)^2
    BigInt num = 1, den = 1;
    for (int i = 2; i <= 2 * k + 1; ++i) num *= i;
    for (int i = 2; i <= k; ++i) den *= i;
    norm_ = Rational(num, den * den);

    // psi_k(t) = norm * sum_i C(k,i) (-1)^i t^(k+i+1) / (k+i+1)
    std::vector<Rational> c(2 * k + 2, Rational(0));
    for (int i = 0; i <= k; ++i) {
      Rational term(detail::binomial(k, i), BigInt(k + i + 1));
      if (i % 2 == 1) term = -term;
      c[k + i + 1] = norm_ * term;
    }
    exact_.push_back(std::move(c));
    for (int r = 1; r <= 2 * k + 1; ++r) exact_.push_back(detail::differentiate(exact_.back()));
    for (const auto& table : exact_) {
      std::vector<Real> t;
      t.reserve(table.size());
      for (const Rational& q : table) t.push_back(from_rational<Real>(q));
      tables_.push_back(std::move(t));
    }
    for (int j = k + 1; j <= 2 * k + 1; ++j) {
      bernstein_.push_back(from_rational<Real>(Rational(detail::binomial(2 * k + 1, j), BigInt(1))));
    }
  }

  int k() const { return k_; }
  int degree() const { return 2 * k_ + 1; }
  const Rational& norm_const_exact() const { return norm_; }
  Real norm_const() const { return from_rational<Real>(norm_); }

  /// Ascending coefficients of the order-r derivative of psi_k on [0, 1].
  const std::vector<Rational>& coeffs(int order = 0) const { return exact_.at(order); }

  /// r-th derivative of psi_k at t. Outside [0, 1] the kernel is constant
  /// (0 left, 1 right), so derivatives vanish there; orders beyond the
  /// polynomial degree return 0.
  Real eval(const Real& t, int order = 0) const {
    detail::require(order >= 0, "KernelPsiK::eval: order must be >= 0");
    if (order > degree()) return Real(0);
    if (t < Real(0)) return Real(0);
    if (t > Real(1)) return order == 0 ? Real(1) : Real(0);
    if (order == 0) {
      if (t <= Real(0.5)) return lower_tail(t);
      return Real(1) - lower_tail(Real(1) - t);
    }
    if (t <= Real(0.5)) return detail::horner(tables_[order], t);
    const Real mirrored = detail::horner(tables_[order], Real(1) - t);
    if (order == 0) return Real(1) - mirrored;
    return order % 2 == 1 ? mirrored : -mirrored;
  }

  /// Exact polynomial value of the r-th derivative at a rational t in [0, 1].
  Rational eval_exact(const Rational& t, int order = 0) const {
    detail::require(order >= 0, "KernelPsiK::eval_exact: order must be >= 0");
    if (order > degree()) return Rational(0);
    return detail::horner(exact_[order], t);
  }

  /// phi = psi_k', the bump whose integral is one.
  Real phi(const Real& t, int order = 0) const { return eval(t, order + 1); }

 private:
  Real lower_tail(const Real& t) const {
    const int n = 2 * k_ + 1;
    const Real u = Real(1) - t;
    Real sum(0), tp(1), up(1);
    for (int j = 0; j <= k_; ++j) tp *= t;  // t^(k+1)
    for (int j = 0; j < k_; ++j) up *= u;   // u^k
    for (int j = k_ + 1; j <= n; ++j) {
      sum += bernstein_[j - k_ - 1] * tp * up;
      tp *= t;
      if (j < n) up /= u;
    }
    return sum;
  }

  int k_;
  Rational norm_;
  std::vector<std::vector<Rational>> exact_;
  std::vector<std::vector<Real>> tables_;
  std::vector<Real> bernstein_;  // C(2k+1, j), j = k+1..2k+1
};

template <class Real>
Real psi_eval(const KernelPsiK<Real>& kernel, const Real& t, int order = 0) {
  return kernel.eval(t, order);
}

/// Exact integral of psi_k' over [0, 1] (equals psi_k(1) - psi_k(0)).
template <class Real>
Rational integral_of_derivative_exact(const KernelPsiK<Real>& kernel) {
  const std::vector<Rational>& d = kernel.coeffs(1);
  Rational sum = 0;
  for (std::size_t i = 0; i < d.size(); ++i) sum += d[i] / static_cast<int>(i + 1);
  return sum;
}

/// Kernel with derivative proportional to exp(-1/(xi(1-xi))) on (0, 1).
class CInfKernel {
 public:
  CInfKernel() {
    const double mass = integrate_density(0.0, 0.5);
    norm_ = 1.0 / (2.0 * mass);
  }

  double norm_const() const { return norm_; }

  /// Unnormalized density; exponents below -700 are flushed to zero.
  static double density(double xi) {
    if (xi <= 0.0 || xi >= 1.0) return 0.0;
    const double expo = -1.0 / (xi * (1.0 - xi));
    return expo < -700.0 ? 0.0 : std::exp(expo);
  }

  double eval(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t > 0.5) return 1.0 - eval(1.0 - t);
    return norm_ * integrate_density(0.0, t);
  }

  double derivative(double t) const { return norm_ * density(t); }

 private:
  static double integrate_density(double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(density, a, b, 12, 1e-14);
  }

  double norm_ = 0.0;
};

inline double cinf_eval(const CInfKernel& kernel, double t) { return kernel.eval(t); }

struct QuotientEstimate {
  double sup_estimate = 0.0;
  bool diverging = false;
  std::vector<double> level_sups;  // sup over the level-L grid, L = 1..grid_levels
};

/// Relative growth between the last two grid levels above which a quotient
/// is declared divergent. A quotient behaving like t^(-e) near 0 grows by
/// 2^e per level; every divergent case of interest has e >= 1/4.
inline constexpr double kDivergenceGrowth = 1.05;

namespace detail {

/// Sup of g over the nested dyadic grids {i / 2^L : 0 < i <= 2^(L-1)}; the
/// quotients are symmetric about 1/2 so the right half is not sampled.
template <class G>
QuotientEstimate dyadic_sup(G&& g, int grid_levels, bool forced_divergence) {
  detail::require(grid_levels >= 3 && grid_levels <= 14,
                  "quotient diagnostics: grid_levels must be in [3, 14]");
  QuotientEstimate est;
  double sup = 0.0;
  for (int level = 1; level <= grid_levels; ++level) {
    const double inv = std::ldexp(1.0, -level);
    const long long count = 1LL << (level - 1);
    // Only odd indices are new on this level.
    for (long long i = 1; i <= count; i += 2) sup = std::max(sup, g(static_cast<double>(i) * inv));
    est.level_sups.push_back(sup);
  }
  est.sup_estimate = sup;
  const double prev = est.level_sups[est.level_sups.size() - 2];
  const bool grows = !(sup <= kDivergenceGrowth * prev);
  est.diverging = forced_divergence || grows || !std::isfinite(sup);
  return est;
}

}  // namespace detail

/// Estimates sup over (0,1) of |phi^(n)(t)| / |phi(t)|^(1/p), phi = psi_k'.
///
/// p = infinity uses the exponent 0. Orders n > k are always reported as
/// divergent: phi^(k) jumps at 0 and 1, so phi^(n) for n > k carries point
/// masses there and is not bounded as a function on R.
template <class Real>
QuotientEstimate quotient_sup(const KernelPsiK<Real>& kernel, int n, double p, int grid_levels) {
  detail::require(n >= 0 && n <= 2 * kernel.k(), "quotient_sup: order must be in [0, 2k]");
  detail::require(p > 1.0, "quotient_sup: only p > 1 is supported (p <= 1 is open)");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  auto g = [&](double t) {
    const double num = std::abs(to_double(kernel.phi(Real(t), n)));
    const double den = std::pow(std::abs(to_double(kernel.phi(Real(t), 0))), inv_p);
    return num / den;
  };
  return detail::dyadic_sup(g, grid_levels, n > kernel.k());
}

/// Estimates sup over (0,1) of |phi^(r)(t) phi^(alpha)(t)| / |phi(t)|.
template <class Real>
QuotientEstimate product_quotient_sup(const KernelPsiK<Real>& kernel, int r, int alpha,
                                      int grid_levels) {
  detail::require(r >= 0 && alpha >= 0 && r + alpha <= 2 * kernel.k(),
                  "product_quotient_sup: need r, alpha >= 0 and r + alpha <= 2k");
  auto g = [&](double t) {
    const double a = to_double(kernel.phi(Real(t), r));
    const double b = to_double(kernel.phi(Real(t), alpha));
    return std::abs(a * b) / std::abs(to_double(kernel.phi(Real(t), 0)));
  };
  return detail::dyadic_sup(g, grid_levels, r > kernel.k() || alpha > kernel.k());
}

enum class KernelVariant { change_of_variable_B, change_of_variable_F, classical_sobolev };

/// Smallest integer k satisfying the kernel hypothesis of the given variant:
///   B-spaces:  k > floor(s) + 2   (k > floor(s) + 3 when p = 1),  1 <= p <= inf
///   F-spaces:  k > floor(s) + 2,                                  1 <  p <  inf
///   classical: k >= floor(s p / (p - 1)) + 1,                     1 <  p <= inf
inline int min_k_for(double s, double p, KernelVariant variant) {
  detail::require(s > 0.0 && std::isfinite(s), "min_k_for: s must be positive");
  const int fs = static_cast<int>(std::floor(s));
  switch (variant) {
    case KernelVariant::change_of_variable_B:
      detail::require(p >= 1.0, "min_k_for: B-variant requires p >= 1");
      return p == 1.0 ? fs + 4 : fs + 3;
    case KernelVariant::change_of_variable_F:
      detail::require(p > 1.0 && std::isfinite(p), "min_k_for: F-variant requires 1 < p < inf");
      return fs + 3;
    case KernelVariant::classical_sobolev: {
      detail::require(p > 1.0, "min_k_for: classical condition is undefined for p <= 1");
      const double q = std::isinf(p) ? s : s * p / (p - 1.0);
      return static_cast<int>(std::floor(q + 1e-12)) + 1;
    }
  }
  throw InvalidArgument("min_k_for: unknown variant");
}

/// {type: "psi_k", k, norm_const, coeffs: [[num, den], ...]} (ascending powers).
template <class Real>
nlohmann::json to_json(const KernelPsiK<Real>& kernel) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const Rational& c : kernel.coeffs(0)) {
    coeffs.push_back({boost::multiprecision::numerator(c).template convert_to<long long>(),
                      boost::multiprecision::denominator(c).template convert_to<long long>()});
  }
  return {{"type", "psi_k"},
          {"k", kernel.k()},
          {"norm_const", to_double(kernel.norm_const())},
          {"coeffs", coeffs}};
}

inline nlohmann::json to_json(const CInfKernel& kernel) {
  return {{"type", "cinf"}, {"norm_const", kernel.norm_const()}};
}

}  // namespace frolov
