#pragma once

// Frolov admissible lattices and the baseline cubature rules built on them
// (Frolov, Fibonacci, tensor Gauss-Legendre).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include "json.hpp"

#include "frolov/errors.hpp"
#include "frolov/numeric.hpp"
#include "frolov/rule.hpp"

namespace frolov {

inline constexpr int kMaxLatticeDim = 8;

/// Generator matrix of a full-rank lattice in R^d.
///
/// For Frolov generators `basis(i, j) = roots[i]^j`, so that coordinate i of
/// basis*m is q(roots[i]) for the integer polynomial q with coefficients m and
/// the product of all coordinates is the algebraic norm of q(root).
template <class Real = double>
struct LatticeGenerator {
  int dim = 0;
  std::vector<long long> poly_coeffs;  // ascending powers; empty for a custom basis
  std::vector<Real> roots;
  std::vector<Real> basis;  // row-major d x d
  Real det_abs = Real(0);

  const Real& at(int i, int j) const { return basis[static_cast<std::size_t>(i) * dim + j]; }
  bool is_frolov() const { return !poly_coeffs.empty(); }
};

namespace detail {

/// prod_{j=1}^d (x - (2j-1)) - 1, evaluated in product form (well conditioned
/// near the roots, unlike the expanded coefficients).
template <class T>
T frolov_poly(int d, const T& x) {
  T prod(1);
  for (int j = 1; j <= d; ++j) prod *= x - T(2 * j - 1);
  return prod - T(1);
}

template <class T>
T frolov_poly_derivative(int d, const T& x) {
  T sum(0);
  for (int j = 1; j <= d; ++j) {
    T prod(1);
    for (int i = 1; i <= d; ++i) {
      if (i != j) prod *= x - T(2 * i - 1);
    }
    sum += prod;
  }
  return sum;
}

inline std::vector<long long> frolov_poly_coeffs(int d) {
  std::vector<long long> c{1};
  for (int j = 1; j <= d; ++j) {
    const long long shift = 2 * j - 1;
    std::vector<long long> next(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= shift * c[i];
    }
    c = std::move(next);
  }
  c[0] -= 1;
  return c;
}

template <class T>
T newton_polish(int d, T x, int steps) {
  for (int it = 0; it < steps; ++it) {
    const T dp = frolov_poly_derivative(d, x);
    if (dp == T(0)) break;
    x -= frolov_poly(d, x) / dp;
  }
  return x;
}

/// All d real roots, located by a sign scan, bisection, then Newton polish.
template <class T>
std::vector<T> frolov_roots(int d) {
  using std::abs;
  std::vector<T> roots;
  const int per_unit = 64;
  const int lo = -1 * per_unit;
  const int hi = (2 * d + 1) * per_unit;
  T prev_x = T(lo) / T(per_unit);
  T prev_v = frolov_poly(d, prev_x);
  if (prev_v == T(0)) roots.push_back(prev_x);
  for (int g = lo + 1; g <= hi; ++g) {
    const T x = T(g) / T(per_unit);
    const T v = frolov_poly(d, x);
    if (v == T(0)) {
      roots.push_back(x);
    } else if (prev_v != T(0) && ((prev_v < T(0)) != (v < T(0)))) {
      T a = prev_x, b = x, fa = prev_v;
      for (int it = 0; it < 200 && b - a > T(4) * epsilon<T>() * abs(b); ++it) {
        const T mid = (a + b) / T(2);
        const T fm = frolov_poly(d, mid);
        if (fm == T(0)) {
          a = b = mid;
          break;
        }
        if ((fm < T(0)) == (fa < T(0))) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(newton_polish(d, (a + b) / T(2), 3));
    }
    prev_x = x;
    prev_v = v;
  }
  return roots;
}

template <class T>
T determinant(std::vector<T> a, int n) {
  using std::abs;
  T det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (abs(a[r * n + col]) > abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == T(0)) return T(0);
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      det = -det;
    }
    det *= a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const T factor = a[r * n + col] / a[col * n + col];
      for (int c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
    }
  }
  return det;
}

/// Gauss-Jordan inverse with partial pivoting.
template <class T>
std::vector<T> inverse(std::vector<T> a, int n) {
  using std::abs;
  std::vector<T> inv(static_cast<std::size_t>(n) * n, T(0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = T(1);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (abs(a[r * n + col]) > abs(a[pivot * n + col])) pivot = r;
    }
    require(a[pivot * n + col] != T(0), "inverse: singular lattice basis");
    for (int c = 0; c < n; ++c) {
      std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(inv[col * n + c], inv[pivot * n + c]);
    }
    const T p = a[col * n + col];
    for (int c = 0; c < n; ++c) {
      a[col * n + c] /= p;
      inv[col * n + c] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T factor = a[r * n + col];
      if (factor == T(0)) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c] -= factor * a[col * n + c];
        inv[r * n + c] -= factor * inv[col * n + c];
      }
    }
  }
  return inv;
}

/// Advances an odometer over the integer box [lo, hi]; false after the last.
inline bool next_index(std::vector<long long>& m, const std::vector<long long>& lo,
                       const std::vector<long long>& hi) {
  for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i) {
    if (m[i] < hi[i]) {
      ++m[i];
      return true;
    }
    m[i] = lo[i];
  }
  return false;
}

}  // namespace detail

/// Frolov generator from the polynomial prod_{j=1}^d (x - (2j-1)) - 1.
template <class Real = double>
LatticeGenerator<Real> build_frolov_generator(int d) {
  using std::abs;
  using std::pow;
  detail::require(d >= 1 && d <= kMaxLatticeDim,
                  "build_frolov_generator: dimension must be in [1, 8]");
  LatticeGenerator<Real> gen;
  gen.dim = d;
  gen.poly_coeffs = detail::frolov_poly_coeffs(d);
  // Roots are refined in quad precision and rounded afterwards: for d >= 6 the
  // residual at a correctly rounded double root already exceeds 1e-12.
  const std::vector<quad> refined = detail::frolov_roots<quad>(d);
  if (static_cast<int>(refined.size()) != d) {
    throw ConvergenceFailure("build_frolov_generator: found " +
                             std::to_string(refined.size()) + " real roots, expected " +
                             std::to_string(d));
  }
  for (const quad& r : refined) {
    if (!(abs(to_double(detail::frolov_poly(d, r))) <= 1e-12)) {
      throw ConvergenceFailure("build_frolov_generator: root refinement did not converge");
    }
    gen.roots.push_back(static_cast<Real>(r));
  }
  for (int i = 1; i < d; ++i) {
    if (!(gen.roots[i] - gen.roots[i - 1] > Real(1e-9))) {
      throw ConvergenceFailure("build_frolov_generator: roots are not separated");
    }
  }
  gen.basis.resize(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    Real power(1);
    for (int j = 0; j < d; ++j) {
      gen.basis[i * d + j] = power;
      power *= gen.roots[i];
    }
  }
  gen.det_abs = abs(detail::determinant(gen.basis, d));
  detail::require<ConvergenceFailure>(gen.det_abs > Real(0),
                                      "build_frolov_generator: singular basis");
  return gen;
}

/// Wraps an arbitrary basis (row-major) as a generator, e.g. to probe
/// non-admissible lattices.
template <class Real = double>
LatticeGenerator<Real> generator_from_basis(int d, std::vector<Real> basis) {
  using std::abs;
  detail::require(d >= 1 && basis.size() == static_cast<std::size_t>(d) * d,
                  "generator_from_basis: basis must be d x d");
  LatticeGenerator<Real> gen;
  gen.dim = d;
  gen.basis = std::move(basis);
  gen.det_abs = abs(detail::determinant(gen.basis, d));
  detail::require(gen.det_abs > Real(0), "generator_from_basis: singular basis");
  return gen;
}

/// min over nonzero integer m with |m|_inf <= radius of |prod_i (basis*m)_i|.
///
/// Coordinates are accumulated in at least long double; for Frolov generators
/// the roots are re-polished at that precision first, since a product of
/// order one can contain a coordinate of size ~1/(radius*root^d)^(d-1).
template <class Real>
double admissibility_check(const LatticeGenerator<Real>& gen, int radius) {
  using W = Wide<Real>;
  using std::abs;
  detail::require(radius >= 1, "admissibility_check: radius must be >= 1");
  const int d = gen.dim;
  std::vector<W> basis(static_cast<std::size_t>(d) * d);
  if (gen.is_frolov()) {
    for (int i = 0; i < d; ++i) {
      const W root = detail::newton_polish(d, static_cast<W>(gen.roots[i]), 4);
      W power(1);
      for (int j = 0; j < d; ++j) {
        basis[i * d + j] = power;
        power *= root;
      }
    }
  } else {
    for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = static_cast<W>(gen.basis[i]);
  }

  std::vector<long long> lo(d, -radius), hi(d, radius), m(lo);
  W best = std::numeric_limits<W>::infinity();
  do {
    // m and -m give the same product: keep vectors whose first nonzero entry is positive.
    int first = 0;
    while (first < d && m[first] == 0) ++first;
    if (first == d || m[first] < 0) continue;
    W prod(1);
    for (int i = 0; i < d; ++i) {
      W x(0);
      for (int j = 0; j < d; ++j) x += basis[i * d + j] * W(m[j]);
      prod *= x;
    }
    best = std::min(best, W(abs(prod)));
  } while (detail::next_index(m, lo, hi));
  return static_cast<double>(best);
}

/// Frolov rule: nodes basis*m/a inside `box` (boundary included), all weights
/// det_abs / a^d.
template <class Real>
CubatureRule<Real> frolov_rule(const LatticeGenerator<Real>& gen, double a, const Box& box) {
  using std::ceil;
  using std::floor;
  detail::require(a > 1.0 && std::isfinite(a), "frolov_rule: scale a must be > 1");
  box.validate();
  if (box.dim() != gen.dim) throw DimensionMismatch("frolov_rule: box dimension mismatch");
  const int d = gen.dim;
  const Real scale(a);
  const std::vector<Real> inv = detail::inverse(gen.basis, d);

  // Integer bounding box of a * inv(basis) * box.
  std::vector<long long> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    double mn = 0.0, mx = 0.0;
    for (int i = 0; i < d; ++i) {
      const double c = to_double(inv[j * d + i]) * a;
      mn += std::min(c * box.lo[i], c * box.hi[i]);
      mx += std::max(c * box.lo[i], c * box.hi[i]);
    }
    lo[j] = static_cast<long long>(std::floor(mn)) - 1;
    hi[j] = static_cast<long long>(std::ceil(mx)) + 1;
  }

  std::vector<Real> nodes;
  std::vector<Real> x(d);
  std::vector<long long> m(lo);
  do {
    bool inside = true;
    for (int i = 0; i < d && inside; ++i) {
      Real xi(0);
      for (int j = 0; j < d; ++j) xi += gen.at(i, j) * Real(m[j]);
      xi /= scale;
      inside = xi >= Real(box.lo[i]) && xi <= Real(box.hi[i]);
      x[i] = xi;
    }
    if (inside) nodes.insert(nodes.end(), x.begin(), x.end());
  } while (detail::next_index(m, lo, hi));

  if (nodes.empty()) {
    throw EmptyRule("frolov_rule: no lattice point inside the box (scale a too small)");
  }
  Real weight = gen.det_abs;
  for (int i = 0; i < d; ++i) weight /= scale;
  const std::size_t n = nodes.size() / d;
  return CubatureRule<Real>(d, std::move(nodes), std::vector<Real>(n, weight),
                            "frolov(d=" + std::to_string(d) + ",a=" + detail::format_real(a) + ")",
                            true);
}

inline std::uint64_t fibonacci_number(int index) {
  detail::require(index >= 1 && index <= 90, "fibonacci_number: index out of range");
  std::uint64_t prev = 0, cur = 1;
  for (int i = 1; i < index; ++i) {
    const std::uint64_t next = prev + cur;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline constexpr std::uint64_t kMaxFibonacciNodes = 10'000'000;

/// Two-dimensional Fibonacci lattice rule with F_index nodes
/// (i/F, {i F_{index-1} / F}), weights 1/F.
template <class Real = double>
CubatureRule<Real> fibonacci_rule(int fib_index) {
  detail::require(fib_index >= 3, "fibonacci_rule: index must be >= 3");
  detail::require(fib_index <= 40 && fibonacci_number(fib_index) <= kMaxFibonacciNodes,
                  "fibonacci_rule: Fibonacci number exceeds 10^7 nodes");
  const std::uint64_t n = fibonacci_number(fib_index);
  const std::uint64_t g = fibonacci_number(fib_index - 1);
  std::vector<Real> nodes(2 * n);
  const Real denom(static_cast<double>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    nodes[2 * i] = Real(static_cast<double>(i)) / denom;
    nodes[2 * i + 1] = Real(static_cast<double>((i * g) % n)) / denom;
  }
  return CubatureRule<Real>(2, std::move(nodes), std::vector<Real>(n, Real(1) / denom),
                            "fibonacci(F=" + std::to_string(n) + ")", true);
}

namespace detail {

/// (P_n(x), P_n'(x)) by the three-term recurrence.
template <class Real>
std::pair<Real, Real> legendre(int n, const Real& x) {
  Real p0(1), p1 = x;
  for (int k = 2; k <= n; ++k) {
    const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
    p0 = p1;
    p1 = p2;
  }
  return {p1, Real(n) * (x * p1 - p0) / (x * x - Real(1))};
}

}  // namespace detail

/// Gauss-Legendre nodes and weights on [0, 1], nodes ascending.
template <class Real = double>
std::pair<std::vector<Real>, std::vector<Real>> gauss_legendre(int points) {
  using std::abs;
  using std::cos;
  detail::require(points >= 1 && points <= 64, "gauss_legendre: points must be in [1, 64]");
  std::vector<Real> nodes(points), weights(points);
  const Real pi = boost::math::constants::pi<Real>();
  for (int i = 0; i < (points + 1) / 2; ++i) {
    // i-th largest root of P_n on [-1, 1].
    Real x = cos(pi * (Real(i) + Real(0.75)) / (Real(points) + Real(0.5)));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre(points, x);
      const Real dx = p / dp;
      x -= dx;
      if (abs(dx) <= Real(4) * epsilon<Real>()) break;
    }
    if (2 * i + 1 == points) x = Real(0);
    const Real dp = detail::legendre(points, x).second;
    const Real w = Real(1) / ((Real(1) - x * x) * dp * dp);
    nodes[points - 1 - i] = (Real(1) + x) / Real(2);
    nodes[i] = (Real(1) - x) / Real(2);
    weights[points - 1 - i] = w;
    weights[i] = w;
  }
  return {nodes, weights};
}

/// Tensor-product Gauss-Legendre rule on [0,1]^d.
template <class Real = double>
CubatureRule<Real> tensor_gauss_rule(int d, int points_per_axis) {
  detail::require(d >= 1, "tensor_gauss_rule: dimension must be positive");
  const auto [x1, w1] = gauss_legendre<Real>(points_per_axis);
  std::vector<long long> lo(d, 0), hi(d, points_per_axis - 1), idx(lo);
  std::vector<Real> nodes, weights;
  do {
    Real w(1);
    for (int c = 0; c < d; ++c) {
      nodes.push_back(x1[idx[c]]);
      w *= w1[idx[c]];
    }
    weights.push_back(w);
  } while (detail::next_index(idx, lo, hi));
  return CubatureRule<Real>(d, std::move(nodes), std::move(weights),
                            "gauss(d=" + std::to_string(d) + ",p=" +
                                std::to_string(points_per_axis) + ")");
}

/// JSON: {dim, poly_coeffs, roots, basis (row-major), det_abs}.
template <class Real>
nlohmann::json to_json(const LatticeGenerator<Real>& gen) {
  nlohmann::json j;
  j["dim"] = gen.dim;
  j["poly_coeffs"] = gen.poly_coeffs;
  std::vector<double> roots, basis;
  for (const Real& r : gen.roots) roots.push_back(to_double(r));
  for (const Real& b : gen.basis) basis.push_back(to_double(b));
  j["roots"] = roots;
  j["basis"] = basis;
  j["det_abs"] = to_double(gen.det_abs);
  return j;
}

}  // namespace frolov
