#pragma once

// Rule modifiers: change of variable (x -> psi(x), weight * prod psi'(x_i))
// and partition-of-unity periodization (x -> {x}, weight * psi(x)).

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "frolov/errors.hpp"
#include "frolov/kernels.hpp"
#include "frolov/lattice.hpp"
#include "frolov/numeric.hpp"
#include "frolov/rule.hpp"

namespace frolov {

enum class TransformKind { change_of_variable, periodized };

inline std::string to_string(TransformKind kind) {
  return kind == TransformKind::change_of_variable ? "change_of_variable" : "periodized";
}

/// A base rule after one modifier, with zero-weight nodes removed.
template <class Real = double>
struct TransformedRule {
  TransformKind kind = TransformKind::change_of_variable;
  nlohmann::json kernel;
  std::string base_label;
  std::size_t base_size = 0;
  std::size_t dropped_nodes = 0;
  std::size_t out_of_support = 0;  // periodizer only: base nodes outside the support box
  CubatureRule<Real> rule;

  std::size_t size() const { return rule.size(); }

  template <class F>
  Real apply(F&& f) const {
    return rule.apply(std::forward<F>(f));
  }

  nlohmann::json provenance() const {
    return {{"kind", to_string(kind)},
            {"kernel", kernel},
            {"base_label", base_label},
            {"dropped_nodes", dropped_nodes},
            {"out_of_support", out_of_support}};
  }
};

/// CSV of the transformed nodes, same schema as a plain rule.
template <class Real>
std::string to_csv(const TransformedRule<Real>& t) {
  return to_csv(t.rule);
}

template <class Real>
struct MappedPoint {
  std::vector<Real> mapped;
  Real weight_factor;
};

/// (psi(x_1), ..., psi(x_d)) and |det psi'(x)| = prod_i psi'(x_i).
template <class Real>
MappedPoint<Real> change_of_variable_point(const KernelPsiK<Real>& kernel,
                                           std::span<const Real> x) {
  MappedPoint<Real> out{std::vector<Real>(x.size()), Real(1)};
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.mapped[i] = kernel.eval(x[i], 0);
    out.weight_factor *= kernel.eval(x[i], 1);
  }
  return out;
}

/// Q^psi(f) = sum_i w_i prod_c psi'(x_ic) f(psi(x_i)).
template <class Real>
TransformedRule<Real> transform_rule(const CubatureRule<Real>& base,
                                     const KernelPsiK<Real>& kernel) {
  const int d = base.dim();
  std::vector<Real> nodes, weights;
  nodes.reserve(base.nodes().size());
  weights.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const MappedPoint<Real> mp = change_of_variable_point(kernel, base.node(i));
    const Real w = base.weight(i) * mp.weight_factor;
    if (w == Real(0)) continue;
    nodes.insert(nodes.end(), mp.mapped.begin(), mp.mapped.end());
    weights.push_back(w);
  }
  TransformedRule<Real> out;
  out.kind = TransformKind::change_of_variable;
  out.kernel = to_json(kernel);
  out.base_label = base.label();
  out.base_size = base.size();
  out.dropped_nodes = base.size() - weights.size();
  out.rule = CubatureRule<Real>(d, std::move(nodes), std::move(weights),
                                "cov[k=" + std::to_string(kernel.k()) + "](" + base.label() + ")");
  return out;
}

/// Tensor partition of unity on R^d.
///
/// The univariate factor ramps up on [-delta, delta] through
/// psi_k((t + delta) / (2 delta)), equals 1 on [delta, 1 - delta] and ramps
/// down on [1 - delta, 1 + delta] through 1 - psi_k((t - 1 + delta) / (2 delta)).
/// The two ramps are the same function of the overlap coordinate, so
/// psi(t) + psi(t - 1) = 1 there and the integer translates sum to one.
template <class Real = double>
class PeriodizerKernel {
 public:
  PeriodizerKernel(int k, double delta, int dim) : ramp_(k), delta_(delta), dim_(dim) {
    detail::require(delta > 0.0 && delta < 0.5, "PeriodizerKernel: delta must be in (0, 1/2)");
    detail::require(dim >= 1, "PeriodizerKernel: dimension must be positive");
  }

  int k() const { return ramp_.k(); }
  double delta() const { return delta_; }
  int dim() const { return dim_; }
  const KernelPsiK<Real>& ramp() const { return ramp_; }
  Box support() const { return Box::cube(dim_, -delta_, 1.0 + delta_); }

  Real eval1d(const Real& t) const {
    const Real delta(delta_);
    if (t <= -delta || t >= Real(1) + delta) return Real(0);
    if (t < delta) return ramp_.eval((t + delta) / (Real(2) * delta), 0);
    if (t <= Real(1) - delta) return Real(1);
    return Real(1) - ramp_.eval((t - Real(1) + delta) / (Real(2) * delta), 0);
  }

  /// r-th derivative of the univariate factor.
  Real derivative1d(const Real& t, int order) const {
    if (order == 0) return eval1d(t);
    const Real delta(delta_);
    if (t <= -delta || t >= Real(1) + delta) return Real(0);
    Real scale(1);
    for (int i = 0; i < order; ++i) scale *= Real(2) * delta;
    if (t < delta) return ramp_.eval((t + delta) / (Real(2) * delta), order) / scale;
    if (t <= Real(1) - delta) return Real(0);
    return -ramp_.eval((t - Real(1) + delta) / (Real(2) * delta), order) / scale;
  }

  Real eval(std::span<const Real> x) const {
    Real v(1);
    for (const Real& xi : x) {
      v *= eval1d(xi);
      if (v == Real(0)) break;
    }
    return v;
  }

  nlohmann::json to_json() const {
    return {{"type", "periodizer"}, {"k", k()}, {"delta", delta_}, {"dim", dim_},
            {"ramp", frolov::to_json(ramp_)}};
  }

 private:
  KernelPsiK<Real> ramp_;
  double delta_;
  int dim_;
};

template <class Real = double>
PeriodizerKernel<Real> build_periodizer(int k, double delta, int d) {
  return PeriodizerKernel<Real>(k, delta, d);
}

/// max over a uniform grid on [0,1]^d of |sum_{l in {-1,0,1}^d} psi(x + l) - 1|.
/// `grid_points` is the total number of grid points; each axis gets
/// ceil(grid_points^(1/d)) equispaced points including both endpoints.
template <class Real>
double partition_check(const PeriodizerKernel<Real>& kernel, long long grid_points) {
  detail::require(grid_points >= 2, "partition_check: need at least 2 grid points");
  const int d = kernel.dim();
  long long per_axis = static_cast<long long>(
      std::ceil(std::pow(static_cast<double>(grid_points), 1.0 / d) - 1e-9));
  per_axis = std::max<long long>(per_axis, 2);

  // Shift sums factor over axes, but the check is done on the full sum.
  std::vector<std::array<Real, 3>> shifted(static_cast<std::size_t>(per_axis));
  for (long long i = 0; i < per_axis; ++i) {
    const Real x = Real(static_cast<double>(i)) / Real(static_cast<double>(per_axis - 1));
    shifted[i] = {kernel.eval1d(x - Real(1)), kernel.eval1d(x), kernel.eval1d(x + Real(1))};
  }
  std::vector<long long> lo(d, 0), hi(d, per_axis - 1), idx(lo);
  std::vector<long long> slo(d, 0), shi(d, 2);
  double worst = 0.0;
  do {
    Real sum(0);
    std::vector<long long> shift(slo);
    do {
      Real term(1);
      for (int c = 0; c < d; ++c) term *= shifted[idx[c]][shift[c]];
      sum += term;
    } while (detail::next_index(shift, slo, shi));
    worst = std::max(worst, std::abs(to_double(sum - Real(1))));
  } while (detail::next_index(idx, lo, hi));
  return worst;
}

/// Q~(f) = sum_i psi(x_i) w_i f({x_i}) for a base rule on the support box.
///
/// Base nodes outside the support box would carry weight 0; they are dropped
/// and counted in `out_of_support`.
template <class Real>
TransformedRule<Real> periodize_rule(const CubatureRule<Real>& base,
                                     const PeriodizerKernel<Real>& kernel) {
  if (base.dim() != kernel.dim()) throw DimensionMismatch("periodize_rule: dimension mismatch");
  const int d = base.dim();
  const Box support = kernel.support();
  std::vector<Real> nodes, weights;
  std::size_t outside = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const std::span<const Real> x = base.node(i);
    if (!support.contains(x)) {
      ++outside;
      continue;
    }
    const Real w = base.weight(i) * kernel.eval(x);
    if (w == Real(0)) continue;
    for (const Real& xi : x) nodes.push_back(fractional_part(xi));
    weights.push_back(w);
  }
  TransformedRule<Real> out;
  out.kind = TransformKind::periodized;
  out.kernel = kernel.to_json();
  out.base_label = base.label();
  out.base_size = base.size();
  out.dropped_nodes = base.size() - weights.size();
  out.out_of_support = outside;
  out.rule = CubatureRule<Real>(d, std::move(nodes), std::move(weights),
                                "periodized[k=" + std::to_string(kernel.k()) + "](" +
                                    base.label() + ")");
  return out;
}

/// Pointwise multiplier psi(x) f(x).
template <class Real, class F>
Real apply_multiplier(const PeriodizerKernel<Real>& kernel, F&& f, std::span<const Real> x) {
  const Real w = kernel.eval(x);
  if (w == Real(0)) return Real(0);
  return w * f(x);
}

}  // namespace frolov
