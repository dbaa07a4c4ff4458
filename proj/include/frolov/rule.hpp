#pragma once

#include <cstddef>
#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "frolov/errors.hpp"
#include "frolov/numeric.hpp"

namespace frolov {

/// Axis-aligned box [lo_1, hi_1] x ... x [lo_d, hi_d].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int d, double low, double high) {
    detail::require(d >= 1, "Box::cube: dimension must be positive");
    return Box{std::vector<double>(d, low), std::vector<double>(d, high)};
  }
  static Box unit(int d) { return cube(d, 0.0, 1.0); }

  int dim() const { return static_cast<int>(lo.size()); }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
  }

  void validate() const {
    detail::require(!lo.empty() && lo.size() == hi.size(),
                    "Box: lo/hi must be non-empty and of equal length");
    for (int i = 0; i < dim(); ++i) {
      detail::require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i],
                      "Box: bounds must be finite with lo < hi");
    }
  }

  template <class Real>
  bool contains(std::span<const Real> x) const {
    for (int i = 0; i < dim(); ++i) {
      if (x[i] < Real(lo[i]) || x[i] > Real(hi[i])) return false;
    }
    return true;
  }
};

/// A cubature formula Q(f) = sum_i w_i f(x_i) on R^d.
///
/// Nodes are stored row-major (node i occupies [i*d, (i+1)*d)). The rule is
/// immutable after construction.
template <class Real = double>
class CubatureRule {
 public:
  CubatureRule() = default;

  CubatureRule(int dim, std::vector<Real> nodes, std::vector<Real> weights, std::string label,
               bool equal_weights = false)
      : dim_(dim),
        nodes_(std::move(nodes)),
        weights_(std::move(weights)),
        label_(std::move(label)),
        equal_weights_(equal_weights) {
    detail::require(dim_ >= 1, "CubatureRule: dimension must be positive");
    detail::require(nodes_.size() == weights_.size() * static_cast<std::size_t>(dim_),
                    "CubatureRule: node/weight count mismatch");
    for (const Real& w : weights_) {
      detail::require(is_finite(w), "CubatureRule: non-finite weight");
    }
  }

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  const std::string& label() const { return label_; }
  bool equal_weights() const { return equal_weights_; }

  std::span<const Real> node(std::size_t i) const {
    return std::span<const Real>(nodes_).subspan(i * dim_, dim_);
  }
  const Real& weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Real>& nodes() const { return nodes_; }
  const std::vector<Real>& weights() const { return weights_; }

  /// Q(f) with compensated summation; `f` maps std::span<const Real> to Real.
  template <class F>
  Real apply(F&& f) const {
    CompensatedSum<Real> acc;
    for (std::size_t i = 0; i < size(); ++i) acc.add(weights_[i] * f(node(i)));
    return acc.value();
  }

  Real abs_weight_sum() const {
    using std::abs;
    CompensatedSum<Real> acc;
    for (const Real& w : weights_) acc.add(abs(w));
    return acc.value();
  }

 private:
  int dim_ = 0;
  std::vector<Real> nodes_;
  std::vector<Real> weights_;
  std::string label_;
  bool equal_weights_ = false;
};

/// Affinely maps a rule on [0,1]^d onto `box`; weights scale by vol(box).
template <class Real>
CubatureRule<Real> map_to_box(const CubatureRule<Real>& rule, const Box& box) {
  box.validate();
  if (box.dim() != rule.dim()) throw DimensionMismatch("map_to_box: dimension mismatch");
  const int d = rule.dim();
  std::vector<Real> nodes(rule.nodes());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (int c = 0; c < d; ++c) {
      Real& x = nodes[i * d + c];
      x = Real(box.lo[c]) + (Real(box.hi[c]) - Real(box.lo[c])) * x;
    }
  }
  Real scale(1);
  for (int c = 0; c < d; ++c) scale *= Real(box.hi[c]) - Real(box.lo[c]);
  std::vector<Real> weights(rule.weights());
  for (Real& w : weights) w *= scale;
  return CubatureRule<Real>(d, std::move(nodes), std::move(weights),
                            rule.label() + "@box", rule.equal_weights());
}

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// CSV export: header `x1,...,xd,weight`, one row per node.
template <class Real>
std::string to_csv(const CubatureRule<Real>& rule) {
  std::ostringstream out;
  for (int c = 0; c < rule.dim(); ++c) out << 'x' << (c + 1) << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (const Real& x : rule.node(i)) out << detail::format_real(to_double(x)) << ',';
    out << detail::format_real(to_double(rule.weight(i))) << '\n';
  }
  return out.str();
}

}  // namespace frolov
