#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/float128.hpp>

namespace frolov {

using quad = boost::multiprecision::float128;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class Real>
constexpr Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

/// Working type at least as wide as `long double`; used wherever cancellation
/// in a product of lattice coordinates has to be controlled.
template <class Real>
using Wide = std::conditional_t<(std::numeric_limits<Real>::digits >
                                 std::numeric_limits<long double>::digits),
                                Real, long double>;

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
Real from_rational(const Rational& r) {
  using boost::multiprecision::cpp_bin_float_100;
  const cpp_bin_float_100 num(boost::multiprecision::numerator(r));
  const cpp_bin_float_100 den(boost::multiprecision::denominator(r));
  const cpp_bin_float_100 q = num / den;
  return q.template convert_to<Real>();
}

/// Neumaier's variant of Kahan summation.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& x) {
    using std::abs;
    const Real t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      correction_ += (sum_ - t) + x;
    } else {
      correction_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + correction_; }

 private:
  Real sum_{0};
  Real correction_{0};
};

/// Fractional part x - floor(x), folded into [0, 1).
template <class Real>
Real fractional_part(const Real& x) {
  using std::floor;
  Real r = x - floor(x);
  if (r >= Real(1)) r = Real(0);
  return r;
}

template <class Real>
bool is_finite(const Real& x) {
  using std::isfinite;
  return static_cast<bool>(isfinite(x));
}

template <class Real>
std::string precision_name() {
  if constexpr (std::is_same_v<Real, double>) {
    return "double";
  } else if constexpr (std::is_same_v<Real, quad>) {
    return "quad";
  } else {
    return "other";
  }
}

}  // namespace frolov
