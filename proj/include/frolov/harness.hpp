#pragma once

// Test-function registry, error measurement and convergence sweeps.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "json.hpp"

#include "frolov/errors.hpp"
#include "frolov/kernels.hpp"
#include "frolov/lattice.hpp"
#include "frolov/numeric.hpp"
#include "frolov/rule.hpp"
#include "frolov/transforms.hpp"

namespace frolov {

template <class Real = double>
struct TestFunction {
  std::string name;
  int dim = 1;
  std::function<Real(std::span<const Real>)> eval;
  Real exact_integral{0};  // over [0,1]^d
  double nominal_s = 0.0;  // descriptive smoothness tag (s, p); inf for C^inf
  double nominal_p = 0.0;
  bool periodic = false;
  Box support;
  // Per-axis points where the function is not smooth; the integral oracle
  // splits its panels there.
  std::vector<std::vector<double>> breakpoints;

  Real operator()(std::span<const Real> x) const { return eval(x); }
};

inline const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = {"poly",     "kink", "periodic",
                                                 "bspline",  "exp",  "kink_bump"};
  return names;
}

namespace detail {

template <class Real>
Real pi() {
  return boost::math::constants::pi<Real>();
}

// 140 x^3 (1-x)^3 integrates to 1 over [0,1].
template <class Real>
Real smooth_bump(const Real& x) {
  if (x <= Real(0) || x >= Real(1)) return Real(0);
  const Real y = x * (Real(1) - x);
  return Real(140) * y * y * y;
}

// Quadratic B-spline stretched onto [lo, hi], scaled to unit mass.
template <class Real>
Real quadratic_bump(const Real& x, double lo, double hi) {
  const Real u = (x - Real(lo)) / Real(hi - lo) * Real(3);
  Real v(0);
  if (u <= Real(0) || u >= Real(3)) return v;
  if (u < Real(1)) {
    v = u * u / Real(2);
  } else if (u < Real(2)) {
    v = (Real(-2) * u * u + Real(6) * u - Real(3)) / Real(2);
  } else {
    const Real w = Real(3) - u;
    v = w * w / Real(2);
  }
  return v * Real(3) / Real(hi - lo);
}

template <class Real, class G>
Real gauss_integral(G&& g, double a, double b, int points) {
  const auto [x, w] = gauss_legendre<Real>(points);
  Real sum(0);
  for (int i = 0; i < points; ++i) {
    sum += w[i] * g(Real(a) + Real(b - a) * x[i]);
  }
  return sum * Real(b - a);
}

template <class Real>
TestFunction<Real> make_test_function(const std::string& name, int d, double kink) {
  require(d >= 1 && d <= kMaxLatticeDim, "registry: dimension must be in [1, 8]");
  require(kink > 0.0 && kink < 1.0, "registry: kink location must be in (0, 1)");
  using std::cos;
  using std::exp;
  TestFunction<Real> f;
  f.name = name;
  f.dim = d;
  f.support = Box::unit(d);
  f.breakpoints.assign(d, {});
  const double inf = std::numeric_limits<double>::infinity();

  if (name == "poly") {
    f.eval = [](std::span<const Real> x) {
      Real v(1);
      for (const Real& xi : x) v *= Real(3) * xi * xi;
      return v;
    };
    f.exact_integral = Real(1);
    f.nominal_s = inf;
    f.nominal_p = inf;
  } else if (name == "kink") {
    f.eval = [kink](std::span<const Real> x) {
      Real v = x[0] > Real(kink) ? x[0] - Real(kink) : Real(0);
      for (std::size_t i = 1; i < x.size(); ++i) v *= Real(2) * x[i];
      return v;
    };
    f.exact_integral = (Real(1) - Real(kink)) * (Real(1) - Real(kink)) / Real(2);
    f.nominal_s = 2.0;
    f.nominal_p = 1.0;
    f.breakpoints[0] = {kink};
  } else if (name == "periodic") {
    f.eval = [](std::span<const Real> x) {
      Real v(1);
      for (const Real& xi : x) v *= Real(1) + cos(Real(2) * pi<Real>() * xi) / Real(2);
      return v;
    };
    f.exact_integral = Real(1);
    f.nominal_s = inf;
    f.nominal_p = inf;
    f.periodic = true;
  } else if (name == "bspline") {
    constexpr double lo = 0.1, hi = 0.9;
    f.eval = [](std::span<const Real> x) {
      Real v(1);
      for (const Real& xi : x) v *= quadratic_bump(xi, lo, hi);
      return v;
    };
    f.exact_integral = Real(1);
    f.nominal_s = 3.0;
    f.nominal_p = 1.0;
    f.support = Box::cube(d, lo, hi);
    for (auto& b : f.breakpoints) b = {lo, lo + (hi - lo) / 3.0, lo + 2.0 * (hi - lo) / 3.0, hi};
  } else if (name == "exp") {
    f.eval = [](std::span<const Real> x) {
      Real v(1);
      for (const Real& xi : x) v *= exp(xi);
      return v;
    };
    f.exact_integral = Real(1);
    for (int i = 0; i < d; ++i) f.exact_integral *= exp(Real(1)) - Real(1);
    f.nominal_s = inf;
    f.nominal_p = inf;
  } else if (name == "kink_bump") {
    // Compactly supported analogue of "kink": same kink, vanishing to third
    // order on the boundary of the cube.
    f.eval = [kink](std::span<const Real> x) {
      Real v = x[0] > Real(kink) ? (x[0] - Real(kink)) * smooth_bump(x[0]) : Real(0);
      for (std::size_t i = 1; i < x.size(); ++i) v *= smooth_bump(x[i]);
      return v;
    };
    // Degree-7 polynomial on [kink, 1]: an 8-point Gauss rule is exact.
    f.exact_integral = gauss_integral<Real>(
        [kink](const Real& t) { return (t - Real(kink)) * smooth_bump(t); }, kink, 1.0, 8);
    f.nominal_s = 2.0;
    f.nominal_p = 1.0;
    f.breakpoints[0] = {kink};
  } else {
    throw InvalidArgument("registry: unknown test function '" + name + "'");
  }
  return f;
}

/// Composite 3-point Gauss-Legendre over [0,1]^d with panels split at the
/// breakpoints, about 10^6 nodes in total.
inline double oracle_integral(const TestFunction<double>& f) {
  const int d = f.dim;
  const int nodes_per_axis = std::max(
      3, static_cast<int>(std::floor(std::pow(1.0e6, 1.0 / d) + 1e-9)));
  const int panels = std::max(1, nodes_per_axis / 3);
  const auto [gx, gw] = gauss_legendre<double>(3);

  std::vector<std::vector<double>> px(d), pw(d);
  for (int c = 0; c < d; ++c) {
    std::vector<double> cuts;
    for (int i = 0; i <= panels; ++i) cuts.push_back(static_cast<double>(i) / panels);
    for (double b : f.breakpoints[c]) {
      if (b > 0.0 && b < 1.0) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], h = cuts[i + 1] - cuts[i];
      if (h <= 0.0) continue;
      for (int q = 0; q < 3; ++q) {
        px[c].push_back(a + h * gx[q]);
        pw[c].push_back(h * gw[q]);
      }
    }
  }
  std::vector<long long> idx(d, 0), lo(d, 0), hi(d);
  for (int c = 0; c < d; ++c) hi[c] = static_cast<long long>(px[c].size()) - 1;
  std::vector<double> x(d);
  CompensatedSum<double> acc;
  do {
    double w = 1.0;
    for (int c = 0; c < d; ++c) {
      x[c] = px[c][idx[c]];
      w *= pw[c][idx[c]];
    }
    acc.add(w * f.eval(std::span<const double>(x)));
  } while (next_index(idx, lo, hi));
  return acc.value();
}

inline constexpr double kOracleTolerance = 1e-8;

/// Runs the integral self-check once per (name, d, kink).
inline void check_registration(const std::string& name, int d, double kink) {
  static std::mutex mutex;
  static std::map<std::tuple<std::string, int, double>, double> checked;
  const auto key = std::make_tuple(name, d, kink);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (checked.count(key)) return;
  }
  const TestFunction<double> f = make_test_function<double>(name, d, kink);
  const double oracle = oracle_integral(f);
  const double deviation = std::abs(oracle - f.exact_integral);
  if (!(deviation <= kOracleTolerance)) {
    throw ConvergenceFailure("registry: exact integral of '" + name + "' (d=" +
                             std::to_string(d) + ") disagrees with the quadrature oracle by " +
                             std::to_string(deviation));
  }
  std::lock_guard<std::mutex> lock(mutex);
  checked[key] = deviation;
}

}  // namespace detail

/// Test function by name; registration verifies the closed-form integral.
template <class Real = double>
TestFunction<Real> find_function(const std::string& name, int d, double kink = 0.5) {
  TestFunction<Real> f = detail::make_test_function<Real>(name, d, kink);
  detail::check_registration(name, d, kink);
  return f;
}

template <class Real = double>
std::vector<TestFunction<Real>> registry(int d, double kink = 0.5) {
  std::vector<TestFunction<Real>> out;
  for (const std::string& name : registry_names()) out.push_back(find_function<Real>(name, d, kink));
  return out;
}

/// |I(f) - Q(f)|, evaluated in Real and reported as a double.
template <class Real>
double measure_error(const CubatureRule<Real>& rule, const TestFunction<Real>& f) {
  if (rule.dim() != f.dim) throw DimensionMismatch("measure_error: dimension mismatch");
  using std::abs;
  const Real q = rule.apply(f.eval);
  return to_double(abs(f.exact_integral - q));
}

template <class Real>
double measure_error(const TransformedRule<Real>& rule, const TestFunction<Real>& f) {
  return measure_error(rule.rule, f);
}

struct ConvergenceConfig {
  int dim = 1;
  std::string rule = "frolov";     // frolov | fibonacci | gauss
  std::string modifier = "none";   // none | cov | periodize
  int kernel_k = 5;
  double delta = 0.25;
  std::string fn = "exp";
  double kink = 0.5;
  double a_min = 10.0;
  double a_max = 1000.0;
  int steps = 12;
  std::string out;                 // empty: stdout
  std::string format = "csv";      // csv | json
  std::string precision = "double";  // double | quad
  int fit_decades = 1;             // 0: fit the whole sweep
  int threads = 0;                 // 0: hardware concurrency; never changes results

  void validate() const {
    detail::require(dim >= 1 && dim <= 3, "config: dim must be in [1, 3]");
    detail::require(rule == "frolov" || rule == "fibonacci" || rule == "gauss",
                    "config: rule must be frolov, fibonacci or gauss");
    detail::require(modifier == "none" || modifier == "cov" || modifier == "periodize",
                    "config: modifier must be none, cov or periodize");
    detail::require(rule != "fibonacci" || dim == 2, "config: the Fibonacci rule needs dim = 2");
    detail::require(kernel_k >= 1 && kernel_k <= kMaxKernelK, "config: kernel-k out of range");
    detail::require(delta > 0.0 && delta < 0.5, "config: delta must be in (0, 1/2)");
    detail::require(a_min > 1.0 && a_max >= a_min, "config: need 1 < a-min <= a-max");
    detail::require(steps >= 1, "config: steps must be positive");
    detail::require(format == "csv" || format == "json", "config: format must be csv or json");
    detail::require(precision == "double" || precision == "quad",
                    "config: precision must be double or quad");
    detail::require(fit_decades >= 0, "config: fit-decades must be nonnegative");
    detail::require(threads >= 0, "config: threads must be nonnegative");
  }
};

/// Config echo. `out` and `threads` are left out: neither changes the rows,
/// and reports of one experiment must not differ by destination.
inline nlohmann::json to_json(const ConvergenceConfig& c) {
  return {{"dim", c.dim},           {"rule", c.rule},     {"modifier", c.modifier},
          {"kernel-k", c.kernel_k}, {"delta", c.delta},   {"fn", c.fn},
          {"kink", c.kink},         {"a-min", c.a_min},   {"a-max", c.a_max},
          {"steps", c.steps},       {"format", c.format}, {"precision", c.precision},
          {"fit-decades", c.fit_decades}};
}

/// Reads the keys present in `j` over `c`; unknown keys are rejected.
inline void merge_config(ConvergenceConfig& c, const nlohmann::json& j) {
  detail::require(j.is_object(), "config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "dim") c.dim = value.get<int>();
    else if (key == "rule") c.rule = value.get<std::string>();
    else if (key == "modifier") c.modifier = value.get<std::string>();
    else if (key == "kernel-k") c.kernel_k = value.get<int>();
    else if (key == "delta") c.delta = value.get<double>();
    else if (key == "fn") c.fn = value.get<std::string>();
    else if (key == "kink") c.kink = value.get<double>();
    else if (key == "a-min") c.a_min = value.get<double>();
    else if (key == "a-max") c.a_max = value.get<double>();
    else if (key == "steps") c.steps = value.get<int>();
    else if (key == "out") c.out = value.get<std::string>();
    else if (key == "format") c.format = value.get<std::string>();
    else if (key == "precision") c.precision = value.get<std::string>();
    else if (key == "fit-decades") c.fit_decades = value.get<int>();
    else if (key == "threads") c.threads = value.get<int>();
    else throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

inline ConvergenceConfig config_from_json(const nlohmann::json& j) {
  ConvergenceConfig c;
  merge_config(c, j);
  return c;
}

struct ConvergenceRow {
  long long n = 0;
  double error = 0.0;
  double a = 0.0;

  bool operator==(const ConvergenceRow&) const = default;
};

struct ConvergenceReport {
  std::string rule_family;
  std::string modifier;
  std::vector<ConvergenceRow> rows;
  std::optional<double> fitted_order;
  std::optional<double> fit_residual;  // RMS residual of the log10-log10 fit
  int fit_rows = 0;
  std::string fit_note;
  double exact_integral = 0.0;
  ConvergenceConfig config;
};

struct PowerFit {
  std::optional<double> order;
  std::optional<double> residual;
  int rows = 0;
  std::string note;
};

/// Least-squares slope of log10(error) against log10(n).
///
/// Rows whose error is zero or at the rounding floor (<= floor) carry no rate
/// information and are skipped. With `decades` > 0 only rows with
/// n >= n_max / 10^decades enter. A fit needs at least 4 rows spanning a
/// factor >= 8 in n.
inline PowerFit fit_power_law(const std::vector<ConvergenceRow>& rows, int decades,
                              double floor) {
  PowerFit fit;
  std::vector<const ConvergenceRow*> usable;
  for (const auto& r : rows) {
    if (r.error > floor && r.n > 0) usable.push_back(&r);
  }
  if (usable.empty()) {
    fit.note = "no rows above the rounding floor";
    return fit;
  }
  long long n_max = 0;
  for (const auto* r : usable) n_max = std::max(n_max, r->n);
  const double n_lo = decades > 0 ? static_cast<double>(n_max) / std::pow(10.0, decades) : 0.0;
  std::vector<double> xs, ys;
  long long n_min = n_max;
  for (const auto* r : usable) {
    if (static_cast<double>(r->n) + 1e-9 < n_lo) continue;
    xs.push_back(std::log10(static_cast<double>(r->n)));
    ys.push_back(std::log10(r->error));
    n_min = std::min(n_min, r->n);
  }
  fit.rows = static_cast<int>(xs.size());
  if (xs.size() < 4 || static_cast<double>(n_max) < 8.0 * static_cast<double>(n_min)) {
    fit.note = "sweep too short for a fit: need >= 4 rows spanning a factor >= 8 in n";
    return fit;
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    ss += e * e;
  }
  fit.order = slope;
  fit.residual = std::sqrt(ss / k);
  return fit;
}

/// a_j = a_min (a_max / a_min)^(j / (steps - 1)).
inline std::vector<double> sweep_scales(const ConvergenceConfig& c) {
  std::vector<double> a;
  if (c.steps == 1) return {c.a_min};
  for (int j = 0; j < c.steps; ++j) {
    a.push_back(c.a_min * std::pow(c.a_max / c.a_min, static_cast<double>(j) / (c.steps - 1)));
  }
  return a;
}

namespace detail {

/// Largest Fibonacci index whose number does not exceed a^2.
inline int fibonacci_index_for(double a) {
  int idx = 3;
  while (idx < 40 && static_cast<double>(fibonacci_number(idx + 1)) <= a * a &&
         fibonacci_number(idx + 1) <= kMaxFibonacciNodes) {
    ++idx;
  }
  return idx;
}

template <class Real>
CubatureRule<Real> base_rule(const ConvergenceConfig& c, const LatticeGenerator<Real>* gen,
                             double a) {
  const bool periodize = c.modifier == "periodize";
  const Box box = periodize ? Box::cube(c.dim, -c.delta, 1.0 + c.delta) : Box::unit(c.dim);
  if (c.rule == "frolov") return frolov_rule(*gen, a, box);
  CubatureRule<Real> unit = c.rule == "fibonacci"
                                ? fibonacci_rule<Real>(fibonacci_index_for(a))
                                : tensor_gauss_rule<Real>(
                                      c.dim, std::clamp(static_cast<int>(std::lround(a)), 1, 64));
  return periodize ? map_to_box(unit, box) : unit;
}

template <class Real>
ConvergenceRow sweep_point(const ConvergenceConfig& c, const LatticeGenerator<Real>* gen,
                           const TestFunction<Real>& f, double a) {
  const CubatureRule<Real> base = base_rule<Real>(c, gen, a);
  ConvergenceRow row;
  row.a = a;
  if (c.modifier == "none") {
    row.n = static_cast<long long>(base.size());
    row.error = measure_error(base, f);
  } else if (c.modifier == "cov") {
    const TransformedRule<Real> t = transform_rule(base, KernelPsiK<Real>(c.kernel_k));
    row.n = static_cast<long long>(t.size());
    row.error = measure_error(t, f);
  } else {
    const TransformedRule<Real> t =
        periodize_rule(base, PeriodizerKernel<Real>(c.kernel_k, c.delta, c.dim));
    row.n = static_cast<long long>(t.size());
    row.error = measure_error(t, f);
  }
  return row;
}

template <class Real>
ConvergenceReport run_sweep(const ConvergenceConfig& c) {
  const TestFunction<Real> f = find_function<Real>(c.fn, c.dim, c.kink);
  std::optional<LatticeGenerator<Real>> gen;
  if (c.rule == "frolov") gen = build_frolov_generator<Real>(c.dim);

  const std::vector<double> scales = sweep_scales(c);
  std::vector<std::optional<ConvergenceRow>> results(scales.size());
  std::vector<std::string> failures(scales.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scales.size(); i = next++) {
      try {
        results[i] = sweep_point<Real>(c, gen ? &*gen : nullptr, f, scales[i]);
      } catch (const EmptyRule&) {
        // a too small for any node to land in the box: no row
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  unsigned nthreads = c.threads > 0 ? static_cast<unsigned>(c.threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(scales.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& msg : failures) {
    if (!msg.empty()) throw Error("convergence_sweep: " + msg);
  }

  ConvergenceReport report;
  report.rule_family = c.rule;
  report.modifier = c.modifier;
  report.config = c;
  report.exact_integral = to_double(f.exact_integral);
  for (const auto& r : results) {
    if (r) report.rows.push_back(*r);
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ConvergenceRow& x, const ConvergenceRow& y) { return x.n < y.n; });
  report.rows.erase(std::unique(report.rows.begin(), report.rows.end(),
                                [](const ConvergenceRow& x, const ConvergenceRow& y) {
                                  return x.n == y.n;
                                }),
                    report.rows.end());

  const double floor =
      32.0 * to_double(epsilon<Real>()) * std::max(1.0, std::abs(report.exact_integral));
  const PowerFit fit = fit_power_law(report.rows, c.fit_decades, floor);
  report.fitted_order = fit.order;
  report.fit_residual = fit.residual;
  report.fit_rows = fit.rows;
  report.fit_note = fit.note;
  return report;
}

}  // namespace detail

/// Sweeps the lattice scale geometrically and fits the convergence order.
/// Rows are a pure function of the config; threads only split the work.
inline ConvergenceReport convergence_sweep(const ConvergenceConfig& config) {
  config.validate();
  if (config.precision == "quad") return detail::run_sweep<quad>(config);
  return detail::run_sweep<double>(config);
}

namespace detail {

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("none");
}

inline std::string format_log10(double x) {
  if (x == 0.0) return "-inf";
  return format_real(std::log10(x));
}

}  // namespace detail

inline nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"error", row.error}, {"a", row.a}});
  nlohmann::json j = {{"rule_family", r.rule_family},
                      {"modifier", r.modifier},
                      {"rows", rows},
                      {"fitted_order", nullptr},
                      {"fit_residual", nullptr},
                      {"fit_rows", r.fit_rows},
                      {"fit_note", r.fit_note},
                      {"exact_integral", r.exact_integral},
                      {"config", to_json(r.config)}};
  if (r.fitted_order) j["fitted_order"] = *r.fitted_order;
  if (r.fit_residual) j["fit_residual"] = *r.fit_residual;
  return j;
}

inline ConvergenceReport parse_report(const nlohmann::json& j) {
  ConvergenceReport r;
  r.rule_family = j.at("rule_family").get<std::string>();
  r.modifier = j.at("modifier").get<std::string>();
  for (const auto& row : j.at("rows")) {
    r.rows.push_back({row.at("n").get<long long>(), row.at("error").get<double>(),
                      row.at("a").get<double>()});
  }
  if (!j.at("fitted_order").is_null()) r.fitted_order = j.at("fitted_order").get<double>();
  if (!j.at("fit_residual").is_null()) r.fit_residual = j.at("fit_residual").get<double>();
  r.fit_rows = j.at("fit_rows").get<int>();
  r.fit_note = j.at("fit_note").get<std::string>();
  r.exact_integral = j.at("exact_integral").get<double>();
  r.config = config_from_json(j.at("config"));
  return r;
}

inline ConvergenceReport parse_report(const std::string& text) {
  return parse_report(nlohmann::json::parse(text));
}

/// CSV: `n,error,log10_n,log10_error`, one row per sweep point, then a
/// `# fitted_order=...` and a `# config=...` line. An empty sweep gives the
/// header alone.
inline std::string emit_report(const ConvergenceReport& r, const std::string& format) {
  if (format == "json") return to_json(r).dump(2) + "\n";
  detail::require(format == "csv", "emit_report: format must be csv or json");
  std::ostringstream out;
  out << "n,error,log10_n,log10_error\n";
  if (r.rows.empty()) return out.str();
  for (const auto& row : r.rows) {
    out << row.n << ',' << detail::format_real(row.error) << ','
        << detail::format_real(std::log10(static_cast<double>(row.n))) << ','
        << detail::format_log10(row.error) << '\n';
  }
  out << "# fitted_order=" << detail::format_optional(r.fitted_order)
      << ",fit_residual=" << detail::format_optional(r.fit_residual) << ",fit_rows=" << r.fit_rows;
  if (!r.fit_note.empty()) out << ",note=" << r.fit_note;
  out << '\n';
  out << "# config=" << to_json(r.config).dump() << '\n';
  return out.str();
}

}  // namespace frolov
