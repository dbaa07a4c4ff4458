// frolov: convergence benchmarks, acceptance checks and kernel diagnostics.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "frolov/frolov.hpp"

namespace {

int run_bench(const std::string& config_path, CLI::App& cmd, frolov::ConvergenceConfig flags) {
  frolov::ConvergenceConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw frolov::InvalidArgument("cannot open config file " + config_path);
    frolov::merge_config(config, nlohmann::json::parse(in));
  }
  // Flags given on the command line override the file.
  auto given = [&cmd](const char* name) { return cmd.get_option(name)->count() > 0; };
  if (given("--dim")) config.dim = flags.dim;
  if (given("--rule")) config.rule = flags.rule;
  if (given("--modifier")) config.modifier = flags.modifier;
  if (given("--kernel-k")) config.kernel_k = flags.kernel_k;
  if (given("--delta")) config.delta = flags.delta;
  if (given("--fn")) config.fn = flags.fn;
  if (given("--kink")) config.kink = flags.kink;
  if (given("--a-min")) config.a_min = flags.a_min;
  if (given("--a-max")) config.a_max = flags.a_max;
  if (given("--steps")) config.steps = flags.steps;
  if (given("--out")) config.out = flags.out;
  if (given("--format")) config.format = flags.format;
  if (given("--precision")) config.precision = flags.precision;
  if (given("--fit-decades")) config.fit_decades = flags.fit_decades;
  if (given("--threads")) config.threads = flags.threads;

  const frolov::ConvergenceReport report = frolov::convergence_sweep(config);
  const std::string doc = frolov::emit_report(report, config.format);
  if (config.out.empty()) {
    std::cout << doc;
  } else {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) throw frolov::InvalidArgument("cannot write " + config.out);
    out << doc;
  }
  return 0;
}

int run_verify(int only) {
  const int count = static_cast<int>(frolov::verify::all_checks().size());
  int failed = 0, ran = 0;
  for (int id = 1; id <= count; ++id) {
    if (only != 0 && id != only) continue;
    const auto result = frolov::verify::run_check(id);
    std::cout << frolov::verify::format_line(result) << std::endl;
    ++ran;
    if (!result.passed) ++failed;
  }
  if (ran == 0) throw frolov::InvalidArgument("verify: no check with id " + std::to_string(only));
  std::cout << (ran - failed) << "/" << ran << " checks passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

int run_kernels(int k, int levels) {
  const frolov::KernelPsiK<double> kernel(k);
  nlohmann::json doc;
  doc["kernel"] = frolov::to_json(kernel);
  const double inf = std::numeric_limits<double>::infinity();
  nlohmann::json quotients = nlohmann::json::array();
  for (int n = 0; n <= std::min(3, 2 * k); ++n) {
    for (double p : {1.1, 1.5, 2.0, 4.0, inf}) {
      const auto est = frolov::quotient_sup(kernel, n, p, levels);
      const double threshold = std::isinf(p) ? n + 1.0 : n * p / (p - 1.0) + 1.0;
      quotients.push_back({{"n", n},
                           {"p", std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p)},
                           {"sup_estimate", est.sup_estimate},
                           {"diverging", est.diverging},
                           {"hypothesis_holds", k > threshold}});
    }
  }
  doc["quotient_sup"] = quotients;
  nlohmann::json products = nlohmann::json::array();
  for (int r = 0; r <= std::min(3, 2 * k); ++r) {
    for (int alpha = 0; alpha <= r && r + alpha <= 2 * k; ++alpha) {
      const auto est = frolov::product_quotient_sup(kernel, r, alpha, levels);
      products.push_back({{"r", r},
                          {"alpha", alpha},
                          {"sup_estimate", est.sup_estimate},
                          {"diverging", est.diverging},
                          {"hypothesis_holds", k > r + alpha + 1}});
    }
  }
  doc["product_quotient_sup"] = products;
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_rule(int dim, const std::string& family, double a, const std::string& format) {
  frolov::CubatureRule<double> rule;
  nlohmann::json meta;
  if (family == "frolov") {
    const auto gen = frolov::build_frolov_generator<double>(dim);
    rule = frolov::frolov_rule(gen, a, frolov::Box::unit(dim));
    meta["generator"] = frolov::to_json(gen);
  } else if (family == "fibonacci") {
    rule = frolov::fibonacci_rule<double>(frolov::detail::fibonacci_index_for(a));
  } else if (family == "gauss") {
    rule = frolov::tensor_gauss_rule<double>(dim, static_cast<int>(std::lround(a)));
  } else {
    throw frolov::InvalidArgument("rule: family must be frolov, fibonacci or gauss");
  }
  if (format == "csv") {
    std::cout << frolov::to_csv(rule);
    return 0;
  }
  meta["label"] = rule.label();
  meta["size"] = rule.size();
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto x = rule.node(i);
    nodes.push_back({{"x", std::vector<double>(x.begin(), x.end())}, {"weight", rule.weight(i)}});
  }
  meta["nodes"] = nodes;
  std::cout << meta.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frolov cubature with change-of-variable and periodization modifiers"};
  app.require_subcommand(1);

  frolov::ConvergenceConfig flags;
  std::string config_path;
  auto* bench = app.add_subcommand("bench", "Convergence sweep of one rule on one test function");
  bench->add_option("--config", config_path, "JSON config with the same keys as the flags");
  bench->add_option("--dim", flags.dim, "Dimension (1-3)");
  bench->add_option("--rule", flags.rule, "frolov | fibonacci | gauss");
  bench->add_option("--modifier", flags.modifier, "none | cov | periodize");
  bench->add_option("--kernel-k", flags.kernel_k, "Kernel order k");
  bench->add_option("--delta", flags.delta, "Periodizer overlap in (0, 1/2)");
  bench->add_option("--fn", flags.fn, "Test function: poly kink periodic bspline exp kink_bump");
  bench->add_option("--kink", flags.kink, "Kink location of the kink functions");
  bench->add_option("--a-min", flags.a_min, "Smallest lattice scale");
  bench->add_option("--a-max", flags.a_max, "Largest lattice scale");
  bench->add_option("--steps", flags.steps, "Number of geometric sweep points");
  bench->add_option("--out", flags.out, "Output file (default stdout)");
  bench->add_option("--format", flags.format, "csv | json");
  bench->add_option("--precision", flags.precision, "double | quad");
  bench->add_option("--fit-decades", flags.fit_decades, "Fit window in decades of n; 0 = all");
  bench->add_option("--threads", flags.threads, "Worker threads; results do not depend on it");

  int only = 0;
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks; nonzero exit on failure");
  verify->add_option("--only", only, "Run a single check by number");

  int inspect_k = 0, levels = 14;
  auto* kernels = app.add_subcommand("kernels", "Kernel coefficients and quotient diagnostics");
  kernels->add_option("--inspect", inspect_k, "Kernel order k")->required();
  kernels->add_option("--levels", levels, "Dyadic grid levels (3-14)");

  int rule_dim = 2;
  double rule_a = 10.0;
  std::string rule_family = "frolov", rule_format = "csv";
  auto* rule = app.add_subcommand("rule", "Export the nodes and weights of a base rule");
  rule->add_option("--dim", rule_dim, "Dimension");
  rule->add_option("--rule", rule_family, "frolov | fibonacci | gauss");
  rule->add_option("--a", rule_a, "Scale (Frolov), sqrt of node budget (Fibonacci), points/axis (Gauss)");
  rule->add_option("--format", rule_format, "csv | json");

  CLI11_PARSE(app, argc, argv);
  try {
    if (bench->parsed()) return run_bench(config_path, *bench, flags);
    if (verify->parsed()) return run_verify(only);
    if (kernels->parsed()) return run_kernels(inspect_k, levels);
    if (rule->parsed()) return run_rule(rule_dim, rule_family, rule_a, rule_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
