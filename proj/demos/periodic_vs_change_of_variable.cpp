// Raw Frolov against the two modifiers in d=2. Change of variable targets
// integrands that do not vanish on the boundary (exp); periodization targets
// periodic ones. Raw Frolov stalls near order -1 on both.

#include <cstdio>
#include <string>

#include "frolov/harness.hpp"

namespace {

void run(const std::string& fn, const std::string& modifier, int k) {
  frolov::ConvergenceConfig c;
  c.dim = 2;
  c.fn = fn;
  c.modifier = modifier;
  if (k > 0) c.kernel_k = k;
  c.a_min = 8.0;
  c.a_max = 200.0;
  c.steps = 8;
  c.fit_decades = 0;
  c.precision = "quad";
  const auto report = frolov::convergence_sweep(c);
  std::printf("fn=%s modifier=%s\n", fn.c_str(), modifier.c_str());
  for (const auto& row : report.rows) std::printf("  n=%-7lld error=%.3e\n", row.n, row.error);
  if (report.fitted_order) std::printf("  fitted order %.2f\n", *report.fitted_order);
}

}  // namespace

int main() {
  run("exp", "none", 0);
  run("exp", "cov", 5);
  run("periodic", "none", 0);
  run("periodic", "periodize", 3);
}
