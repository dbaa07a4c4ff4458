// Prints the Frolov generator for a dimension, its admissibility over a small
// radius, and the node count of the rule on [0,1]^d for a few scales.
//
//   demo_lattice_inspect [d]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "frolov/lattice.hpp"

int main(int argc, char** argv) {
  const int d = argc > 1 ? std::atoi(argv[1]) : 2;
  const auto gen = frolov::build_frolov_generator<double>(d);
  std::printf("%s\n", frolov::to_json(gen).dump(2).c_str());
  std::printf("min |prod (Vm)_i| over |m|_inf <= 10: %.12f\n",
              frolov::admissibility_check(gen, 10));
  for (double a : {4.0, 8.0, 16.0, 32.0}) {
    const auto rule = frolov::frolov_rule(gen, a, frolov::Box::unit(d));
    // Expected count is roughly a^d / det.
    std::printf("a=%-5g nodes=%-8zu a^d/det=%.1f\n", a, rule.size(),
                std::pow(a, d) / gen.det_abs);
  }
}
