#include "nlslab/smooth_cutoff.hpp"

#include <cmath>

namespace nlslab {
namespace {

double edge(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double mollifier_ramp(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = edge(x);
  return a / (a + edge(1.0 - x));
}

double dyadic_bump(double y) { return mollifier_ramp((y - 0.5) / 0.5) * mollifier_ramp((4.0 - y) / 2.0); }

double zero_bump(double r) { return mollifier_ramp(2.0 - std::abs(r)); }

double smooth_block_weight(DyadicIndex n, double abs_xi) {
  if (n.is_zero()) return zero_bump(abs_xi);
  // the block P_N covers N-1 <= |xi| < 2N-1, so the plateau [1, 2] is placed over it
  return dyadic_bump((abs_xi + 1.0) / static_cast<double>(n.value()));
}

double time_cutoff(double t) { return mollifier_ramp((1.9 - std::abs(t)) / 0.9); }

}  // namespace nlslab
