#pragma once

#include <stdexcept>
#include <vector>

namespace nlslab {

// weights w_0..w_m for int_{t_0}^{t_m} on a uniform grid of step h:
// composite Simpson for even m, Simpson plus a closing 3/8 panel for odd m >= 3, trapezoid for m = 1
std::vector<double> cumulative_weights(int m, double h);

// I_m = int_{t_0}^{t_m} g for every m, with the rule of cumulative_weights
template <class V>
std::vector<V> cumulative_integrals(const std::vector<V>& g, double h) {
  if (g.empty()) throw std::invalid_argument("cumulative_integrals: no samples");
  std::vector<V> out;
  out.reserve(g.size());
  V zero = 0.0 * g[0];
  out.push_back(zero);
  for (std::size_t m = 1; m < g.size(); ++m) {
    if (m == 1) {
      out.push_back((0.5 * h) * (g[0] + g[1]));
    } else if (m % 2 == 0) {
      out.push_back(out[m - 2] + (h / 3.0) * (g[m - 2] + 4.0 * g[m - 1] + g[m]));
    } else {
      out.push_back(out[m - 3] + (3.0 * h / 8.0) * (g[m - 3] + 3.0 * g[m - 2] + 3.0 * g[m - 1] + g[m]));
    }
  }
  return out;
}

// trapezoid weights for an arbitrary increasing node list
std::vector<double> trapezoid_weights(const std::vector<double>& nodes);

}  // namespace nlslab
