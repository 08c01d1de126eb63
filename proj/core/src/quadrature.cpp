#include "nlslab/quadrature.hpp"

namespace nlslab {

std::vector<double> cumulative_weights(int m, double h) {
  if (m < 0) throw std::invalid_argument("cumulative_weights: m must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0);
  if (m == 0) return w;
  if (m == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const int simpson_end = (m % 2 == 0) ? m : m - 3;
  for (int i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (m % 2 == 1) {
    const double c = 3.0 * h / 8.0;
    w[m - 3] += c;
    w[m - 2] += 3.0 * c;
    w[m - 1] += 3.0 * c;
    w[m] += c;
  }
  return w;
}

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double h = nodes[i + 1] - nodes[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace nlslab
