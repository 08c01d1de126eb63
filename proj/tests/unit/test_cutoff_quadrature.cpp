#include <gtest/gtest.h>

#include <cmath>

#include "nlslab/quadrature.hpp"
#include "nlslab/smooth_cutoff.hpp"

using namespace nlslab;

TEST(Cutoff, TimeCutoffIdentity) {
  for (int i = 0; i <= 2000; ++i) {
    const double t = -1.0 + i * 1e-3;
    EXPECT_NEAR(time_cutoff(t), 1.0, 1e-12);
  }
  for (double t : {1.9, 2.0, -1.95, 5.0}) EXPECT_EQ(time_cutoff(t), 0.0);
  for (double t : {1.2, 1.5, 1.8}) {
    EXPECT_GT(time_cutoff(t), 0.0);
    EXPECT_LT(time_cutoff(t), 1.0);
    EXPECT_EQ(time_cutoff(t), time_cutoff(-t));
  }
  EXPECT_GT(time_cutoff(1.3), time_cutoff(1.6));
}

TEST(Cutoff, RampIsSmoothStep) {
  for (double x : {0.1, 0.3, 0.7}) EXPECT_NEAR(mollifier_ramp(x) + mollifier_ramp(1.0 - x), 1.0, 1e-15);
  EXPECT_EQ(zero_bump(0.0), 1.0);
  EXPECT_EQ(zero_bump(0.99), 1.0);
  EXPECT_EQ(zero_bump(2.0), 0.0);
}

TEST(Quadrature, CumulativeRulesAreExactForCubics) {
  auto poly = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t + 3.0 * t * t * t; };
  auto prim = [](double t) { return t - t * t + t * t * t / 6.0 + 0.75 * t * t * t * t; };
  const double h = 0.1;
  for (int m = 2; m <= 9; ++m) {
    auto w = cumulative_weights(m, h);
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) acc += w[i] * poly(i * h);
    EXPECT_NEAR(acc, prim(m * h), 1e-13) << "m=" << m;
  }
  std::vector<double> g;
  for (int i = 0; i <= 9; ++i) g.push_back(poly(i * h));
  auto I = cumulative_integrals(g, h);
  for (int m = 2; m <= 9; ++m) EXPECT_NEAR(I[m], prim(m * h), 1e-13);
  // trapezoid on the first panel
  EXPECT_NEAR(I[1], 0.5 * h * (g[0] + g[1]), 1e-15);
  EXPECT_THROW(cumulative_weights(-1, h), std::invalid_argument);
}

TEST(Quadrature, TrapezoidWeights) {
  std::vector<double> nodes{0.0, 0.1, 0.3, 0.7, 1.0};
  auto w = trapezoid_weights(nodes);
  double sum = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum += w[i];
    lin += w[i] * nodes[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(lin, 0.5, 1e-15);
}
