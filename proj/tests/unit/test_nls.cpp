#include <gtest/gtest.h>

#include <cmath>

#include "nlslab/nls.hpp"

using namespace nlslab;

TEST(Solver, PlaneWaveIsExact) {
  auto g = TorusGeometry::unit(2, 16);
  const int modes[] = {2, -1};
  const cplx a(0.7, 0.2);
  auto traj = solve_nls(plane_wave(g, modes, a), 0.5, 0.01, 1.0);
  auto exact = plane_wave_trajectory(g, modes, a, 1.0, 0.5, 0.01);
  ASSERT_EQ(traj.states.size(), exact.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) EXPECT_LT(max_abs_diff(traj.states[i], exact.states[i]), 1e-12);
  EXPECT_LT(duhamel_residual(exact), 1e-6);
}

TEST(Solver, MassAndSecondOrderResidual) {
  auto g = TorusGeometry::unit(2, 32);
  auto phi0 = smooth_random_field(g, 4);
  std::vector<double> res;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    auto traj = solve_nls(phi0, 0.2, dt, 1.0);
    EXPECT_LT(max_relative_mass_drift(traj), 1e-11);
    res.push_back(duhamel_residual(traj));
  }
  for (int i = 0; i < 2; ++i) {
    const double ratio = res[i] / res[i + 1];
    EXPECT_GT(ratio, 3.2);
    EXPECT_LT(ratio, 4.8);
  }
}

TEST(Solver, BackwardAndSpacetimeNorm) {
  auto g = TorusGeometry::unit(1, 32);
  auto phi0 = smooth_random_field(g, 8);
  auto fwd = solve_nls(phi0, 0.2, 0.01, 1.0);
  auto bwd = solve_nls_backward(phi0, 0.2, 0.01, 1.0);
  auto undo = solve_nls_backward(fwd.states.back(), 0.2, 0.01, 1.0);
  EXPECT_LT(max_abs_diff(undo.states.back(), phi0), 1e-12);
  EXPECT_NEAR(bwd.times.back(), 0.2, 1e-15);
  const int zero[] = {0};
  auto c = solve_nls(plane_wave(g, zero, 1.0), 0.2, 0.01, 1.0);
  // |phi| = 1 so int_{-T}^{T} ||phi||_3^3 = 2 T vol
  EXPECT_NEAR(spacetime_l3_norm(c), std::cbrt(0.4 * 2 * M_PI), 1e-12);
  EXPECT_GT(spacetime_l3_norm(fwd, &bwd), 0.0);
}

TEST(Solver, Preconditions) {
  auto g = TorusGeometry::unit(1, 16);
  auto phi0 = smooth_random_field(g, 1);
  EXPECT_THROW(solve_nls(phi0, 0.1, 0.03, 1.0), std::invalid_argument);
  EXPECT_THROW(solve_nls(phi0, 0.1, -0.01, 1.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(default_residual_exponent(2), -1.1);
  EXPECT_NEAR(l2_norm(smooth_random_field(g, 1, 1.5, 2.0)), 2.0, 1e-13);
}
