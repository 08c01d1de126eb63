#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nlslab/torus.hpp"

namespace nlslab {

// Uniform-step solution of i d_t phi + Laplacian phi = coupling |phi|^2 phi.
struct Trajectory {
  TorusGeometry geometry;
  std::vector<double> times;
  std::vector<SpectralField> states;
  double coupling = 1.0;

  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
  double dt() const;
};

SpectralField strang_step(const SpectralField& phi, double dt, double coupling);

// steps of dt > 0 from 0 to T; throws std::runtime_error when the H^1 norm exceeds 1e6 times its start
Trajectory solve_nls(const SpectralField& phi0, double T, double dt, double coupling);
// states phi(-t_i) at times t_i >= 0, obtained by stepping with -dt
Trajectory solve_nls_backward(const SpectralField& phi0, double T, double dt, double coupling);

// exact plane wave a e^{i xi.x} e^{-i(|xi|^2 + coupling |a|^2) t}
Trajectory plane_wave_trajectory(const TorusGeometry& g, std::span<const int> modes, cplx amplitude, double coupling,
                                 double T, double dt);
Trajectory sampled_trajectory(const TorusGeometry& g, double T, double dt, double coupling,
                              const std::function<SpectralField(double)>& exact);

double mass(const SpectralField& phi);
double max_relative_mass_drift(const Trajectory& traj);

double default_residual_exponent(int d);

// H^beta norm at every stored time of phi(t) - e^{itL}phi_0 + i c int_0^t e^{i(t-s)L}|phi|^2 phi ds
std::vector<double> duhamel_residual_profile(const Trajectory& traj, double beta);
double duhamel_residual(const Trajectory& traj, std::optional<double> beta = std::nullopt);

// (int_{-T}^{T} ||phi(t)||_{L^3}^3 dt)^{1/3}; the negative half comes from `backward` when given,
// otherwise the forward half is mirrored
double spacetime_l3_norm(const Trajectory& traj, const Trajectory* backward = nullptr);

// smooth test datum with Gaussian-decaying random coefficients, L2-normalized to `amplitude`
SpectralField smooth_random_field(const TorusGeometry& g, std::uint64_t seed, double width = 1.5,
                                  double amplitude = 1.0);

}  // namespace nlslab
