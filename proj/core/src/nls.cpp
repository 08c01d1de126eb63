#include "nlslab/nls.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nlslab/quadrature.hpp"

namespace nlslab {

double Trajectory::dt() const {
  if (times.size() < 2) return 0.0;
  return times[1] - times[0];
}

SpectralField strang_step(const SpectralField& phi, double dt, double coupling) {
  SpectralField half = free_evolve(phi, 0.5 * dt);
  auto u = to_samples(half);
  for (auto& v : u) v *= std::polar(1.0, -coupling * std::norm(v) * dt);
  return free_evolve(from_samples(phi.geometry(), u), 0.5 * dt);
}

namespace {

int step_count(double T, double dt) {
  if (!(T > 0.0)) throw std::invalid_argument("solve_nls: T must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("solve_nls: dt must be positive");
  const double ratio = T / dt;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("solve_nls: dt must divide T");
  return static_cast<int>(n);
}

Trajectory integrate(const SpectralField& phi0, double T, double dt, double coupling, double direction) {
  const int n = step_count(T, dt);
  Trajectory traj{phi0.geometry(), {}, {}, coupling};
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(phi0);
  const double h = T / n;
  const double h1_start = sobolev_norm(phi0, 1.0);
  for (int i = 1; i <= n; ++i) {
    SpectralField next = strang_step(traj.states.back(), direction * h, coupling);
    const double h1 = sobolev_norm(next, 1.0);
    if (!std::isfinite(h1) || (h1_start > 0.0 && h1 > 1e6 * h1_start))
      throw std::runtime_error("solve_nls: blow-up guard tripped at t=" + std::to_string(direction * i * h) +
                               " (H^1 norm " + std::to_string(h1) + ", start " + std::to_string(h1_start) + ")");
    traj.times.push_back(i == n ? T : i * h);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace

Trajectory solve_nls(const SpectralField& phi0, double T, double dt, double coupling) {
  return integrate(phi0, T, dt, coupling, 1.0);
}

Trajectory solve_nls_backward(const SpectralField& phi0, double T, double dt, double coupling) {
  return integrate(phi0, T, dt, coupling, -1.0);
}

Trajectory sampled_trajectory(const TorusGeometry& g, double T, double dt, double coupling,
                              const std::function<SpectralField(double)>& exact) {
  const int n = step_count(T, dt);
  Trajectory traj{g, {}, {}, coupling};
  for (int i = 0; i <= n; ++i) {
    double t = i == n ? T : i * (T / n);
    traj.times.push_back(t);
    traj.states.push_back(exact(t));
  }
  return traj;
}

Trajectory plane_wave_trajectory(const TorusGeometry& g, std::span<const int> modes, cplx amplitude, double coupling,
                                 double T, double dt) {
  SpectralField base = plane_wave(g, modes, amplitude);
  const double lambda = g.lambda(g.flat_index(modes));
  const double omega = lambda + coupling * std::norm(amplitude);
  return sampled_trajectory(g, T, dt, coupling, [&](double t) { return std::polar(1.0, -omega * t) * base; });
}

double mass(const SpectralField& phi) {
  double n = l2_norm(phi);
  return n * n;
}

double max_relative_mass_drift(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  const double m0 = mass(traj.states.front());
  double worst = 0.0;
  for (const auto& s : traj.states) {
    double dm = std::abs(mass(s) - m0);
    worst = std::max(worst, m0 > 0.0 ? dm / m0 : dm);
  }
  return worst;
}

double default_residual_exponent(int d) { return -0.5 * d - 0.1; }

std::vector<double> duhamel_residual_profile(const Trajectory& traj, double beta) {
  if (traj.states.size() < 3) throw std::invalid_argument("duhamel_residual: need at least 3 time points");
  const double h = traj.dt();
  std::vector<SpectralField> integrand;
  integrand.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i)
    integrand.push_back(free_evolve(cubic_nonlinearity(traj.states[i]), -traj.times[i]));
  auto integrals = cumulative_integrals(integrand, h);
  const cplx ic(0.0, traj.coupling);
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (std::size_t m = 0; m < traj.states.size(); ++m) {
    SpectralField mild = free_evolve(traj.states[0] - ic * integrals[m], traj.times[m]);
    out.push_back(sobolev_norm(traj.states[m] - mild, beta));
  }
  return out;
}

double duhamel_residual(const Trajectory& traj, std::optional<double> beta) {
  auto prof = duhamel_residual_profile(traj, beta.value_or(default_residual_exponent(traj.geometry.dim())));
  return *std::max_element(prof.begin(), prof.end());
}

namespace {

double half_integral(const Trajectory& traj) {
  if (traj.states.size() < 2) return 0.0;
  const int m = static_cast<int>(traj.states.size()) - 1;
  auto w = cumulative_weights(m, std::abs(traj.dt()));
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    double l3 = lp_norm(traj.states[i], 3.0);
    acc += w[i] * l3 * l3 * l3;
  }
  return acc;
}

}  // namespace

double spacetime_l3_norm(const Trajectory& traj, const Trajectory* backward) {
  double total = half_integral(traj);
  total += backward ? half_integral(*backward) : total;
  return std::cbrt(total);
}

SpectralField smooth_random_field(const TorusGeometry& g, std::uint64_t seed, double width, double amplitude) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double re = gauss(rng);
    double im = gauss(rng);
    f[i] = cplx(re, im) * std::exp(-g.lambda(i) / (2.0 * width * width));
  }
  double n = l2_norm(f);
  if (n > 0.0) f *= amplitude / n;
  return f;
}

}  // namespace nlslab
