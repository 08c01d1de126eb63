#pragma once

#include <span>
#include <vector>

#include "nlslab/nls.hpp"
#include "nlslab/report.hpp"
#include "nlslab/torus.hpp"

namespace nlslab {

// Coefficients c_xi(t_i) of u(t, x) = sum_xi c_xi(t) e^{i xi x} on the unit circle, sampled at
// t_i = -window + i dt, dt = 2 window / time_samples. The dual grid is tau_m = m pi / window with m in
// FFT order, and u^(tau, xi) = (2 pi)^{-1/2} dt sum_i e^{-i tau t_i} c_xi(t_i).
class SpaceTimeField {
 public:
  SpaceTimeField(int space_modes, double window, int time_samples);

  int space_modes() const { return space_modes_; }
  int time_samples() const { return time_samples_; }
  double window() const { return window_; }
  double dt() const { return 2.0 * window_ / time_samples_; }
  double dtau() const;
  double time(int i) const { return -window_ + i * dt(); }
  double tau(int m) const;
  int xi(int j) const;

  const TorusGeometry& geometry() const { return geometry_; }

  // row i holds the spatial coefficients at t_i in FFT order
  std::span<cplx> slice(int i);
  std::span<const cplx> slice(int i) const;
  std::span<const cplx> values() const { return data_; }

  void set_slice(int i, const SpectralField& f);

  // u^(tau_m, xi_j), same layout as the time samples
  std::vector<cplx> dual() const;
  static SpaceTimeField from_dual(int space_modes, double window, int time_samples, std::span<const cplx> dual);

 private:
  int space_modes_;
  double window_;
  int time_samples_;
  TorusGeometry geometry_;
  std::vector<cplx> data_;
};

// l^{r'} norm of the coefficients, 1 < r <= 2
double fl_norm(const SpectralField& phi, double r);

// (sum_xi <xi>^{s r'} sum_m <tau_m + xi^2>^{b r'} |u^|^{r'} dtau)^{1/r'}
double xsb_norm(const SpaceTimeField& u, double s, double b, double r);

// psi(t) = exp(i c t m) phi(t) with m = (1/pi) int |phi(0)|^2
Trajectory gauge_transform(const Trajectory& traj);
double gauge_constant(const SpectralField& phi);

// (|psi|^2 - (1/pi) int |psi|^2) psi
SpectralField renormalized_nonlinearity(const SpectralField& psi);

// L2 defect of psi(t) - e^{it Laplacian} psi_0 + i c int_0^t e^{i(t-s) Laplacian} (renormalized nonlinearity) ds
std::vector<double> renormalized_residual_profile(const Trajectory& traj);
double renormalized_duhamel_residual(const Trajectory& traj);

// ||f^||_{L^{r'}} / ||f||_{L^r} for time samples of step dt with the unitary transform
// f^(tau_m) = (2 pi)^{-1/2} dt sum_i e^{-i tau_m t_i} f_i, dtau = 2 pi / (n dt); at most (2 pi)^{1/r' - 1/2}
double hausdorff_young_check(std::span<const cplx> samples, double dt, double r);

struct SpaceTimeGrid {
  int space_modes = 16;
  double window = 4.0;
  int time_samples = 1024;
};

struct LinearHomogeneousConfig {
  double r = 2.0;
  double b = 0.25;
  std::vector<double> t_list{1.0, 0.5, 0.25, 0.125};
  // single-mode datum e^{i xi0 x}
  int xi0 = 1;
  double amplitude = 1.0;
  SpaceTimeGrid grid;
  double slack = 0.1;
  int threads = 0;
};
ExperimentReport bench_linear_homogeneous(const LinearHomogeneousConfig& cfg);

struct LinearInhomogeneousConfig {
  double r = 2.0;
  double b = 0.6;
  double beta = 0.0;
  std::vector<double> t_list{1.0, 0.5, 0.25, 0.125};
  // forcing f(t, x) = amplitude time_cutoff(2 t / T) e^{i(xi0 x - xi0^2 t)}
  int xi0 = 1;
  double amplitude = 1.0;
  SpaceTimeGrid grid;
  double slack = 0.15;
  int threads = 0;
};
ExperimentReport bench_linear_inhomogeneous(const LinearInhomogeneousConfig& cfg);

}  // namespace nlslab
