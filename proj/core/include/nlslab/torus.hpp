#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

// Rectangular torus prod_j R/(2 pi / theta_j)Z sampled on an M_1 x ... x M_d grid.
// Modes n_j run over [-M_j/2, M_j/2) and are stored in FFT order (0, 1, ..., -1),
// row-major with the last axis fastest.
class TorusGeometry {
 public:
  TorusGeometry(std::vector<double> thetas, std::vector<int> grid);

  static TorusGeometry unit(int d, int m);

  int dim() const { return static_cast<int>(data_->thetas.size()); }
  const std::vector<double>& thetas() const { return data_->thetas; }
  const std::vector<int>& grid() const { return data_->grid; }
  std::size_t size() const { return data_->lambda.size(); }

  double side(int axis) const;
  double volume() const { return data_->volume; }

  // mode number along one axis for a storage index along that axis
  int mode(int axis, int index) const;
  void modes_of(std::size_t flat, std::span<int> out) const;
  std::size_t flat_index(std::span<const int> modes) const;

  // Laplacian eigenvalue |xi|^2 of the stored mode
  double lambda(std::size_t flat) const { return data_->lambda[flat]; }
  const std::vector<double>& lambdas() const { return data_->lambda; }
  // shell index and dyadic block value of every stored mode
  const std::vector<int>& shells() const { return data_->shell; }
  const std::vector<std::int64_t>& blocks() const { return data_->block; }

  // largest |n_j| over the grid along each axis
  int band(int axis) const { return data_->grid[axis] / 2; }

  TorusGeometry scaled_grid(int factor) const;

  bool operator==(const TorusGeometry& other) const;
  bool operator!=(const TorusGeometry& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  struct Data {
    std::vector<double> thetas;
    std::vector<int> grid;
    std::vector<double> lambda;
    std::vector<int> shell;
    std::vector<std::int64_t> block;
    double volume = 0.0;
  };
  std::shared_ptr<const Data> data_;
};

class SpectralField {
 public:
  explicit SpectralField(TorusGeometry geometry);
  SpectralField(TorusGeometry geometry, std::vector<cplx> coeffs);

  const TorusGeometry& geometry() const { return geometry_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& at_mode(std::span<const int> modes);
  cplx at_mode(std::span<const int> modes) const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cplx a);

  bool is_zero() const;

 private:
  TorusGeometry geometry_;
  std::vector<cplx> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx a, SpectralField f);

void require_same_geometry(const TorusGeometry& a, const TorusGeometry& b, const char* what);

// f(x) = sum_n c_n exp(i xi.x); samples at x_j = i L_j / M_j
std::vector<cplx> to_samples(const SpectralField& f);
SpectralField from_samples(const TorusGeometry& g, std::span<const cplx> samples);

// samples of f on a grid refined by `factor` per axis (band-limited interpolation)
std::vector<cplx> to_padded_samples(const SpectralField& f, int factor);
SpectralField from_padded_samples(const TorusGeometry& g, int factor, std::span<const cplx> samples);

// <f, g> = int conj(f) g dx
cplx inner(const SpectralField& f, const SpectralField& g);
double l2_norm(const SpectralField& f);
double max_abs_diff(const SpectralField& a, const SpectralField& b);

class DyadicIndex {
 public:
  DyadicIndex() = default;
  explicit DyadicIndex(std::int64_t value);
  static DyadicIndex zero() { return DyadicIndex(); }
  std::int64_t value() const { return value_; }
  bool is_zero() const { return value_ == 0; }
  DyadicIndex next() const { return DyadicIndex(value_ == 0 ? 1 : 2 * value_); }
  auto operator<=>(const DyadicIndex&) const = default;

 private:
  std::int64_t value_ = 0;
};

// shell k = 0 is {xi = 0}; shell k >= 1 is k-1 <= |xi| < k, xi != 0
int shell_index(double lambda);
DyadicIndex block_of_shell(int k);
DyadicIndex block_of_lambda(double lambda);

// every block P_N that meets the truncated lattice, increasing
std::vector<DyadicIndex> blocks_on_grid(const TorusGeometry& g);
int max_shell_on_grid(const TorusGeometry& g);

SpectralField shell_project(const SpectralField& f, int k);
SpectralField dyadic_project(const SpectralField& f, DyadicIndex n);
SpectralField smooth_dyadic_project(const SpectralField& f, DyadicIndex n);
std::size_t block_mode_count(const TorusGeometry& g, DyadicIndex n);

inline double japanese(double x) { return std::sqrt(1.0 + x * x); }

// (sum_n (1 + |xi|^4)^{s/2} |f_n|^2 vol)^{1/2}
double sobolev_norm(const SpectralField& f, double s);
// sum_N <N>^s ||P_N f||_2
double besov_norm(const SpectralField& f, double s);
// (sum_N <N>^{2s} ||P_N f||^2)^{1/2}
double block_sobolev_norm(const SpectralField& f, double s);

struct NormEquivalence {
  double lower = 1.0;
  double upper = 1.0;
};
// c_lo * block_sobolev <= sobolev <= c_hi * block_sobolev on this lattice
NormEquivalence sobolev_block_equivalence(const TorusGeometry& g, double s);
// (sum_N <N>^{-2 delta})^{1/2} over the blocks on the grid
double besov_embedding_constant(const TorusGeometry& g, double delta);

double lp_norm(std::span<const cplx> samples, const TorusGeometry& sample_grid, double p);
// uniform samples over a torus of the given volume
double lp_norm(std::span<const cplx> samples, double volume, double p);
// quadrature on the 2x refined grid
double lp_norm(const SpectralField& f, double p);

SpectralField free_evolve(const SpectralField& f, double t);
// multiplies mode n by weight(|xi_n|^2)
SpectralField fourier_multiplier(const SpectralField& f, const std::function<double(double)>& weight);

struct Factor {
  const SpectralField* field;
  bool conjugate = false;
};
// product of up to three factors, alias-free and truncated to the grid
SpectralField multiply(std::span<const Factor> factors);
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);
SpectralField triple_product(const SpectralField& f, const SpectralField& g, const SpectralField& h);
// |f|^2 f
SpectralField cubic_nonlinearity(const SpectralField& f);
SpectralField conjugate_field(const SpectralField& f);

SpectralField random_shell_field(const TorusGeometry& g, DyadicIndex n, std::uint64_t seed);
SpectralField ones_on_block(const TorusGeometry& g, DyadicIndex n);
SpectralField plane_wave(const TorusGeometry& g, std::span<const int> modes, cplx amplitude = 1.0);
bool block_fits_grid(const TorusGeometry& g, DyadicIndex n);

}  // namespace nlslab
