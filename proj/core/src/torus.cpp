#include "nlslab/torus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fft.hpp"
#include "nlslab/smooth_cutoff.hpp"

namespace nlslab {

TorusGeometry::TorusGeometry(std::vector<double> thetas, std::vector<int> grid) {
  if (thetas.empty() || thetas.size() != grid.size())
    throw std::invalid_argument("TorusGeometry: need one theta and one grid size per axis");
  for (double t : thetas)
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("TorusGeometry: theta must be positive");
  for (int m : grid)
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("TorusGeometry: grid sizes must be even and >= 2");

  auto data = std::make_shared<Data>();
  data->thetas = std::move(thetas);
  data->grid = std::move(grid);
  const int d = static_cast<int>(data->grid.size());
  std::size_t total = 1;
  data->volume = 1.0;
  for (int j = 0; j < d; ++j) {
    total *= static_cast<std::size_t>(data->grid[j]);
    data->volume *= 2.0 * std::numbers::pi / data->thetas[j];
  }
  data->lambda.assign(total, 0.0);
  // |xi|^2 accumulated axis by axis over the row-major layout
  std::size_t stride = total;
  for (int j = 0; j < d; ++j) {
    const int m = data->grid[j];
    stride /= static_cast<std::size_t>(m);
    for (std::size_t flat = 0; flat < total; ++flat) {
      int idx = static_cast<int>((flat / stride) % static_cast<std::size_t>(m));
      int n = idx < m / 2 ? idx : idx - m;
      double xi = data->thetas[j] * n;
      data->lambda[flat] += xi * xi;
    }
  }
  data->shell.resize(total);
  data->block.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    data->shell[i] = shell_index(data->lambda[i]);
    data->block[i] = block_of_shell(data->shell[i]).value();
  }
  data_ = std::move(data);
}

TorusGeometry TorusGeometry::unit(int d, int m) {
  if (d < 1) throw std::invalid_argument("TorusGeometry: dimension must be >= 1");
  return TorusGeometry(std::vector<double>(d, 1.0), std::vector<int>(d, m));
}

double TorusGeometry::side(int axis) const { return 2.0 * std::numbers::pi / data_->thetas.at(axis); }

int TorusGeometry::mode(int axis, int index) const {
  const int m = data_->grid[axis];
  return index < m / 2 ? index : index - m;
}

void TorusGeometry::modes_of(std::size_t flat, std::span<int> out) const {
  const int d = dim();
  for (int j = d - 1; j >= 0; --j) {
    const auto m = static_cast<std::size_t>(data_->grid[j]);
    out[j] = mode(j, static_cast<int>(flat % m));
    flat /= m;
  }
}

std::size_t TorusGeometry::flat_index(std::span<const int> modes) const {
  if (static_cast<int>(modes.size()) != dim()) throw std::invalid_argument("flat_index: wrong number of modes");
  std::size_t flat = 0;
  for (int j = 0; j < dim(); ++j) {
    const int m = data_->grid[j];
    const int n = modes[j];
    if (n < -m / 2 || n >= m / 2) throw std::out_of_range("flat_index: mode outside the grid");
    flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(n < 0 ? n + m : n);
  }
  return flat;
}

TorusGeometry TorusGeometry::scaled_grid(int factor) const {
  if (factor < 1) throw std::invalid_argument("scaled_grid: factor must be >= 1");
  std::vector<int> g = data_->grid;
  for (int& m : g) m *= factor;
  return TorusGeometry(data_->thetas, std::move(g));
}

bool TorusGeometry::operator==(const TorusGeometry& other) const {
  return data_ == other.data_ || (data_->thetas == other.data_->thetas && data_->grid == other.data_->grid);
}

std::string TorusGeometry::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << dim() << " theta=";
  for (int j = 0; j < dim(); ++j) os << (j ? "x" : "") << data_->thetas[j];
  os << " grid=";
  for (int j = 0; j < dim(); ++j) os << (j ? "x" : "") << data_->grid[j];
  return os.str();
}

SpectralField::SpectralField(TorusGeometry geometry)
    : geometry_(std::move(geometry)), coeffs_(geometry_.size(), cplx{}) {}

SpectralField::SpectralField(TorusGeometry geometry, std::vector<cplx> coeffs)
    : geometry_(std::move(geometry)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != geometry_.size())
    throw std::invalid_argument("SpectralField: coefficient count does not match the grid");
}

cplx& SpectralField::at_mode(std::span<const int> modes) { return coeffs_[geometry_.flat_index(modes)]; }
cplx SpectralField::at_mode(std::span<const int> modes) const { return coeffs_[geometry_.flat_index(modes)]; }

void require_same_geometry(const TorusGeometry& a, const TorusGeometry& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": geometry mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_geometry(geometry_, o.geometry_, "SpectralField +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_geometry(geometry_, o.geometry_, "SpectralField -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

bool SpectralField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx a, SpectralField f) { return f *= a; }

namespace {

// flat index of every mode of `small` inside the grid refined by `factor`
std::vector<std::size_t> embedding(const TorusGeometry& small, int factor) {
  const int d = small.dim();
  std::vector<std::size_t> out(small.size());
  std::vector<int> modes(d);
  for (std::size_t i = 0; i < small.size(); ++i) {
    small.modes_of(i, modes);
    std::size_t flat = 0;
    for (int j = 0; j < d; ++j) {
      const int m = small.grid()[j] * factor;
      flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(modes[j] < 0 ? modes[j] + m : modes[j]);
    }
    out[i] = flat;
  }
  return out;
}

std::vector<int> refined_dims(const TorusGeometry& g, int factor) {
  if (factor < 1) throw std::invalid_argument("refinement factor must be >= 1");
  std::vector<int> dims = g.grid();
  for (int& m : dims) m *= factor;
  return dims;
}

std::size_t product(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int m : dims) n *= static_cast<std::size_t>(m);
  return n;
}

}  // namespace

std::vector<cplx> to_samples(const SpectralField& f) {
  std::vector<cplx> out(f.size());
  detail::fft(f.geometry().grid(), f.coeffs().data(), out.data(), +1);
  return out;
}

SpectralField from_samples(const TorusGeometry& g, std::span<const cplx> samples) {
  if (samples.size() != g.size()) throw std::invalid_argument("from_samples: sample count does not match the grid");
  std::vector<cplx> c(g.size());
  detail::fft(g.grid(), samples.data(), c.data(), -1);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& v : c) v *= scale;
  return SpectralField(g, std::move(c));
}

std::vector<cplx> to_padded_samples(const SpectralField& f, int factor) {
  if (factor == 1) return to_samples(f);
  auto dims = refined_dims(f.geometry(), factor);
  auto map = embedding(f.geometry(), factor);
  std::vector<cplx> c(product(dims), cplx{});
  for (std::size_t i = 0; i < map.size(); ++i) c[map[i]] = f[i];
  std::vector<cplx> out(c.size());
  detail::fft(dims, c.data(), out.data(), +1);
  return out;
}

SpectralField from_padded_samples(const TorusGeometry& g, int factor, std::span<const cplx> samples) {
  if (factor == 1) return from_samples(g, samples);
  auto dims = refined_dims(g, factor);
  if (samples.size() != product(dims)) throw std::invalid_argument("from_padded_samples: sample count mismatch");
  std::vector<cplx> c(samples.size());
  detail::fft(dims, samples.data(), c.data(), -1);
  auto map = embedding(g, factor);
  const double scale = 1.0 / static_cast<double>(samples.size());
  SpectralField out(g);
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = c[map[i]] * scale;
  return out;
}

cplx inner(const SpectralField& f, const SpectralField& g) {
  require_same_geometry(f.geometry(), g.geometry(), "inner");
  cplx s{};
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s * f.geometry().volume();
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(s * f.geometry().volume());
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  require_same_geometry(a.geometry(), b.geometry(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

DyadicIndex::DyadicIndex(std::int64_t value) : value_(value) {
  if (value < 0 || (value != 0 && (value & (value - 1)) != 0))
    throw std::invalid_argument("DyadicIndex: value must be 0 or a power of two, got " + std::to_string(value));
}

int shell_index(double lambda) {
  if (!(lambda > 0.0)) return 0;
  int k = static_cast<int>(std::floor(std::sqrt(lambda))) + 1;
  // settle rounding of sqrt at integer radii exactly in terms of lambda
  while (k > 1 && static_cast<double>(k - 1) * (k - 1) > lambda) --k;
  while (static_cast<double>(k) * k <= lambda) ++k;
  return k;
}

DyadicIndex block_of_shell(int k) {
  if (k <= 0) return DyadicIndex::zero();
  std::int64_t n = 1;
  while (2 * n <= k) n *= 2;
  return DyadicIndex(n);
}

DyadicIndex block_of_lambda(double lambda) { return block_of_shell(shell_index(lambda)); }

int max_shell_on_grid(const TorusGeometry& g) {
  return *std::max_element(g.shells().begin(), g.shells().end());
}

std::vector<DyadicIndex> blocks_on_grid(const TorusGeometry& g) {
  std::vector<std::int64_t> values(g.blocks());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<DyadicIndex> out;
  for (auto v : values) out.emplace_back(v);
  return out;
}

SpectralField shell_project(const SpectralField& f, int k) {
  if (k < 0) throw std::invalid_argument("shell_project: k must be >= 0");
  SpectralField out(f.geometry());
  const auto& shells = f.geometry().shells();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (shells[i] == k) out[i] = f[i];
  return out;
}

SpectralField dyadic_project(const SpectralField& f, DyadicIndex n) {
  SpectralField out(f.geometry());
  const auto& blocks = f.geometry().blocks();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (blocks[i] == n.value()) out[i] = f[i];
  return out;
}

SpectralField smooth_dyadic_project(const SpectralField& f, DyadicIndex n) {
  SpectralField out(f.geometry());
  const auto& lam = f.geometry().lambdas();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double w = smooth_block_weight(n, std::sqrt(lam[i]));
    if (w != 0.0) out[i] = w * f[i];
  }
  return out;
}

std::size_t block_mode_count(const TorusGeometry& g, DyadicIndex n) {
  return static_cast<std::size_t>(std::count(g.blocks().begin(), g.blocks().end(), n.value()));
}

namespace {

double sobolev_weight_sq(double lambda, double s) { return std::pow(1.0 + lambda * lambda, 0.5 * s); }

// ||P_N f||^2 for the blocks of blocks_on_grid order
std::vector<std::pair<DyadicIndex, double>> block_energies(const SpectralField& f) {
  // blocks are 0 or 2^j, so slot j+1 holds 2^j
  std::vector<double> acc(64, 0.0);
  std::vector<bool> present(64, false);
  const auto& blocks = f.geometry().blocks();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::int64_t n = blocks[i];
    const int slot = n == 0 ? 0 : std::countr_zero(static_cast<std::uint64_t>(n)) + 1;
    acc[slot] += std::norm(f[i]);
    present[slot] = true;
  }
  std::vector<std::pair<DyadicIndex, double>> out;
  for (int slot = 0; slot < 64; ++slot)
    if (present[slot])
      out.emplace_back(DyadicIndex(slot == 0 ? 0 : std::int64_t{1} << (slot - 1)), acc[slot] * f.geometry().volume());
  return out;
}

}  // namespace

double sobolev_norm(const SpectralField& f, double s) {
  const auto& lam = f.geometry().lambdas();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += sobolev_weight_sq(lam[i], s) * std::norm(f[i]);
  return std::sqrt(acc * f.geometry().volume());
}

double besov_norm(const SpectralField& f, double s) {
  double acc = 0.0;
  for (const auto& [n, e] : block_energies(f)) acc += std::pow(japanese(static_cast<double>(n.value())), s) * std::sqrt(e);
  return acc;
}

double block_sobolev_norm(const SpectralField& f, double s) {
  double acc = 0.0;
  for (const auto& [n, e] : block_energies(f)) acc += std::pow(japanese(static_cast<double>(n.value())), 2.0 * s) * e;
  return std::sqrt(acc);
}

NormEquivalence sobolev_block_equivalence(const TorusGeometry& g, double s) {
  NormEquivalence eq{std::numeric_limits<double>::infinity(), 0.0};
  for (double l : g.lambdas()) {
    double ratio = std::sqrt(sobolev_weight_sq(l, s)) / std::pow(japanese(static_cast<double>(block_of_lambda(l).value())), s);
    eq.lower = std::min(eq.lower, ratio);
    eq.upper = std::max(eq.upper, ratio);
  }
  return eq;
}

double besov_embedding_constant(const TorusGeometry& g, double delta) {
  double acc = 0.0;
  for (DyadicIndex n : blocks_on_grid(g)) acc += std::pow(japanese(static_cast<double>(n.value())), -2.0 * delta);
  return std::sqrt(acc);
}

double lp_norm(std::span<const cplx> samples, const TorusGeometry& sample_grid, double p) {
  if (samples.size() != sample_grid.size()) throw std::invalid_argument("lp_norm: sample count mismatch");
  return lp_norm(samples, sample_grid.volume(), p);
}

double lp_norm(std::span<const cplx> samples, double volume, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : samples) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  const double half = 0.5 * p;
  if (half == std::floor(half) && half <= 8.0) {
    const int e = static_cast<int>(half);
    for (const auto& v : samples) {
      const double n = std::norm(v);
      double t = n;
      for (int i = 1; i < e; ++i) t *= n;
      acc += t;
    }
  } else {
    for (const auto& v : samples) acc += std::pow(std::abs(v), p);
  }
  acc *= volume / static_cast<double>(samples.size());
  return std::pow(acc, 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) {
  auto s = to_padded_samples(f, 2);
  return lp_norm(s, f.geometry().volume(), p);
}

SpectralField free_evolve(const SpectralField& f, double t) {
  if (t == 0.0) return f;
  SpectralField out(f.geometry());
  const auto& lam = f.geometry().lambdas();
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * std::polar(1.0, -t * lam[i]);
  return out;
}

SpectralField fourier_multiplier(const SpectralField& f, const std::function<double(double)>& weight) {
  SpectralField out(f.geometry());
  const auto& lam = f.geometry().lambdas();
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = weight(lam[i]) * f[i];
  return out;
}

namespace {

// largest |n_j| carrying a nonzero coefficient, per axis
std::vector<int> support_radius(const SpectralField& f) {
  const auto& g = f.geometry();
  std::vector<int> r(g.dim(), 0), modes(g.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == cplx{}) continue;
    g.modes_of(i, modes);
    for (int j = 0; j < g.dim(); ++j) r[j] = std::max(r[j], std::abs(modes[j]));
  }
  return r;
}

}  // namespace

SpectralField multiply(std::span<const Factor> factors) {
  if (factors.empty()) throw std::invalid_argument("multiply: no factors");
  const TorusGeometry& g = factors[0].field->geometry();
  for (const auto& fa : factors) require_same_geometry(g, fa.field->geometry(), "multiply");

  // product modes lie in [-R, R]; refining by F keeps aliases out of the kept band when R < F M - M/2
  int factor = 1;
  std::vector<int> total(g.dim(), 0);
  for (const auto& fa : factors) {
    auto r = support_radius(*fa.field);
    for (int j = 0; j < g.dim(); ++j) total[j] += r[j];
  }
  for (int j = 0; j < g.dim(); ++j) {
    const int m = g.grid()[j];
    factor = std::max(factor, (total[j] + m / 2) / m + 1);
  }

  std::vector<cplx> acc = to_padded_samples(*factors[0].field, factor);
  if (factors[0].conjugate)
    for (auto& v : acc) v = std::conj(v);
  for (std::size_t a = 1; a < factors.size(); ++a) {
    auto s = to_padded_samples(*factors[a].field, factor);
    if (factors[a].conjugate) {
      for (std::size_t i = 0; i < s.size(); ++i) acc[i] *= std::conj(s[i]);
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) acc[i] *= s[i];
    }
  }
  return from_padded_samples(g, factor, acc);
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  Factor fs[] = {{&f, false}, {&g, false}};
  return multiply(fs);
}

SpectralField triple_product(const SpectralField& f, const SpectralField& g, const SpectralField& h) {
  Factor fs[] = {{&f, false}, {&g, false}, {&h, false}};
  return multiply(fs);
}

SpectralField cubic_nonlinearity(const SpectralField& f) {
  Factor fs[] = {{&f, false}, {&f, false}, {&f, true}};
  return multiply(fs);
}

SpectralField conjugate_field(const SpectralField& f) {
  const auto& g = f.geometry();
  SpectralField out(g);
  std::vector<int> modes(g.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.modes_of(i, modes);
    bool representable = true;
    for (int j = 0; j < g.dim(); ++j) {
      modes[j] = -modes[j];
      if (modes[j] >= g.grid()[j] / 2) representable = false;
    }
    if (representable) out.at_mode(modes) = std::conj(f[i]);
  }
  return out;
}

bool block_fits_grid(const TorusGeometry& g, DyadicIndex n) {
  if (n.is_zero()) return true;
  const double radius = 2.0 * static_cast<double>(n.value()) - 1.0;
  for (int j = 0; j < g.dim(); ++j)
    if (std::ceil(radius / g.thetas()[j]) > g.grid()[j] / 2) return false;
  return true;
}

namespace {

void check_block(const TorusGeometry& g, DyadicIndex n, const char* what) {
  if (!block_fits_grid(g, n))
    throw std::invalid_argument(std::string(what) + ": block N=" + std::to_string(n.value()) +
                                " exceeds the band limit of " + g.describe());
  if (block_mode_count(g, n) == 0)
    throw std::invalid_argument(std::string(what) + ": block N=" + std::to_string(n.value()) +
                                " contains no lattice modes on " + g.describe());
}

void normalize(SpectralField& f) {
  double nrm = l2_norm(f);
  if (nrm > 0.0) f *= 1.0 / nrm;
}

}  // namespace

SpectralField random_shell_field(const TorusGeometry& g, DyadicIndex n, std::uint64_t seed) {
  check_block(g, n, "random_shell_field");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField f(g);
  const auto& blocks = g.blocks();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (blocks[i] != n.value()) continue;
    double re = gauss(rng);
    double im = gauss(rng);
    f[i] = cplx(re, im) * std::sqrt(0.5);
  }
  normalize(f);
  return f;
}

SpectralField ones_on_block(const TorusGeometry& g, DyadicIndex n) {
  check_block(g, n, "ones_on_block");
  SpectralField f(g);
  const auto& blocks = g.blocks();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (blocks[i] == n.value()) f[i] = 1.0;
  normalize(f);
  return f;
}

SpectralField plane_wave(const TorusGeometry& g, std::span<const int> modes, cplx amplitude) {
  SpectralField f(g);
  f.at_mode(modes) = amplitude;
  return f;
}

}  // namespace nlslab
