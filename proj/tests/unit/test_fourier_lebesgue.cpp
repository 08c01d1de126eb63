#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "nlslab/fourier_lebesgue.hpp"

using namespace nlslab;

namespace {

SpectralField random_band(const TorusGeometry& g, int radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SpectralField f(g);
  for (int n = -radius; n <= radius; ++n) {
    const int m[] = {n};
    f.at_mode(m) = cplx(gauss(rng), gauss(rng));
  }
  return f;
}

// |psi|^2 psi by direct summation over a + b - c = n
SpectralField cubic_by_convolution(const SpectralField& psi, int radius) {
  SpectralField out(psi.geometry());
  auto c = [&](int n) {
    const int m[] = {n};
    return psi.at_mode(m);
  };
  for (int a = -radius; a <= radius; ++a)
    for (int b = -radius; b <= radius; ++b)
      for (int e = -radius; e <= radius; ++e) {
        const int m[] = {a + b - e};
        out.at_mode(m) += c(a) * c(b) * std::conj(c(e));
      }
  return out;
}

}  // namespace

TEST(FourierLebesgue, NormExamples) {
  auto g = TorusGeometry::unit(1, 16);
  const int one[] = {1}, three[] = {3};
  auto e1 = plane_wave(g, one);
  EXPECT_NEAR(fl_norm(e1, 1.5), 1.0, 1e-15);
  auto two = e1 + plane_wave(g, three);
  EXPECT_NEAR(fl_norm(two, 4.0 / 3.0), std::pow(2.0, 0.25), 1e-14);
  auto f = random_band(g, 5, 3);
  EXPECT_NEAR(fl_norm(f, 2.0), l2_norm(f) / std::sqrt(g.volume()), 1e-12);
  double prev = 0.0;
  for (double r : {1.1, 1.3, 1.6, 2.0}) {
    const double v = fl_norm(f, r);
    EXPECT_GE(v, prev);
    prev = v;
  }
  // 11 coefficients: l^{r'} <= 11^{1/r' - 1/2} l^2
  EXPECT_LE(fl_norm(f, 2.0), std::pow(11.0, 0.25) * fl_norm(f, 4.0 / 3.0) + 1e-12);
  EXPECT_THROW(fl_norm(f, 1.0), std::invalid_argument);
  EXPECT_THROW(fl_norm(f, 2.5), std::invalid_argument);
}

TEST(SpaceTime, DualRoundTripAndPlancherel) {
  SpaceTimeField u(8, 2.0, 64);
  auto g = u.geometry();
  for (int i = 0; i < u.time_samples(); ++i) u.set_slice(i, random_band(g, 3, 100 + i));
  auto hat = u.dual();
  auto back = SpaceTimeField::from_dual(8, 2.0, 64, hat);
  double err = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    err = std::max(err, std::abs(back.values()[i] - u.values()[i]));
    l2 += std::norm(u.values()[i]);
  }
  EXPECT_LT(err, 1e-10);
  EXPECT_NEAR(xsb_norm(u, 0.0, 0.0, 2.0), std::sqrt(l2 * u.dt()), 1e-10 * std::sqrt(l2));
  EXPECT_NEAR(u.time(0), -2.0, 1e-15);
  EXPECT_NEAR(u.dtau(), std::numbers::pi / 2.0, 1e-15);
}

TEST(SpaceTime, XsbMatchesQuadratureOracle) {
  // u = exp(-t^2/2) e^{ix}, so u^(tau, 1) = exp(-tau^2/2)
  SpaceTimeField u(8, 16.0, 2048);
  const int one[] = {1};
  auto e1 = plane_wave(u.geometry(), one);
  for (int i = 0; i < u.time_samples(); ++i) u.set_slice(i, std::exp(-0.5 * u.time(i) * u.time(i)) * e1);
  for (double r : {2.0, 1.5, 1.25})
    for (double s : {0.0, 0.5})
      for (double b : {0.25, 0.6}) {
        const double rp = r / (r - 1.0);
        auto f = [&](double tau) { return std::pow(1.0 + (tau + 1.0) * (tau + 1.0), 0.5 * b * rp) * std::exp(-0.5 * rp * tau * tau); };
        const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -40.0, 40.0, 15, 1e-14);
        const double want = std::pow(std::pow(2.0, 0.5 * s * rp) * integral, 1.0 / rp);
        EXPECT_NEAR(xsb_norm(u, s, b, r), want, 1e-8 * want) << r << " " << s << " " << b;
      }
}

TEST(Gauge, ConstantsAndNonlinearity) {
  auto g = TorusGeometry::unit(1, 32);
  const int one[] = {1};
  auto e1 = plane_wave(g, one);
  EXPECT_NEAR(gauge_constant(e1), 2.0, 1e-14);
  EXPECT_LT(max_abs_diff(renormalized_nonlinearity(e1), -1.0 * e1), 1e-14);
  auto psi = random_band(g, 3, 9);
  auto want = cubic_by_convolution(psi, 3);
  want -= cplx(l2_norm(psi) * l2_norm(psi) / std::numbers::pi) * psi;
  EXPECT_LT(max_abs_diff(renormalized_nonlinearity(psi), want), 1e-11);
  EXPECT_THROW(renormalized_nonlinearity(SpectralField(TorusGeometry::unit(2, 8))), std::invalid_argument);
}

TEST(Gauge, TransformedSolutionSolvesRenormalizedEquation) {
  auto g = TorusGeometry::unit(1, 32);
  auto traj = plane_wave_trajectory(g, std::array{2}, 0.9, 1.0, 0.5, 0.01);
  auto psi = gauge_transform(traj);
  EXPECT_NEAR(l2_norm(psi.states.back()), l2_norm(traj.states.back()), 1e-14);
  // the first panel is a trapezoid; from the second node on the rule is Simpson or 3/8
  auto prof = renormalized_residual_profile(psi);
  for (std::size_t i = 2; i < prof.size(); ++i) EXPECT_LT(prof[i], 1e-10) << i;
  EXPECT_LT(prof[1], 1e-6);

  auto phi0 = smooth_random_field(g, 12);
  std::vector<double> res;
  for (double dt : {4e-3, 2e-3, 1e-3}) res.push_back(renormalized_duhamel_residual(gauge_transform(solve_nls(phi0, 0.2, dt, 1.0))));
  for (int i = 0; i < 2; ++i) {
    EXPECT_GT(res[i] / res[i + 1], 3.2);
    EXPECT_LT(res[i] / res[i + 1], 4.8);
  }
}

TEST(HausdorffYoung, RatioWithinBound) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::vector<cplx> v(256);
  for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
  EXPECT_NEAR(hausdorff_young_check(v, 0.05, 2.0), 1.0, 1e-12);
  for (double r : {1.2, 1.5, 1.8}) {
    const double bound = std::pow(2.0 * std::numbers::pi, (r - 1.0) / r - 0.5);
    EXPECT_LE(hausdorff_young_check(v, 0.05, r), bound);
    std::vector<cplx> gsn(256);
    for (int i = 0; i < 256; ++i) {
      const double t = -6.4 + 0.05 * i;
      gsn[i] = std::exp(-0.5 * t * t);
    }
    EXPECT_LE(hausdorff_young_check(gsn, 0.05, r), bound);
  }
  EXPECT_THROW(hausdorff_young_check(std::vector<cplx>(4, 0.0), 0.1, 1.5), std::invalid_argument);
}

TEST(LinearBenches, Preconditions) {
  LinearInhomogeneousConfig bad;
  bad.beta = 0.6;
  EXPECT_THROW(bench_linear_inhomogeneous(bad), std::invalid_argument);
  LinearHomogeneousConfig lt;
  lt.t_list = {2.0};
  EXPECT_THROW(bench_linear_homogeneous(lt), std::invalid_argument);
}

TEST(LinearBenches, HomogeneousReport) {
  LinearHomogeneousConfig cfg;
  auto rep = bench_linear_homogeneous(cfg);
  ASSERT_TRUE(rep.fit.has_value());
  EXPECT_EQ(rep.fit->points, cfg.t_list.size());
  EXPECT_GT(rep.fit->slope, 0.15);
  EXPECT_LT(rep.fit->slope, 0.35);
  EXPECT_TRUE(rep.accepted);
}
