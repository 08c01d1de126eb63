#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "nlslab/density_matrix.hpp"
#include "nlslab/trace_norm.hpp"

using namespace nlslab;

namespace {

SpectralField low_modes(const TorusGeometry& g, int radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SpectralField f(g);
  std::vector<int> m(g.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.modes_of(i, m);
    bool inside = true;
    for (int v : m) inside = inside && std::abs(v) <= radius;
    if (inside) f[i] = cplx(gauss(rng), gauss(rng));
  }
  return f;
}

// all multi-indices of `order` sample points on a grid of n points
std::vector<std::vector<std::size_t>> tuples(std::size_t n, int order) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (int s = 0; s < order; ++s) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : out)
      for (std::size_t i = 0; i < n; ++i) {
        auto u = t;
        u.push_back(i);
        next.push_back(u);
      }
    out = next;
  }
  return out;
}

Eigen::MatrixXcd dense_kernel(const FactorizedDensityMatrix& gamma) {
  auto idx = tuples(gamma.geometry().size(), gamma.order());
  Eigen::MatrixXcd K(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) K(a, b) = gamma.kernel(idx[a], idx[b]);
  return K;
}

double dense_trace_norm(const FactorizedDensityMatrix& gamma) {
  const auto& g = gamma.geometry();
  const double cell = std::pow(g.volume() / static_cast<double>(g.size()), gamma.order());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense_kernel(gamma));
  return cell * svd.singularValues().sum();
}

}  // namespace

TEST(DensityMatrix, KernelOfTensorPower) {
  auto g = TorusGeometry::unit(1, 8);
  auto phi = low_modes(g, 2, 1);
  auto samples = to_samples(phi);
  auto gamma = tensor_power(phi, 2);
  EXPECT_EQ(gamma.rank(), 1u);
  EXPECT_TRUE(gamma.is_hermitian());
  for (std::size_t a : {0u, 3u, 7u})
    for (std::size_t b : {1u, 5u}) {
      std::size_t x[] = {a, b}, xp[] = {b, 2};
      cplx want = samples[a] * samples[b] * std::conj(samples[b]) * std::conj(samples[2]);
      EXPECT_LT(std::abs(gamma.kernel(x, xp) - want), 1e-12);
    }
}

TEST(DensityMatrix, CollisionMatchesKernelContraction) {
  auto g = TorusGeometry::unit(1, 16);
  FactorizedDensityMatrix gamma(g, 3);
  for (int t = 0; t < 2; ++t) {
    std::vector<FieldPtr> kets, bras;
    for (int s = 0; s < 3; ++s) {
      kets.push_back(share(low_modes(g, 2, 10 + 6 * t + s)));
      bras.push_back(share(low_modes(g, 2, 13 + 6 * t + s)));
    }
    gamma.add_term({cplx(0.5 + t, -0.3), kets, bras});
  }
  for (int j = 1; j <= 2; ++j) {
    auto out = collision_single(gamma, j);
    EXPECT_EQ(out.order(), 2);
    for (std::size_t x0 : {0u, 5u})
      for (std::size_t x1 : {3u, 11u})
        for (std::size_t y0 : {2u, 9u}) {
          std::size_t x[] = {x0, x1}, xp[] = {y0, 7};
          const std::size_t xj = x[j - 1], yj = xp[j - 1];
          std::size_t X1[] = {x0, x1, xj}, P1[] = {y0, 7, xj};
          std::size_t X2[] = {x0, x1, yj}, P2[] = {y0, 7, yj};
          cplx want = gamma.kernel(X1, P1) - gamma.kernel(X2, P2);
          EXPECT_LT(std::abs(out.kernel(x, xp) - want), 1e-10 * std::max(1.0, std::abs(want)));
        }
  }
  auto full = collision_full(gamma);
  auto sum = collision_single(gamma, 1);
  sum.append(collision_single(gamma, 2));
  std::size_t x[] = {4, 6}, xp[] = {1, 12};
  EXPECT_LT(std::abs(full.kernel(x, xp) - sum.kernel(x, xp)), 1e-10);
  EXPECT_THROW(collision_single(gamma, 3), std::invalid_argument);
  EXPECT_THROW(collision_full(gamma, 3), BudgetExceeded);
}

TEST(DensityMatrix, CollisionOfPureStateIsAntiHermitian) {
  auto g = TorusGeometry::unit(2, 8);
  auto phi = low_modes(g, 1, 3);
  auto b = collision_full(tensor_power(phi, 3));
  EXPECT_TRUE(b.is_anti_hermitian(1e-10));
  auto u = hierarchy_free_evolve(tensor_power(phi, 2), 0.3);
  EXPECT_TRUE(u.is_hermitian());
}

TEST(TraceNorm, MatchesDenseSingularValues) {
  auto g = TorusGeometry::unit(1, 8);
  for (int order : {1, 2}) {
    FactorizedDensityMatrix gamma(g, order);
    for (int t = 0; t < 3; ++t) {
      std::vector<FieldPtr> kets, bras;
      for (int s = 0; s < order; ++s) {
        kets.push_back(share(low_modes(g, 3, 100 + 10 * t + s)));
        bras.push_back(share(low_modes(g, 3, 200 + 10 * t + s)));
      }
      gamma.add_term({cplx(1.0 - 0.4 * t, 0.2 * t), kets, bras});
    }
    const double want = dense_trace_norm(gamma);
    for (auto m : {TraceNormMethod::kAuto, TraceNormMethod::kOrthogonal})
      EXPECT_NEAR(trace_norm(gamma, m), want, 1e-9 * want) << "order " << order;
  }
}

TEST(TraceNorm, GramMethodOnHermitianInput) {
  auto g = TorusGeometry::unit(1, 8);
  auto a = share(low_modes(g, 2, 7));
  auto b = share(low_modes(g, 2, 8));
  FactorizedDensityMatrix gamma(g, 1);
  gamma.add_term({1.0, {a}, {a}});
  gamma.add_term({-0.5, {b}, {b}});
  gamma.add_term({cplx(0.0, 0.3), {a}, {b}});
  gamma.add_term({cplx(0.0, -0.3), {b}, {a}});
  const double want = dense_trace_norm(gamma);
  EXPECT_NEAR(trace_norm(gamma, TraceNormMethod::kGram), want, 1e-9 * want);
  EXPECT_EQ(factor_span_rank(gamma), 2u);
}

TEST(TraceNorm, PureStateIdentity) {
  for (int d : {1, 2}) {
    auto g = TorusGeometry::unit(d, 8);
    auto phi = low_modes(g, 3, 40 + d);
    for (int k = 1; k <= 3; ++k)
      for (double s : {0.0, 0.5, 1.0}) {
        const double got = trace_norm(apply_sobolev_op(tensor_power(phi, k), s));
        const double want = std::pow(sobolev_norm(phi, s), 2.0 * k);
        EXPECT_NEAR(got, want, 1e-10 * want) << "d=" << d << " k=" << k << " s=" << s;
      }
  }
}

TEST(DensityMatrix, SobolevOpConventions) {
  auto g = TorusGeometry::unit(1, 8);
  const int two[] = {2};
  auto gamma = tensor_power(plane_wave(g, two), 1);
  auto e = apply_sobolev_op(gamma, 1.0, SobolevConvention::kEigenvalue);
  auto f = apply_sobolev_op(gamma, 1.0, SobolevConvention::kFrequency);
  const double vol = 2 * M_PI;
  EXPECT_NEAR(trace_norm(e), std::sqrt(17.0) * vol, 1e-12);
  EXPECT_NEAR(trace_norm(f), 5.0 * vol, 1e-12);
}
