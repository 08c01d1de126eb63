#pragma once

#include <array>
#include <boost/rational.hpp>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nlslab/report.hpp"

namespace nlslab {

using Rational = boost::rational<std::int64_t>;

struct AdmissibleParameters {
  int d = 2;
  Rational zeta0, alpha0, epsilon, s0, q0;
  // epsilon is "0+" and is evaluated at epsilon + plus_offset
  bool epsilon_zero_plus = false;
  double plus_offset = 0.05;

  double epsilon_value() const;
};

AdmissibleParameters admissible_parameters(int d);
std::string to_string(const Rational& r);

ExperimentReport params_table(int d_min, int d_max);

struct StrichartzConfig {
  int d = 2;
  double p = 6.0;
  std::vector<int> n_list{4, 8, 16, 32, 64};
  int trials = 50;
  std::uint64_t seed = 0;
  double slack = 0.15;
  int threads = 0;
};
ExperimentReport bench_strichartz(const StrichartzConfig& cfg);

struct BernsteinConfig {
  int d = 2;
  double p = 2.0;
  double q = std::numeric_limits<double>::infinity();
  std::vector<int> n_list{4, 8, 16, 32};
  int trials = 20;
  std::uint64_t seed = 0;
  double slack = 0.15;
  int threads = 0;
};
ExperimentReport bench_bernstein(const BernsteinConfig& cfg);

struct TrilinearConfig {
  int d = 2;
  double eta = 0.25;
  double zeta = 0.3;
  // triples (N1, N2, N3); empty means the equal-N sweep 2..n_max
  std::vector<std::array<int, 3>> triples;
  int n_max = 32;
  int trials = 8;
  std::uint64_t seed = 0;
  double slack = 0.15;
  // fixed N for the T-sweep of the T^epsilon factor; 0 disables it
  int t_sweep_n = 8;
  int threads = 0;
};
ExperimentReport bench_trilinear(const TrilinearConfig& cfg);

struct CubicProductConfig {
  int d = 2;
  double alpha = 7.0 / 12.0 + 0.05;
  std::vector<int> n_list{2, 4, 8, 16, 32};
  int trials = 20;
  std::uint64_t seed = 0;
  double slack = 0.15;
  int threads = 0;
};
ExperimentReport bench_cubic_product(const CubicProductConfig& cfg);

struct SobolevProductConfig {
  int d = 2;
  double rho1 = 0.6;
  double rho2 = 0.6;
  double delta = 0.05;
  std::vector<int> n_list{2, 4, 8, 16, 32};
  int trials = 20;
  std::uint64_t seed = 0;
  double slack = 0.15;
  int threads = 0;
};
ExperimentReport bench_sobolev_product(const SobolevProductConfig& cfg);

struct SobolevEmbeddingConfig {
  int d = 2;
  double p = 4.0;
  double s = 0.55;
  std::vector<int> n_list{2, 4, 8, 16, 32};
  int trials = 20;
  std::uint64_t seed = 0;
  double slack = 0.15;
  int threads = 0;
};
ExperimentReport bench_sobolev_embedding(const SobolevEmbeddingConfig& cfg);

// time nodes on [0, T], fine near 0 (step ~ 0.25/lambda_max) and coarsening geometrically to coarse_step
std::vector<double> graded_time_grid(double T, double lambda_max, double coarse_step = 1.0 / 64.0);

// mixes a base seed with indices into an independent stream seed
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace nlslab
