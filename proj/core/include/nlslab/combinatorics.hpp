#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlslab/density_matrix.hpp"
#include "nlslab/nls.hpp"
#include "nlslab/trace_norm.hpp"

namespace nlslab {

// sigma(k+1), ..., sigma(k+r) with 1 <= sigma(j) <= j-1
struct CollisionMap {
  int k = 1;
  int r = 0;
  std::vector<int> values;

  int operator()(int j) const { return values.at(static_cast<std::size_t>(j - k - 1)); }
  bool valid() const;
  // "k r : sigma(k+1) ... sigma(k+r)"
  std::string to_line() const;
  auto operator<=>(const CollisionMap&) const = default;
};

inline constexpr int kMaxCollisionDepth = 12;

// every map in lexicographic order; needs k, r >= 1 and k + r <= 12
std::vector<CollisionMap> enumerate_collision_maps(int k, int r);
void for_each_collision_map(int k, int r, const std::function<void(const CollisionMap&)>& fn);

// (k+r-1)! / (k-1)!
boost::multiprecision::cpp_int collision_map_count(int k, int r);

// |prod_r (F_r + int_0^t G_r) - sum over S_1, S_2 of the ordered expansion|, with Gauss-Legendre
// quadrature that is exact for polynomial G of total degree <= 31; m <= 6
double verify_product_identity(std::span<const std::complex<double>> F,
                               std::span<const std::function<std::complex<double>(double)>> G, double t);

// U(t - t_1) B_{sigma(k+1),k+1} U(t_1 - t_2) ... B_{sigma(k+r),k+r} |f><f|^{(k+r)}
FactorizedDensityMatrix evaluate_duhamel_iterate(const FieldPtr& f, const CollisionMap& sigma, double t,
                                                 std::span<const double> times,
                                                 std::size_t rank_budget = kDefaultRankBudget);
FactorizedDensityMatrix evaluate_duhamel_iterate(const SpectralField& f, const CollisionMap& sigma, double t,
                                                 std::span<const double> times,
                                                 std::size_t rank_budget = kDefaultRankBudget);

struct ExpansionOptions {
  std::optional<double> zeta;
  // the r = 2 expansion holds O(steps^2) iterates
  std::size_t rank_budget = std::size_t{1} << 17;
  SobolevConvention convention = SobolevConvention::kEigenvalue;
  TraceNormMethod method = TraceNormMethod::kAuto;
};

// defect at the final time between gamma^{(k)}(T) - U(T) gamma_0 and its r-fold Duhamel expansion
// built from collision maps and nested cumulative quadrature; r in {1, 2}
FactorizedDensityMatrix expansion_defect(const Trajectory& traj, int k, int r,
                                         std::size_t rank_budget = std::size_t{1} << 17);
double expansion_consistency(const Trajectory& traj, int k, int r, const ExpansionOptions& opts = {});

}  // namespace nlslab
