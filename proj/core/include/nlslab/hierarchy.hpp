#pragma once

#include <optional>
#include <vector>

#include "nlslab/density_matrix.hpp"
#include "nlslab/nls.hpp"
#include "nlslab/trace_norm.hpp"

namespace nlslab {

struct HierarchyTrajectory {
  std::vector<double> times;
  std::vector<FactorizedDensityMatrix> states;
  int order = 1;
};

HierarchyTrajectory hierarchy_trajectory(const Trajectory& traj, int k);

struct HierarchyOptions {
  // S^{(k,-zeta)} weight on the defect; defaults to zeta_0(d) (0 in one dimension)
  std::optional<double> zeta;
  // the defect is evaluated at this many evenly spaced times ending at T
  int check_points = 5;
  std::size_t rank_budget = kDefaultRankBudget;
  SobolevConvention convention = SobolevConvention::kEigenvalue;
  TraceNormMethod method = TraceNormMethod::kAuto;
  int threads = 0;
};

double default_zeta(int d);

// indices round(j * steps / points), j = 1..points, deduplicated
std::vector<std::size_t> check_indices(std::size_t steps, int points);

// gamma(t_m) - U(t_m) gamma_0 + i c sum_j w_j U(t_m - s_j) B gamma^{(k+1)}(s_j)
FactorizedDensityMatrix hierarchy_defect(const Trajectory& traj, int k, std::size_t m,
                                         std::size_t rank_budget = kDefaultRankBudget);

// trace norm of the weighted defect at each check time
std::vector<double> hierarchy_residual_profile(const Trajectory& traj, int k, const HierarchyOptions& opts = {});
double hierarchy_duhamel_residual(const Trajectory& traj, int k, const HierarchyOptions& opts = {});

}  // namespace nlslab
