#include "nlslab/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlslab/estimates.hpp"
#include "nlslab/parallel.hpp"
#include "nlslab/quadrature.hpp"

namespace nlslab {

HierarchyTrajectory hierarchy_trajectory(const Trajectory& traj, int k) {
  HierarchyTrajectory out;
  out.order = k;
  out.times = traj.times;
  for (const auto& s : traj.states) out.states.push_back(tensor_power(s, k));
  return out;
}

double default_zeta(int d) {
  if (d < 2) return 0.0;
  return boost::rational_cast<double>(admissible_parameters(d).zeta0);
}

std::vector<std::size_t> check_indices(std::size_t steps, int points) {
  if (points < 1) throw std::invalid_argument("check_indices: need at least one check point");
  std::vector<std::size_t> out;
  for (int j = 1; j <= points; ++j) {
    auto m = static_cast<std::size_t>(std::llround(static_cast<double>(j) * static_cast<double>(steps) / points));
    if (m >= 1 && (out.empty() || out.back() != m)) out.push_back(m);
  }
  return out;
}

namespace {

void check_trajectory(const Trajectory& traj, int k) {
  if (k < 1) throw std::invalid_argument("hierarchy residual: k must be >= 1");
  if (traj.states.size() < 3) throw std::invalid_argument("hierarchy residual: need at least 3 time points");
}

FactorizedDensityMatrix defect_from(const Trajectory& traj, int k, std::size_t m,
                                    const std::vector<FactorizedDensityMatrix>& collided, std::size_t budget) {
  const std::size_t terms = 2 + (m + 1) * 2 * static_cast<std::size_t>(k);
  if (terms > budget)
    throw BudgetExceeded("hierarchy residual: defect at step " + std::to_string(m) + " of order " + std::to_string(k) +
                         " needs " + std::to_string(terms) + " terms, rank budget is " + std::to_string(budget));
  const double t = traj.times[m];
  FactorizedDensityMatrix out = tensor_power(traj.states[m], k);
  out.reserve(terms);
  out.append(hierarchy_free_evolve(tensor_power(traj.states[0], k), t), -1.0);
  auto w = cumulative_weights(static_cast<int>(m), traj.dt());
  const cplx ic(0.0, traj.coupling);
  for (std::size_t j = 0; j <= m; ++j) {
    if (w[j] == 0.0) continue;
    out.append(hierarchy_free_evolve(collided[j], t - traj.times[j]), ic * w[j]);
  }
  return out;
}

std::vector<FactorizedDensityMatrix> collisions(const Trajectory& traj, int k, std::size_t last, int threads) {
  std::vector<std::optional<FactorizedDensityMatrix>> slots(last + 1);
  parallel_for(
      last + 1, [&](std::size_t j) { slots[j] = collision_full(tensor_power(traj.states[j], k + 1)); }, threads);
  std::vector<FactorizedDensityMatrix> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace

FactorizedDensityMatrix hierarchy_defect(const Trajectory& traj, int k, std::size_t m, std::size_t rank_budget) {
  check_trajectory(traj, k);
  if (m >= traj.states.size()) throw std::out_of_range("hierarchy_defect: time index out of range");
  return defect_from(traj, k, m, collisions(traj, k, m, 1), rank_budget);
}

std::vector<double> hierarchy_residual_profile(const Trajectory& traj, int k, const HierarchyOptions& opts) {
  check_trajectory(traj, k);
  const double zeta = opts.zeta.value_or(default_zeta(traj.geometry.dim()));
  auto idx = check_indices(traj.steps(), opts.check_points);
  const std::size_t needed = 2 + (idx.back() + 1) * 2 * static_cast<std::size_t>(k);
  if (needed > opts.rank_budget)
    throw BudgetExceeded("hierarchy residual: order " + std::to_string(k) + " over " + std::to_string(traj.steps()) +
                         " steps needs " + std::to_string(needed) + " terms, rank budget is " +
                         std::to_string(opts.rank_budget));
  auto collided = collisions(traj, k, idx.back(), opts.threads);
  std::vector<double> out(idx.size());
  parallel_for(
      idx.size(),
      [&](std::size_t i) {
        auto defect = defect_from(traj, k, idx[i], collided, opts.rank_budget);
        out[i] = trace_norm(apply_sobolev_op(defect, -zeta, opts.convention), opts.method);
      },
      opts.threads);
  return out;
}

double hierarchy_duhamel_residual(const Trajectory& traj, int k, const HierarchyOptions& opts) {
  auto prof = hierarchy_residual_profile(traj, k, opts);
  return *std::max_element(prof.begin(), prof.end());
}

}  // namespace nlslab
