#include "nlslab/combinatorics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlslab/hierarchy.hpp"
#include "nlslab/quadrature.hpp"

namespace nlslab {

bool CollisionMap::valid() const {
  if (k < 1 || r < 0 || values.size() != static_cast<std::size_t>(r)) return false;
  for (int i = 0; i < r; ++i)
    if (values[i] < 1 || values[i] > k + i) return false;
  return true;
}

std::string CollisionMap::to_line() const {
  std::ostringstream os;
  os << k << ' ' << r << " :";
  for (int v : values) os << ' ' << v;
  return os.str();
}

namespace {

void check_depth(int k, int r, const char* what) {
  if (k < 1 || r < 1) throw std::invalid_argument(std::string(what) + ": k and r must be >= 1");
  if (k + r > kMaxCollisionDepth)
    throw BudgetExceeded(std::string(what) + ": k + r = " + std::to_string(k + r) + " exceeds the enumeration budget " +
                         std::to_string(kMaxCollisionDepth));
}

}  // namespace

void for_each_collision_map(int k, int r, const std::function<void(const CollisionMap&)>& fn) {
  check_depth(k, r, "enumerate_collision_maps");
  CollisionMap s{k, r, std::vector<int>(static_cast<std::size_t>(r), 1)};
  while (true) {
    fn(s);
    // odometer with the last slot fastest; slot i ranges over 1..k+i
    int i = r - 1;
    while (i >= 0 && s.values[i] == k + i) s.values[i--] = 1;
    if (i < 0) return;
    ++s.values[i];
  }
}

std::vector<CollisionMap> enumerate_collision_maps(int k, int r) {
  std::vector<CollisionMap> out;
  for_each_collision_map(k, r, [&](const CollisionMap& s) { out.push_back(s); });
  return out;
}

boost::multiprecision::cpp_int collision_map_count(int k, int r) {
  if (k < 1 || r < 1) throw std::invalid_argument("collision_map_count: k and r must be >= 1");
  boost::multiprecision::cpp_int n = 1;
  for (int j = k + 1; j <= k + r; ++j) n *= j - 1;
  return n;
}

double verify_product_identity(std::span<const std::complex<double>> F,
                               std::span<const std::function<std::complex<double>(double)>> G, double t) {
  using boost::math::quadrature::gauss;
  using C = std::complex<double>;
  const std::size_t m = F.size();
  if (m < 1 || m > 6) throw std::invalid_argument("verify_product_identity: m must be in 1..6");
  if (G.size() != m) throw std::invalid_argument("verify_product_identity: F and G differ in length");

  auto integral = [&](std::size_t r, double upper) {
    if (upper == 0.0) return C(0.0);
    return gauss<double, 16>::integrate([&](double s) { return G[r](s); }, 0.0, upper);
  };

  C lhs = 1.0;
  for (std::size_t r = 0; r < m; ++r) lhs *= F[r] + integral(r, t);

  C rhs = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    // bits of mask mark S_2
    C pf = 1.0;
    for (std::size_t r = 0; r < m; ++r)
      if (!(mask >> r & 1u)) pf *= F[r];
    if (mask == 0) {
      rhs += pf;
      continue;
    }
    C inner = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (!(mask >> r & 1u)) continue;
      if (t == 0.0) continue;
      inner += gauss<double, 16>::integrate(
          [&](double tau) {
            C v = G[r](tau);
            for (std::size_t q = 0; q < m; ++q)
              if (q != r && (mask >> q & 1u)) v *= integral(q, tau);
            return v;
          },
          0.0, t);
    }
    rhs += pf * inner;
  }
  return std::abs(lhs - rhs);
}

FactorizedDensityMatrix evaluate_duhamel_iterate(const FieldPtr& f, const CollisionMap& sigma, double t,
                                                 std::span<const double> times, std::size_t rank_budget) {
  if (!sigma.valid()) throw std::invalid_argument("evaluate_duhamel_iterate: invalid collision map");
  if (times.size() != static_cast<std::size_t>(sigma.r))
    throw std::invalid_argument("evaluate_duhamel_iterate: need one time per collision");
  const int k = sigma.k;
  FactorizedDensityMatrix gamma = tensor_power(f, k + sigma.r);
  for (int i = sigma.r; i >= 1; --i) {
    gamma = collision_single(gamma, sigma(k + i), rank_budget);
    const double before = i == 1 ? t : times[static_cast<std::size_t>(i - 2)];
    gamma = hierarchy_free_evolve(gamma, before - times[static_cast<std::size_t>(i - 1)]);
  }
  if (sigma.r == 0) gamma = hierarchy_free_evolve(gamma, t);
  return gamma;
}

FactorizedDensityMatrix evaluate_duhamel_iterate(const SpectralField& f, const CollisionMap& sigma, double t,
                                                 std::span<const double> times, std::size_t rank_budget) {
  return evaluate_duhamel_iterate(share(f), sigma, t, times, rank_budget);
}

FactorizedDensityMatrix expansion_defect(const Trajectory& traj, int k, int r, std::size_t rank_budget) {
  if (k < 1) throw std::invalid_argument("expansion_consistency: k must be >= 1");
  if (r != 1 && r != 2) throw std::invalid_argument("expansion_consistency: r must be 1 or 2");
  if (traj.states.size() < 3) throw std::invalid_argument("expansion_consistency: need at least 3 time points");
  const std::size_t m = traj.steps();
  const double h = traj.dt();
  const double t = traj.times[m];
  const cplx mic(0.0, -traj.coupling);

  const auto one = enumerate_collision_maps(k, 1);
  const std::size_t fan1 = 2;
  std::size_t terms = 2 + (m + 1) * one.size() * fan1;
  std::vector<CollisionMap> two;
  if (r == 2) {
    two = enumerate_collision_maps(k, 2);
    terms = 2 + (m + 1) * one.size() * fan1 + (m + 1) * (m + 2) / 2 * two.size() * 4;
  }
  if (terms > rank_budget)
    throw BudgetExceeded("expansion_consistency: r=" + std::to_string(r) + " over " + std::to_string(m) +
                         " steps needs " + std::to_string(terms) + " terms, rank budget is " +
                         std::to_string(rank_budget));

  FactorizedDensityMatrix out = tensor_power(traj.states[m], k);
  out.reserve(terms);
  FieldPtr phi0 = share(traj.states[0]);
  out.append(hierarchy_free_evolve(tensor_power(phi0, k), t), -1.0);
  auto W = cumulative_weights(static_cast<int>(m), h);

  for (std::size_t i = 0; i <= m; ++i) {
    if (W[i] == 0.0) continue;
    const double t1 = traj.times[i];
    const double ts1[1] = {t1};
    // first substitution keeps gamma(t_1); the second replaces it by free data plus one more collision
    FieldPtr datum = r == 1 ? share(traj.states[i]) : share(free_evolve(traj.states[0], t1));
    for (const auto& s : one)
      out.append(evaluate_duhamel_iterate(datum, s, t, ts1, rank_budget), -(mic * W[i]));
    if (r == 1 || i == 0) continue;
    auto w = cumulative_weights(static_cast<int>(i), h);
    for (std::size_t j = 0; j <= i; ++j) {
      if (w[j] == 0.0) continue;
      const double ts2[2] = {t1, traj.times[j]};
      FieldPtr inner = share(traj.states[j]);
      for (const auto& s : two)
        out.append(evaluate_duhamel_iterate(inner, s, t, ts2, rank_budget), -(mic * mic * W[i] * w[j]));
    }
  }
  return out;
}

double expansion_consistency(const Trajectory& traj, int k, int r, const ExpansionOptions& opts) {
  const double zeta = opts.zeta.value_or(default_zeta(traj.geometry.dim()));
  auto defect = expansion_defect(traj, k, r, opts.rank_budget);
  return trace_norm(apply_sobolev_op(defect, -zeta, opts.convention), opts.method);
}

}  // namespace nlslab
