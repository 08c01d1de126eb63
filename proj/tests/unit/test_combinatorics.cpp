#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nlslab/combinatorics.hpp"
#include "nlslab/hierarchy.hpp"

using namespace nlslab;

namespace {

// every tuple in [1, k+r]^r filtered by sigma(j) < j
std::vector<std::vector<int>> brute_force_maps(int k, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(r, 1);
  const int top = k + r;
  while (true) {
    bool ok = true;
    for (int i = 0; i < r; ++i) ok = ok && v[i] <= k + i;
    if (ok) out.push_back(v);
    int i = r - 1;
    while (i >= 0 && v[i] == top) v[i--] = 1;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

long long factorial_ratio(int k, int r) {
  long long n = 1;
  for (int i = k; i <= k + r - 1; ++i) n *= i;
  return n;
}

}  // namespace

TEST(CollisionMaps, EnumerationMatchesBruteForce) {
  for (int k = 1; k <= 4; ++k)
    for (int r = 1; r <= 5; ++r) {
      auto maps = enumerate_collision_maps(k, r);
      auto want = brute_force_maps(k, r);
      ASSERT_EQ(maps.size(), want.size()) << k << "," << r;
      EXPECT_EQ(static_cast<long long>(maps.size()), factorial_ratio(k, r));
      EXPECT_EQ(collision_map_count(k, r), factorial_ratio(k, r));
      for (std::size_t i = 0; i < maps.size(); ++i) {
        EXPECT_TRUE(maps[i].valid());
        EXPECT_EQ(maps[i].values, want[i]);
      }
      EXPECT_TRUE(std::is_sorted(maps.begin(), maps.end()));
    }
}

TEST(CollisionMaps, CountsAndLimits) {
  EXPECT_EQ(collision_map_count(3, 4), 360);
  EXPECT_EQ(collision_map_count(1, 11), boost::multiprecision::cpp_int(39916800));
  EXPECT_EQ(collision_map_count(10, 30).str(), "56211094800477963400133051531919360000000");
  EXPECT_THROW(enumerate_collision_maps(6, 7), BudgetExceeded);
  EXPECT_THROW(enumerate_collision_maps(0, 2), std::invalid_argument);
  CollisionMap s{2, 2, {2, 3}};
  EXPECT_TRUE(s.valid());
  EXPECT_EQ(s(3), 2);
  EXPECT_EQ(s(4), 3);
  EXPECT_EQ(s.to_line(), "2 2 : 2 3");
  EXPECT_FALSE((CollisionMap{2, 2, {3, 1}}.valid()));
}

TEST(ProductIdentity, PolynomialIntegrands) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  using C = std::complex<double>;
  for (int m = 1; m <= 6; ++m)
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<C> F;
      std::vector<std::function<C(double)>> G;
      for (int r = 0; r < m; ++r) {
        F.emplace_back(u(rng), u(rng));
        std::array<C, 4> c;
        for (auto& x : c) x = C(u(rng), u(rng));
        G.emplace_back([c](double s) { return c[0] + s * (c[1] + s * (c[2] + s * c[3])); });
      }
      EXPECT_LT(verify_product_identity(F, G, 0.7), 1e-10) << "m=" << m;
    }
}

TEST(ProductIdentity, DegenerateCases) {
  using C = std::complex<double>;
  std::vector<C> F{C(2.0, 1.0)};
  std::vector<std::function<C(double)>> G{[](double) { return C(0.0); }};
  EXPECT_EQ(verify_product_identity(F, G, 1.0), 0.0);
  std::vector<C> F0;
  std::vector<std::function<C(double)>> G0;
  EXPECT_THROW(verify_product_identity(F0, G0, 1.0), std::invalid_argument);
  std::vector<C> F2{1.0, 2.0};
  EXPECT_THROW(verify_product_identity(F2, G, 1.0), std::invalid_argument);
}

TEST(DuhamelIterate, ReducesToFreeEvolutionAndCollision) {
  auto g = TorusGeometry::unit(1, 16);
  auto f = smooth_random_field(g, 4);
  CollisionMap none{2, 0, {}};
  auto u = evaluate_duhamel_iterate(f, none, 0.3, {});
  auto want = hierarchy_free_evolve(tensor_power(f, 2), 0.3);
  want.append(u, -1.0);
  EXPECT_LT(trace_norm(want), 1e-12);

  const double ts[] = {0.3};
  auto b = evaluate_duhamel_iterate(f, CollisionMap{1, 1, {1}}, 0.3, ts);
  auto c = collision_full(tensor_power(f, 2));
  c.append(b, -1.0);
  EXPECT_LT(trace_norm(c), 1e-12);

  const int one[] = {1};
  auto wave = plane_wave(g, one);
  const double ts2[] = {0.2, 0.1};
  for (const auto& s : enumerate_collision_maps(2, 2))
    EXPECT_LT(trace_norm(evaluate_duhamel_iterate(wave, s, 0.3, ts2)), 1e-12) << s.to_line();
  EXPECT_THROW(evaluate_duhamel_iterate(f, CollisionMap{1, 1, {1}}, 0.3, ts2), std::invalid_argument);
}

TEST(Expansion, FirstOrderIsHierarchyDefect) {
  auto g = TorusGeometry::unit(1, 32);
  auto traj = solve_nls(smooth_random_field(g, 6), 0.05, 0.0125, 1.0);
  for (int k : {1, 2}) {
    auto e = expansion_defect(traj, k, 1);
    auto h = hierarchy_defect(traj, k, traj.steps());
    e.append(h, -1.0);
    EXPECT_LT(trace_norm(e), 1e-12) << "k=" << k;
  }
}

TEST(Expansion, SecondOrderConverges) {
  auto g = TorusGeometry::unit(1, 32);
  auto phi0 = smooth_random_field(g, 7);
  std::vector<double> res;
  for (double dt : {0.0125, 0.00625}) res.push_back(expansion_consistency(solve_nls(phi0, 0.1, dt, 1.0), 1, 2));
  const double ratio = res[0] / res[1];
  EXPECT_GT(ratio, 3.2);
  EXPECT_LT(ratio, 4.8);
  auto traj = solve_nls(phi0, 0.1, 0.0125, 1.0);
  EXPECT_THROW(expansion_defect(traj, 1, 3), std::invalid_argument);
  EXPECT_THROW(expansion_defect(traj, 1, 2, 10), BudgetExceeded);
}
