#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "nlslab/estimates.hpp"

using namespace nlslab;

TEST(Params, ExactTable) {
  auto p2 = admissible_parameters(2);
  EXPECT_EQ(p2.zeta0, Rational(1, 4));
  EXPECT_EQ(p2.alpha0, Rational(7, 12));
  EXPECT_EQ(p2.epsilon, Rational(1, 4));
  EXPECT_EQ(p2.s0, Rational(7, 12));
  EXPECT_EQ(p2.q0, Rational(8, 5));
  auto p3 = admissible_parameters(3);
  EXPECT_EQ(p3.zeta0, Rational(3, 5));
  EXPECT_EQ(p3.alpha0, Rational(4, 5));
  EXPECT_EQ(p3.epsilon, Rational(1, 10));
  EXPECT_EQ(p3.q0, Rational(10, 7));
  for (int d = 4; d <= 8; ++d) {
    auto p = admissible_parameters(d);
    EXPECT_TRUE(p.epsilon_zero_plus);
    EXPECT_EQ(p.s0, Rational(d, 2) - 1);
    EXPECT_EQ(p.zeta0, Rational(d, 2) - 1);
    EXPECT_NEAR(p.epsilon_value(), p.plus_offset, 1e-15);
    // d/q0 - d/2 = zeta0 fixes q0
    EXPECT_EQ(Rational(d) / p.q0 - Rational(d, 2), p.zeta0);
  }
  EXPECT_EQ(admissible_parameters(5).alpha0, Rational(7, 6));
  EXPECT_EQ(to_string(Rational(7, 12)), "7/12");
  EXPECT_EQ(to_string(Rational(2)), "2");
  EXPECT_THROW(admissible_parameters(1), std::invalid_argument);
  auto table = params_table(2, 6);
  EXPECT_TRUE(table.accepted);
  EXPECT_EQ(table.rows.size(), 5u);
  EXPECT_EQ(table.get("d4.epsilon"), "0+");
}

TEST(Seeds, DerivedStreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a)
    for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(7, a, b));
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(2, 2, 3));
}

TEST(GradedGrid, ResolvesFastPhases) {
  auto t = graded_time_grid(1.0, 100.0);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  EXPECT_NEAR(t[1], 0.25 / 100.0, 1e-15);
  double hmax = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) hmax = std::max(hmax, t[i] - t[i - 1]);
  EXPECT_LE(hmax, 1.25 / 64.0 + 1e-15);
  EXPECT_THROW(graded_time_grid(0.0, 1.0), std::invalid_argument);
}

TEST(Benches, Preconditions) {
  StrichartzConfig s;
  s.p = 4.0;
  EXPECT_THROW(bench_strichartz(s), std::invalid_argument);
  BernsteinConfig b;
  b.q = 1.0;
  EXPECT_THROW(bench_bernstein(b), std::invalid_argument);
  TrilinearConfig t;
  t.zeta = 0.2;
  EXPECT_THROW(bench_trilinear(t), std::invalid_argument);
  t.zeta = 0.3;
  t.d = 4;
  EXPECT_THROW(bench_trilinear(t), std::invalid_argument);
  CubicProductConfig c;
  c.alpha = 0.5;
  EXPECT_THROW(bench_cubic_product(c), std::invalid_argument);
  SobolevEmbeddingConfig e;
  e.s = 0.4;
  EXPECT_THROW(bench_sobolev_embedding(e), std::invalid_argument);
  SobolevProductConfig p;
  p.delta = 0.0;
  EXPECT_THROW(bench_sobolev_product(p), std::invalid_argument);
}

TEST(Benches, SmallStrichartzRun) {
  StrichartzConfig cfg;
  cfg.n_list = {4, 8, 16};
  cfg.trials = 3;
  auto rep = bench_strichartz(cfg);
  ASSERT_TRUE(rep.fit.has_value());
  EXPECT_EQ(rep.fit->points, 3u);
  // the constant datum on the unit torus gives |T^2|^{1/p - 1/2} exactly
  auto anchor = std::find_if(rep.rows.begin(), rep.rows.end(), [](const ReportRow& r) { return r.kind == "anchor"; });
  ASSERT_NE(anchor, rep.rows.end());
  EXPECT_NEAR(anchor->ratio, std::pow(4.0 * M_PI * M_PI, 1.0 / 6.0 - 0.5), 1e-10);
  auto again = bench_strichartz(cfg);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) EXPECT_EQ(rep.rows[i].ratio, again.rows[i].ratio);
}

TEST(Benches, BernsteinAndEmbedding) {
  BernsteinConfig b;
  b.trials = 2;
  auto br = bench_bernstein(b);
  ASSERT_TRUE(br.fit.has_value());
  EXPECT_LT(br.fit->slope, 1.15);
  SobolevEmbeddingConfig e;
  e.n_list = {2, 4, 8};
  e.trials = 2;
  auto er = bench_sobolev_embedding(e);
  ASSERT_TRUE(er.fit.has_value());
  EXPECT_LT(er.fit->slope, 0.15);
}
