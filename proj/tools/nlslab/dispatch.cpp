#include "dispatch.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <sstream>

#include "nlslab/combinatorics.hpp"
#include "nlslab/estimates.hpp"
#include "nlslab/fourier_lebesgue.hpp"
#include "nlslab/hierarchy.hpp"
#include "nlslab/nls.hpp"
#include "nlslab/report_io.hpp"

namespace nlslab::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::pair<int, int> parse_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      int v = std::stoi(s);
      return {v, v};
    }
    int a = std::stoi(s.substr(0, dots));
    int b = std::stoi(s.substr(dots + 2));
    if (b < a) throw std::invalid_argument("empty range");
    return {a, b};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad range '" + s + "', expected A..B or A");
  }
}

std::vector<int> dyadic_list(int nmin, int nmax) {
  if (nmin < 1 || nmax < nmin) throw std::invalid_argument("need 1 <= nmin <= nmax");
  std::vector<int> out;
  for (int n = nmin; n <= nmax; n *= 2) out.push_back(n);
  return out;
}

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

constexpr const char* kMapping = R"(Subcommand -> operation
  bench strichartz          bench_strichartz: L^p space-time bound for free waves on a dyadic block
  bench bernstein           bench_bernstein: L^p -> L^q bound of the smoothed block projector
  bench trilinear           bench_trilinear: trilinear free-evolution estimate in Besov norms
  bench cubic-product       bench_cubic_product: cubic product bound H^alpha^3 -> B^{-zeta0}
  bench sobolev-product     bench_sobolev_product: bilinear and trilinear Sobolev products
  bench sobolev-embedding   bench_sobolev_embedding: H^s -> L^p and its dual L^p' -> H^{-s}
  bench xsb-homogeneous     bench_linear_homogeneous: T-scaling of the cut-off free wave in X^{0,b}_r
  bench xsb-inhomogeneous   bench_linear_inhomogeneous: T-scaling of the cut-off Duhamel integral in X^{0,b}_r
  verify duhamel            duhamel_residual: mild-solution defect of the split-step NLS solution
  verify hierarchy          hierarchy_duhamel_residual: mild hierarchy defect of factorized states
  verify product-identity   verify_product_identity: ordered expansion of a product of Duhamel terms
                            (alias: verify lemma25)
  verify gauge              gauge_transform + renormalized_duhamel_residual on the circle
  verify expansion          expansion_consistency: iterated Duhamel expansion over collision maps
  combinatorics enumerate   enumerate_collision_maps
  combinatorics count       collision_map_count
  params table              admissible_parameters over a range of dimensions
  replay <manifest>         re-runs a recorded command

Exit status: 0 success, 2 acceptance check failed, 1 usage error.
Environment: NLSLAB_THREADS (worker threads), NLSLAB_OUT_DIR (base directory for relative --out).)";

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  if (p.is_relative())
    if (const char* dir = std::getenv("NLSLAB_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  return p;
}

fs::path manifest_path(fs::path csv) { return csv.replace_extension(".manifest.json"); }

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
  return out;
}

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
};

// residual at dt, dt/2, ... with halving ratios; the fit over dt gives the observed order
ExperimentReport convergence_report(const std::string& name, const std::vector<double>& dts,
                                    const std::vector<double>& residuals) {
  ExperimentReport rep;
  rep.name = name;
  rep.param_names = {"dt"};
  rep.fit_variable = "dt";
  bool ok = true;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    rep.rows.push_back(ReportRow{"residual", {dts[i]}, residuals[i], 1.0, residuals[i], residuals[i] > 0.0});
    if (i > 0) {
      const double ratio = residuals[i - 1] / residuals[i];
      rep.set("halving_ratio_" + std::to_string(i), ratio);
      ok = ok && ratio >= 3.2 && ratio <= 4.8;
    }
  }
  rep.set("accept_halving_ratio", "[3.2, 4.8]");
  if (dts.size() >= 3) {
    rep.fit = rep.refit();
    rep.set("fitted_slope", rep.fit->slope);
    rep.set("fitted_intercept", rep.fit->intercept);
    rep.set("fit_residual", rep.fit->residual);
  }
  rep.accepted = ok && dts.size() >= 2;
  return rep;
}

std::vector<double> halving_steps(double dt, int levels) {
  if (levels < 2) throw std::invalid_argument("--levels must be >= 2");
  if (!(dt > 0.0)) throw std::invalid_argument("--dt must be positive");
  std::vector<double> out;
  for (int i = 0; i < levels; ++i) out.push_back(dt / std::pow(2.0, i));
  return out;
}

void print_summary(const ExperimentReport& rep, std::ostream& out) {
  out << rep.name << '\n';
  out << "  seed = " << rep.seed << '\n';
  for (const auto& [k, v] : rep.metadata) out << "  " << k << " = " << v << '\n';
  out << "  evidence_not_proof = true\n";
  out << "  accepted = " << (rep.accepted ? "true" : "false") << '\n';
}

void print_params_table(const ExperimentReport& rep, std::ostream& out) {
  out << "d    zeta0    alpha0   epsilon  s0       q0\n";
  for (const auto& row : rep.rows) {
    const int d = static_cast<int>(row.params.at(0));
    const std::string pre = "d" + std::to_string(d) + ".";
    auto cell = [&](const char* key) {
      std::string v = rep.get(pre + key).value_or("?");
      v.resize(std::max<std::size_t>(v.size(), 8), ' ');
      return v;
    };
    out << std::left << std::setw(5) << d << cell("zeta0") << ' ' << cell("alpha0") << ' ' << cell("epsilon") << ' '
        << cell("s0") << ' ' << cell("q0") << '\n';
  }
}

json option_values(const CLI::App* app) {
  json params = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? "," : "") + res[i];
      params[name] = joined;
    } else {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

void write_manifest(const fs::path& csv, const std::vector<std::string>& args, const std::string& command,
                    const json& params, const ExperimentReport* rep) {
  json m;
  m["artifact_version"] = kArtifactVersion;
  m["command"] = command;
  m["argv"] = args;
  m["parameters"] = params;
  if (rep) {
    m["seed"] = rep->seed;
    json grid = json::object();
    for (const auto& [k, v] : rep->metadata)
      if (k.find("grid") != std::string::npos || k == "window" || k == "time_samples" || k == "space_modes")
        grid[k] = v;
    m["grid"] = grid;
    m["accepted"] = rep->accepted;
  }
  m["outputs"] = {{"csv", csv.string()}, {"manifest", manifest_path(csv).string()}};
  std::ofstream f(manifest_path(csv));
  if (!f) throw std::runtime_error("cannot write manifest " + manifest_path(csv).string());
  f << m.dump(2) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int replay(const std::string& manifest, const std::string& out_override, std::ostream& out, std::ostream& err,
           int depth) {
  if (depth > 0) throw std::invalid_argument("replay: a manifest cannot replay another manifest");
  std::ifstream f(manifest);
  if (!f) throw std::runtime_error("replay: cannot open " + manifest);
  json m;
  try {
    f >> m;
  } catch (const json::exception& e) {
    throw std::runtime_error("replay: bad manifest " + manifest + ": " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw std::runtime_error("replay: manifest has no argv");
  auto args = m["argv"].get<std::vector<std::string>>();
  if (!out_override.empty()) {
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--out") {
        args[i + 1] = out_override;
        replaced = true;
      }
    if (!replaced) {
      args.push_back("--out");
      args.push_back(out_override);
    }
  }
  return run(args, out, err, depth + 1);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"Numerical laboratory for cubic NLS on tori: estimate benches, mild-solution checks,\n"
               "Gross-Pitaevskii hierarchy residuals and collision-map combinatorics.",
               "nlslab"};
  app.footer(kMapping);
  app.require_subcommand(1);

  Common common;
  std::function<ExperimentReport()> job;
  std::function<void()> text_job;
  const CLI::App* leaf = nullptr;
  std::string command;

  auto add_common = [&](CLI::App* sub, bool seeded, bool threaded) {
    sub->add_option("--out", common.out, "CSV report path (a .manifest.json is written next to it)");
    if (seeded) sub->add_option("--seed", common.seed, "64-bit base seed")->capture_default_str();
    if (threaded) sub->add_option("--threads", common.threads, "worker threads (0: NLSLAB_THREADS or all cores)");
  };
  auto leaf_of = [&](CLI::App* sub, std::string name) {
    sub->callback([&, sub, name] {
      leaf = sub;
      command = name;
    });
  };

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "estimate benches with exponent fits");
  bench->require_subcommand(1);

  StrichartzConfig str;
  int str_nmin = 4, str_nmax = 64;
  auto* b_str = bench->add_subcommand("strichartz", "L^p space-time bound for free waves on a dyadic block");
  b_str->add_option("--d", str.d, "dimension (1..3)")->capture_default_str();
  b_str->add_option("--p", str.p, "space-time exponent, above 2(d+2)/d")->capture_default_str();
  b_str->add_option("--nmin", str_nmin, "smallest block N")->capture_default_str();
  b_str->add_option("--nmax", str_nmax, "largest block N")->capture_default_str();
  b_str->add_option("--trials", str.trials, "random data per N")->capture_default_str();
  b_str->add_option("--slack", str.slack, "slope slack")->capture_default_str();
  add_common(b_str, true, true);
  leaf_of(b_str, "bench strichartz");

  BernsteinConfig ber;
  int ber_nmin = 4, ber_nmax = 32;
  std::string ber_q = "inf";
  auto* b_ber = bench->add_subcommand("bernstein", "L^p -> L^q bound of the smoothed block projector");
  b_ber->add_option("--d", ber.d, "dimension (1..3)")->capture_default_str();
  b_ber->add_option("--p", ber.p, "input exponent")->capture_default_str();
  b_ber->add_option("--q", ber_q, "output exponent, may be inf")->capture_default_str();
  b_ber->add_option("--nmin", ber_nmin, "smallest block N")->capture_default_str();
  b_ber->add_option("--nmax", ber_nmax, "largest block N")->capture_default_str();
  b_ber->add_option("--trials", ber.trials, "random data per N")->capture_default_str();
  b_ber->add_option("--slack", ber.slack, "slope slack")->capture_default_str();
  add_common(b_ber, true, true);
  leaf_of(b_ber, "bench bernstein");

  TrilinearConfig tri;
  std::optional<double> tri_zeta;
  std::vector<std::string> tri_triples;
  auto* b_tri = bench->add_subcommand("trilinear", "trilinear free-evolution estimate in Besov norms");
  b_tri->add_option("--d", tri.d, "dimension (2 or 3)")->capture_default_str();
  b_tri->add_option("--eta", tri.eta, "output regularity loss, 0 <= eta <= zeta0")->capture_default_str();
  b_tri->add_option("--zeta", tri_zeta, "input regularity, above zeta0 (default zeta0 + 0.05)");
  b_tri->add_option("--nmax", tri.n_max, "largest N of the equal-N sweep")->capture_default_str();
  b_tri->add_option("--triple", tri_triples, "explicit N1,N2,N3 triple (repeatable)");
  b_tri->add_option("--trials", tri.trials, "random data per triple")->capture_default_str();
  b_tri->add_option("--tsweep-n", tri.t_sweep_n, "N of the T sweep (0 disables)")->capture_default_str();
  b_tri->add_option("--slack", tri.slack, "slope slack")->capture_default_str();
  add_common(b_tri, true, true);
  leaf_of(b_tri, "bench trilinear");

  CubicProductConfig cub;
  std::optional<double> cub_alpha;
  int cub_nmin = 2, cub_nmax = 32;
  auto* b_cub = bench->add_subcommand("cubic-product", "cubic product bound H^alpha^3 -> B^{-zeta0}");
  b_cub->add_option("--d", cub.d, "dimension (1..3)")->capture_default_str();
  b_cub->add_option("--alpha", cub_alpha, "input regularity, above alpha0 (default alpha0 + 0.05)");
  b_cub->add_option("--nmin", cub_nmin, "smallest block N")->capture_default_str();
  b_cub->add_option("--nmax", cub_nmax, "largest block N")->capture_default_str();
  b_cub->add_option("--trials", cub.trials, "random data per N")->capture_default_str();
  b_cub->add_option("--slack", cub.slack, "slope slack")->capture_default_str();
  add_common(b_cub, true, true);
  leaf_of(b_cub, "bench cubic-product");

  SobolevProductConfig sp;
  int sp_nmin = 2, sp_nmax = 32;
  auto* b_sp = bench->add_subcommand("sobolev-product", "bilinear and trilinear Sobolev product bounds");
  b_sp->add_option("--d", sp.d, "dimension (1..3)")->capture_default_str();
  b_sp->add_option("--rho1", sp.rho1, "first regularity in (d/4, d/2)")->capture_default_str();
  b_sp->add_option("--rho2", sp.rho2, "second regularity in (0, d/2)")->capture_default_str();
  b_sp->add_option("--delta", sp.delta, "regularity margin")->capture_default_str();
  b_sp->add_option("--nmin", sp_nmin, "smallest block N")->capture_default_str();
  b_sp->add_option("--nmax", sp_nmax, "largest block N")->capture_default_str();
  b_sp->add_option("--trials", sp.trials, "random data per N")->capture_default_str();
  b_sp->add_option("--slack", sp.slack, "slope slack")->capture_default_str();
  add_common(b_sp, true, true);
  leaf_of(b_sp, "bench sobolev-product");

  SobolevEmbeddingConfig se;
  int se_nmin = 2, se_nmax = 32;
  auto* b_se = bench->add_subcommand("sobolev-embedding", "H^s -> L^p embedding and its dual");
  b_se->add_option("--d", se.d, "dimension (1..3)")->capture_default_str();
  b_se->add_option("--p", se.p, "Lebesgue exponent >= 2")->capture_default_str();
  b_se->add_option("--s", se.s, "regularity above d/2 - d/p")->capture_default_str();
  b_se->add_option("--nmin", se_nmin, "smallest block N")->capture_default_str();
  b_se->add_option("--nmax", se_nmax, "largest block N")->capture_default_str();
  b_se->add_option("--trials", se.trials, "random data per N")->capture_default_str();
  b_se->add_option("--slack", se.slack, "slope slack")->capture_default_str();
  add_common(b_se, true, true);
  leaf_of(b_se, "bench sobolev-embedding");

  LinearHomogeneousConfig xh;
  std::string xh_t = "1,0.5,0.25,0.125";
  auto* b_xh = bench->add_subcommand("xsb-homogeneous", "T-scaling of the cut-off free wave in X^{0,b}_r");
  b_xh->add_option("--r", xh.r, "Fourier-Lebesgue exponent in (1, 2]")->capture_default_str();
  b_xh->add_option("--b", xh.b, "modulation regularity >= 0")->capture_default_str();
  b_xh->add_option("--T", xh_t, "comma-separated T values in (0, 1]")->capture_default_str();
  b_xh->add_option("--xi0", xh.xi0, "mode of the datum")->capture_default_str();
  b_xh->add_option("--window", xh.grid.window, "half length of the time window")->capture_default_str();
  b_xh->add_option("--time-samples", xh.grid.time_samples, "time samples")->capture_default_str();
  b_xh->add_option("--space-modes", xh.grid.space_modes, "spatial modes")->capture_default_str();
  b_xh->add_option("--slack", xh.slack, "slope slack")->capture_default_str();
  add_common(b_xh, false, true);
  leaf_of(b_xh, "bench xsb-homogeneous");

  LinearInhomogeneousConfig xi;
  std::string xi_t = "1,0.5,0.25,0.125";
  auto* b_xi = bench->add_subcommand("xsb-inhomogeneous", "T-scaling of the cut-off Duhamel integral in X^{0,b}_r");
  b_xi->add_option("--r", xi.r, "Fourier-Lebesgue exponent in (1, 2]")->capture_default_str();
  b_xi->add_option("--b", xi.b, "modulation regularity of the output")->capture_default_str();
  b_xi->add_option("--beta", xi.beta, "modulation regularity of the forcing")->capture_default_str();
  b_xi->add_option("--T", xi_t, "comma-separated T values in (0, 1]")->capture_default_str();
  b_xi->add_option("--xi0", xi.xi0, "mode of the forcing")->capture_default_str();
  b_xi->add_option("--amplitude", xi.amplitude, "forcing amplitude")->capture_default_str();
  b_xi->add_option("--window", xi.grid.window, "half length of the time window")->capture_default_str();
  b_xi->add_option("--time-samples", xi.grid.time_samples, "time samples")->capture_default_str();
  b_xi->add_option("--space-modes", xi.grid.space_modes, "spatial modes")->capture_default_str();
  b_xi->add_option("--slack", xi.slack, "slope slack")->capture_default_str();
  add_common(b_xi, false, true);
  leaf_of(b_xi, "bench xsb-inhomogeneous");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "mild-solution, hierarchy and identity checks");
  verify->require_subcommand(1);

  struct SolveOptions {
    int d = 2;
    int grid = 32;
    double T = 0.5;
    double dt = 4e-3;
    int levels = 3;
    double coupling = 1.0;
    double width = 1.5;
  };
  auto add_solve = [](CLI::App* sub, SolveOptions& o) {
    sub->add_option("--d", o.d, "dimension")->capture_default_str();
    sub->add_option("--grid", o.grid, "grid points per axis")->capture_default_str();
    sub->add_option("--T", o.T, "final time")->capture_default_str();
    sub->add_option("--dt", o.dt, "coarsest step; each further level halves it")->capture_default_str();
    sub->add_option("--levels", o.levels, "number of step sizes")->capture_default_str();
    sub->add_option("--coupling", o.coupling, "coefficient of |phi|^2 phi")->capture_default_str();
    sub->add_option("--width", o.width, "Gaussian width of the random smooth datum")->capture_default_str();
  };
  auto datum = [&](const SolveOptions& o) {
    return smooth_random_field(TorusGeometry::unit(o.d, o.grid), common.seed, o.width);
  };

  SolveOptions v_duh_o;
  std::string traj_path, traj_dtype = "complex64";
  auto* v_duh = verify->add_subcommand("duhamel", "mild-solution defect of the split-step solution");
  add_solve(v_duh, v_duh_o);
  v_duh->add_option("--trajectory", traj_path, "binary dump of the finest trajectory");
  v_duh->add_option("--dtype", traj_dtype, "complex64 or complex128")->capture_default_str();
  add_common(v_duh, true, false);
  leaf_of(v_duh, "verify duhamel");

  SolveOptions v_hier_o;
  v_hier_o.T = 0.1;
  v_hier_o.dt = 1e-3;
  int hier_k = 1;
  bool hier_plane = false;
  HierarchyOptions hier_opts;
  auto* v_hier = verify->add_subcommand("hierarchy", "mild hierarchy defect of factorized NLS states");
  add_solve(v_hier, v_hier_o);
  v_hier->add_option("--k", hier_k, "order of the density matrix")->capture_default_str();
  v_hier->add_option("--check-points", hier_opts.check_points, "evaluation times")->capture_default_str();
  v_hier->add_option("--rank-budget", hier_opts.rank_budget, "maximum number of terms")->capture_default_str();
  v_hier->add_flag("--plane-wave", hier_plane, "use the exact plane wave e^{ix} instead of the solver");
  add_common(v_hier, true, true);
  leaf_of(v_hier, "verify hierarchy");

  int l25_m = 4, l25_trials = 10;
  double l25_t = 1.0;
  auto* v_l25 = verify->add_subcommand("product-identity", "ordered expansion of a product of Duhamel terms");
  v_l25->alias("lemma25");
  v_l25->add_option("--m", l25_m, "number of factors (1..6)")->capture_default_str();
  v_l25->add_option("--t", l25_t, "upper limit")->capture_default_str();
  v_l25->add_option("--trials", l25_trials, "random cubic-polynomial instances")->capture_default_str();
  add_common(v_l25, true, false);
  leaf_of(v_l25, "verify product-identity");

  SolveOptions v_gauge_o;
  v_gauge_o.d = 1;
  auto* v_gauge = verify->add_subcommand("gauge", "gauge transform and renormalized mild equation on the circle");
  add_solve(v_gauge, v_gauge_o);
  add_common(v_gauge, true, false);
  leaf_of(v_gauge, "verify gauge");

  SolveOptions v_exp_o;
  v_exp_o.d = 1;
  v_exp_o.T = 0.1;
  v_exp_o.dt = 0.0125;
  int exp_k = 1, exp_r = 2;
  ExpansionOptions exp_opts;
  auto* v_exp = verify->add_subcommand("expansion", "iterated Duhamel expansion over collision maps");
  add_solve(v_exp, v_exp_o);
  v_exp->add_option("--k", exp_k, "order")->capture_default_str();
  v_exp->add_option("--r", exp_r, "number of substitutions (1 or 2)")->capture_default_str();
  v_exp->add_option("--rank-budget", exp_opts.rank_budget, "maximum number of terms")->capture_default_str();
  add_common(v_exp, true, false);
  leaf_of(v_exp, "verify expansion");

  // ---- combinatorics ----
  auto* comb = app.add_subcommand("combinatorics", "collision maps");
  comb->require_subcommand(1);
  int comb_k = 1, comb_r = 1;
  auto* c_enum = comb->add_subcommand("enumerate", "list collision maps as 'k r : sigma(k+1) ... sigma(k+r)'");
  c_enum->add_option("--k", comb_k, "order k >= 1")->capture_default_str();
  c_enum->add_option("--r", comb_r, "collisions r >= 1")->capture_default_str();
  c_enum->add_option("--out", common.out, "write the list to a file");
  leaf_of(c_enum, "combinatorics enumerate");
  auto* c_count = comb->add_subcommand("count", "number of collision maps, (k+r-1)!/(k-1)!");
  c_count->add_option("--k", comb_k, "order k >= 1")->capture_default_str();
  c_count->add_option("--r", comb_r, "collisions r >= 1")->capture_default_str();
  leaf_of(c_count, "combinatorics count");

  // ---- params ----
  auto* params = app.add_subcommand("params", "admissible parameters");
  params->require_subcommand(1);
  std::string params_d = "2..6";
  auto* p_table = params->add_subcommand("table", "zeta0, alpha0, epsilon, s0, q0 in exact arithmetic");
  p_table->add_option("--d", params_d, "dimension or range A..B, d >= 2")->capture_default_str();
  p_table->add_option("--out", common.out, "CSV report path");
  leaf_of(p_table, "params table");

  // ---- replay ----
  std::string replay_manifest, replay_out;
  auto* rp = app.add_subcommand("replay", "re-run a recorded manifest");
  rp->add_option("manifest", replay_manifest, "manifest JSON written next to a report")->required();
  rp->add_option("--out", replay_out, "write the report here instead of the recorded path");
  leaf_of(rp, "replay");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << '\n' << app.help();
    return kExitUsage;
  }

  if (command == "replay") return replay(replay_manifest, replay_out, out, err, depth);

  if (command == "combinatorics count") {
    out << collision_map_count(comb_k, comb_r).str() << '\n';
    return kExitOk;
  }
  if (command == "combinatorics enumerate") {
    std::ostringstream lines;
    for_each_collision_map(comb_k, comb_r, [&](const CollisionMap& s) { lines << s.to_line() << '\n'; });
    if (common.out.empty()) {
      out << lines.str();
    } else {
      auto path = resolve_out(common.out);
      std::ofstream f(path);
      if (!f) throw std::runtime_error("cannot write " + path.string());
      f << lines.str();
      write_manifest(path, args, command, option_values(leaf), nullptr);
      out << "wrote " << path.string() << '\n';
    }
    return kExitOk;
  }

  if (command == "bench strichartz") {
    str.n_list = dyadic_list(str_nmin, str_nmax);
    job = [&] {
      str.seed = common.seed;
      str.threads = common.threads;
      return bench_strichartz(str);
    };
  } else if (command == "bench bernstein") {
    ber.n_list = dyadic_list(ber_nmin, ber_nmax);
    ber.q = parse_number(ber_q);
    job = [&] {
      ber.seed = common.seed;
      ber.threads = common.threads;
      return bench_bernstein(ber);
    };
  } else if (command == "bench trilinear") {
    job = [&] {
      tri.zeta = tri_zeta.value_or(boost::rational_cast<double>(admissible_parameters(tri.d).zeta0) + 0.05);
      for (const auto& t : tri_triples) {
        auto v = parse_list(t);
        if (v.size() != 3) throw std::invalid_argument("--triple needs N1,N2,N3");
        tri.triples.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])});
      }
      tri.seed = common.seed;
      tri.threads = common.threads;
      return bench_trilinear(tri);
    };
  } else if (command == "bench cubic-product") {
    cub.n_list = dyadic_list(cub_nmin, cub_nmax);
    job = [&] {
      cub.alpha = cub_alpha.value_or(boost::rational_cast<double>(admissible_parameters(cub.d).alpha0) + 0.05);
      cub.seed = common.seed;
      cub.threads = common.threads;
      return bench_cubic_product(cub);
    };
  } else if (command == "bench sobolev-product") {
    sp.n_list = dyadic_list(sp_nmin, sp_nmax);
    job = [&] {
      sp.seed = common.seed;
      sp.threads = common.threads;
      return bench_sobolev_product(sp);
    };
  } else if (command == "bench sobolev-embedding") {
    se.n_list = dyadic_list(se_nmin, se_nmax);
    job = [&] {
      se.seed = common.seed;
      se.threads = common.threads;
      return bench_sobolev_embedding(se);
    };
  } else if (command == "bench xsb-homogeneous") {
    job = [&] {
      xh.t_list = parse_list(xh_t);
      xh.threads = common.threads;
      return bench_linear_homogeneous(xh);
    };
  } else if (command == "bench xsb-inhomogeneous") {
    job = [&] {
      xi.t_list = parse_list(xi_t);
      xi.threads = common.threads;
      return bench_linear_inhomogeneous(xi);
    };
  } else if (command == "verify duhamel") {
    job = [&] {
      const auto& o = v_duh_o;
      auto phi0 = datum(o);
      auto dts = halving_steps(o.dt, o.levels);
      std::vector<double> res;
      double drift = 0.0;
      std::optional<Trajectory> finest;
      for (double dt : dts) {
        auto traj = solve_nls(phi0, o.T, dt, o.coupling);
        res.push_back(duhamel_residual(traj));
        drift = std::max(drift, max_relative_mass_drift(traj));
        finest = std::move(traj);
      }
      auto rep = convergence_report("verify-duhamel", dts, res);
      rep.seed = common.seed;
      rep.set("d", o.d);
      rep.set("grid_per_axis", o.grid);
      rep.set("T", o.T);
      rep.set("beta", default_residual_exponent(o.d));
      rep.set("max_relative_mass_drift", drift);
      rep.set("accept_mass_drift_below", 1e-11);
      rep.accepted = rep.accepted && drift < 1e-11;
      if (!traj_path.empty()) {
        if (traj_dtype != "complex64" && traj_dtype != "complex128")
          throw std::invalid_argument("--dtype must be complex64 or complex128");
        write_trajectory(*finest, resolve_out(traj_path),
                         traj_dtype == "complex64" ? TrajectoryDtype::kComplex64 : TrajectoryDtype::kComplex128);
        rep.set("trajectory", resolve_out(traj_path).string());
      }
      return rep;
    };
  } else if (command == "verify hierarchy") {
    job = [&] {
      const auto& o = v_hier_o;
      hier_opts.threads = common.threads;
      if (hier_plane) {
        const int modes[] = {1, 0, 0, 0, 0, 0};
        auto g = TorusGeometry::unit(o.d, o.grid);
        auto traj = plane_wave_trajectory(g, std::span<const int>(modes, static_cast<std::size_t>(o.d)), 1.0,
                                          o.coupling, o.T, o.dt);
        const double r = hierarchy_duhamel_residual(traj, hier_k, hier_opts);
        ExperimentReport rep;
        rep.name = "verify-hierarchy-plane-wave";
        rep.param_names = {"dt"};
        rep.rows.push_back(ReportRow{"residual", {o.dt}, r, 1.0, r, false});
        rep.set("k", hier_k);
        rep.set("accept_residual_below", 1e-9);
        rep.accepted = r < 1e-9;
        return rep;
      }
      auto phi0 = datum(o);
      auto dts = halving_steps(o.dt, o.levels);
      std::vector<double> res;
      for (double dt : dts) res.push_back(hierarchy_duhamel_residual(solve_nls(phi0, o.T, dt, o.coupling), hier_k, hier_opts));
      auto rep = convergence_report("verify-hierarchy", dts, res);
      rep.seed = common.seed;
      rep.set("k", hier_k);
      rep.set("d", o.d);
      rep.set("grid_per_axis", o.grid);
      rep.set("T", o.T);
      rep.set("zeta", hier_opts.zeta.value_or(default_zeta(o.d)));
      rep.set("check_points", hier_opts.check_points);
      return rep;
    };
  } else if (command == "verify product-identity") {
    job = [&] {
      ExperimentReport rep;
      rep.name = "verify-product-identity";
      rep.param_names = {"trial", "m"};
      rep.seed = common.seed;
      rep.trials = l25_trials;
      double worst = 0.0;
      for (int trial = 0; trial < l25_trials; ++trial) {
        std::mt19937_64 rng(derive_seed(common.seed, static_cast<std::uint64_t>(trial)));
        std::normal_distribution<double> gauss;
        std::vector<std::complex<double>> F;
        std::vector<std::array<std::complex<double>, 4>> coef(static_cast<std::size_t>(l25_m));
        for (int r = 0; r < l25_m; ++r) {
          F.emplace_back(gauss(rng), gauss(rng));
          for (auto& c : coef[r]) c = {gauss(rng), gauss(rng)};
        }
        std::vector<std::function<std::complex<double>(double)>> G;
        for (int r = 0; r < l25_m; ++r)
          G.push_back([c = coef[r]](double t) { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); });
        const double defect = verify_product_identity(F, G, l25_t);
        worst = std::max(worst, defect);
        rep.rows.push_back(ReportRow{"defect", {double(trial), double(l25_m)}, defect, 1.0, defect, false});
      }
      rep.set("t", l25_t);
      rep.set("max_defect", worst);
      rep.set("accept_defect_below", 1e-10);
      rep.accepted = worst < 1e-10;
      return rep;
    };
  } else if (command == "verify gauge") {
    job = [&] {
      const auto& o = v_gauge_o;
      if (o.d != 1) throw std::invalid_argument("verify gauge: the gauge transform is one-dimensional (--d 1)");
      auto phi0 = datum(o);
      auto dts = halving_steps(o.dt, o.levels);
      std::vector<double> res;
      for (double dt : dts) res.push_back(renormalized_duhamel_residual(gauge_transform(solve_nls(phi0, o.T, dt, o.coupling))));
      auto rep = convergence_report("verify-gauge", dts, res);
      rep.seed = common.seed;
      rep.set("grid", o.grid);
      rep.set("T", o.T);
      auto g = TorusGeometry::unit(1, o.grid);
      const int one[] = {1};
      auto wave = plane_wave(g, one);
      const double pw = max_abs_diff(renormalized_nonlinearity(wave), cplx(-1.0) * wave);
      rep.set("plane_wave_renormalized_defect", pw);
      rep.set("accept_plane_wave_defect_below", 1e-14);
      rep.accepted = rep.accepted && pw < 1e-14;
      return rep;
    };
  } else if (command == "verify expansion") {
    job = [&] {
      const auto& o = v_exp_o;
      auto phi0 = datum(o);
      auto dts = halving_steps(o.dt, o.levels);
      std::vector<double> res;
      for (double dt : dts)
        res.push_back(expansion_consistency(solve_nls(phi0, o.T, dt, o.coupling), exp_k, exp_r, exp_opts));
      auto rep = convergence_report("verify-expansion", dts, res);
      rep.seed = common.seed;
      rep.set("k", exp_k);
      rep.set("r", exp_r);
      rep.set("d", o.d);
      rep.set("grid_per_axis", o.grid);
      rep.set("T", o.T);
      return rep;
    };
  } else if (command == "params table") {
    job = [&] {
      auto [lo, hi] = parse_range(params_d);
      return params_table(lo, hi);
    };
  } else {
    err << "unknown command\n" << app.help();
    return kExitUsage;
  }

  ExperimentReport rep = job();
  if (command == "params table")
    print_params_table(rep, out);
  else
    print_summary(rep, out);
  if (!common.out.empty()) {
    auto path = resolve_out(common.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_report(rep, path, timestamp());
    write_manifest(path, args, command, option_values(leaf), &rep);
    out << "wrote " << path.string() << " and " << manifest_path(path).string() << '\n';
  }
  return rep.accepted ? kExitOk : kExitRejected;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err, 0);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace nlslab::cli
