#include "nlslab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlslab {

double AdmissibleParameters::epsilon_value() const {
  return boost::rational_cast<double>(epsilon) + (epsilon_zero_plus ? plus_offset : 0.0);
}

AdmissibleParameters admissible_parameters(int d) {
  if (d < 2) throw std::invalid_argument("admissible_parameters: d must be >= 2 (d = 1 is the Fourier-Lebesgue setting)");
  AdmissibleParameters a;
  a.d = d;
  const std::int64_t n = d;
  if (d <= 4) {
    a.zeta0 = Rational(n * (n - 1), 2 * (n + 2));
    a.alpha0 = Rational(n * (n + 5), 6 * (n + 2));
    a.epsilon = Rational(4 - n, 2 * (n + 2));
    a.q0 = Rational(2 * (n + 2), 2 * n + 1);
  } else {
    a.zeta0 = Rational(n, 2) - 1;
    a.alpha0 = Rational(n, 6) + Rational(1, 3);
    a.epsilon = 0;
    a.q0 = Rational(n, n - 1);
  }
  if (a.epsilon <= 0) {
    a.epsilon = 0;
    a.epsilon_zero_plus = true;
  }
  a.s0 = std::max({a.zeta0, a.alpha0, Rational(n, 4)});
  return a;
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

ExperimentReport params_table(int d_min, int d_max) {
  if (d_min < 2 || d_max < d_min) throw std::invalid_argument("params table: need 2 <= d_min <= d_max");
  ExperimentReport rep;
  rep.name = "params-table";
  rep.param_names = {"d", "zeta0", "alpha0", "epsilon", "s0", "q0", "d_over_q0_minus_d_over_2"};
  bool ok = true;
  for (int d = d_min; d <= d_max; ++d) {
    auto a = admissible_parameters(d);
    const Rational rel = Rational(d) / a.q0 - Rational(d, 2);
    ok = ok && rel == a.zeta0 && a.s0 == std::max({a.zeta0, a.alpha0, Rational(d, 4)});
    ReportRow row;
    row.kind = "exact";
    row.params = {static_cast<double>(d), boost::rational_cast<double>(a.zeta0), boost::rational_cast<double>(a.alpha0),
                  a.epsilon_value(), boost::rational_cast<double>(a.s0), boost::rational_cast<double>(a.q0),
                  boost::rational_cast<double>(rel)};
    row.lhs = boost::rational_cast<double>(a.s0);
    row.rhs = boost::rational_cast<double>(a.s0);
    row.ratio = 1.0;
    rep.rows.push_back(row);
    const std::string key = "d" + std::to_string(d);
    rep.set(key + ".zeta0", to_string(a.zeta0));
    rep.set(key + ".alpha0", to_string(a.alpha0));
    rep.set(key + ".epsilon", to_string(a.epsilon) + (a.epsilon_zero_plus ? "+" : ""));
    rep.set(key + ".s0", to_string(a.s0));
    rep.set(key + ".q0", to_string(a.q0));
    if (d == 2) ok = ok && a.s0 == Rational(7, 12);
    if (d == 3) ok = ok && a.s0 == Rational(4, 5);
    if (d >= 4) ok = ok && a.s0 == Rational(d, 2) - 1;
  }
  rep.accepted = ok;
  rep.set("check", "s0=max(zeta0,alpha0,d/4); d/q0-d/2=zeta0; s0(2)=7/12; s0(3)=4/5; s0(d>=4)=d/2-1");
  return rep;
}

ExponentFit fit_exponent(std::span<const std::pair<double, double>> rows) {
  std::vector<double> xs, ys;
  for (const auto& [x, r] : rows) {
    if (!(x > 0.0) || !(r > 0.0)) throw std::invalid_argument("fit_exponent: abscissa and ratio must be positive");
    xs.push_back(std::log(x));
    ys.push_back(std::log(r));
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 distinct abscissae");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = xs.size();
  return fit;
}

void ExperimentReport::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata)
    if (k == key) {
      v = value;
      return;
    }
  metadata.emplace_back(key, value);
}

void ExperimentReport::set(const std::string& key, double value) { set(key, format_double(value)); }

std::optional<std::string> ExperimentReport::get(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

ExponentFit ExperimentReport::refit() const {
  auto it = std::find(param_names.begin(), param_names.end(), fit_variable);
  if (it == param_names.end()) throw std::invalid_argument("refit: report has no fit variable");
  const auto col = static_cast<std::size_t>(it - param_names.begin());
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    if (r.in_fit) pts.emplace_back(r.params.at(col), r.ratio);
  return fit_exponent(pts);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<double> graded_time_grid(double T, double lambda_max, double coarse_step) {
  if (!(T > 0.0)) throw std::invalid_argument("graded_time_grid: T must be positive");
  double h = std::min(coarse_step, 0.25 / std::max(1.0, lambda_max));
  std::vector<double> t{0.0};
  while (t.back() < T) {
    double next = t.back() + h;
    if (next > T - 0.25 * h) next = T;
    t.push_back(next);
    h = std::min(coarse_step, 1.25 * h);
  }
  return t;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::uint64_t s = mix(base);
  s = mix(s ^ a);
  s = mix(s ^ b);
  return mix(s ^ c);
}

}  // namespace nlslab
