#include "nlslab/report_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlslab {
namespace {

constexpr const char* kTitle = "# nlslab report ";
constexpr const char* kStamp = "# timestamp ";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("read_report: bad number '" + s + "'");
  }
  if (pos != s.size()) throw std::runtime_error("read_report: bad number '" + s + "'");
  return v;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

void write_report(const ExperimentReport& report, std::ostream& out, const std::string& timestamp) {
  out << kTitle << report.name << '\n';
  if (!timestamp.empty()) out << kStamp << timestamp << '\n';
  out << "kind";
  for (const auto& p : report.param_names) out << ',' << p;
  out << ",lhs,rhs,ratio,in_fit\n";
  for (const auto& r : report.rows) {
    if (r.params.size() != report.param_names.size())
      throw std::invalid_argument("write_report: row has " + std::to_string(r.params.size()) + " parameters, header has " +
                                  std::to_string(report.param_names.size()));
    out << r.kind;
    for (double v : r.params) out << ',' << format_double(v);
    out << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.ratio) << ','
        << (r.in_fit ? 1 : 0) << '\n';
  }
  out << "# seed=" << report.seed << '\n';
  out << "# trials=" << report.trials << '\n';
  if (!report.fit_variable.empty()) out << "# fit_variable=" << report.fit_variable << '\n';
  for (const auto& [k, v] : report.metadata) out << "# " << k << '=' << v << '\n';
  out << "# evidence_not_proof=true\n";
  out << "# accepted=" << (report.accepted ? "true" : "false") << '\n';
}

void write_report(const ExperimentReport& report, const std::filesystem::path& path, const std::string& timestamp) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_report: cannot open " + path.string());
  write_report(report, f, timestamp);
  if (!f) throw std::runtime_error("write_report: write failed for " + path.string());
}

ExperimentReport read_report(std::istream& in) {
  ExperimentReport rep;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (starts_with(line, kTitle)) {
      rep.name = line.substr(std::strlen(kTitle));
      continue;
    }
    if (starts_with(line, kStamp)) continue;
    if (line[0] == '#') {
      auto body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      auto key = body.substr(0, eq), value = body.substr(eq + 1);
      if (key == "seed")
        rep.seed = std::stoull(value);
      else if (key == "trials")
        rep.trials = std::stoi(value);
      else if (key == "fit_variable")
        rep.fit_variable = value;
      else if (key == "accepted")
        rep.accepted = value == "true";
      else if (key != "evidence_not_proof")
        rep.metadata.emplace_back(key, value);
      continue;
    }
    auto cells = split(line, ',');
    if (!header) {
      if (cells.size() < 5 || cells.front() != "kind") throw std::runtime_error("read_report: missing header row");
      rep.param_names.assign(cells.begin() + 1, cells.end() - 4);
      header = true;
      continue;
    }
    if (cells.size() != rep.param_names.size() + 5)
      throw std::runtime_error("read_report: row width mismatch in '" + line + "'");
    ReportRow r;
    r.kind = cells[0];
    for (std::size_t i = 0; i < rep.param_names.size(); ++i) r.params.push_back(parse_double(cells[1 + i]));
    const std::size_t o = 1 + rep.param_names.size();
    r.lhs = parse_double(cells[o]);
    r.rhs = parse_double(cells[o + 1]);
    r.ratio = parse_double(cells[o + 2]);
    r.in_fit = cells[o + 3] == "1";
    rep.rows.push_back(std::move(r));
  }
  if (!header) throw std::runtime_error("read_report: missing header row");
  if (auto s = rep.get("fitted_slope")) {
    ExponentFit fit;
    fit.slope = parse_double(*s);
    if (auto v = rep.get("fitted_intercept")) fit.intercept = parse_double(*v);
    if (auto v = rep.get("fit_residual")) fit.residual = parse_double(*v);
    rep.fit = fit;
  }
  return rep;
}

ExperimentReport read_report(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_report: cannot open " + path.string());
  return read_report(f);
}

std::string report_body(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  while (std::getline(is, line))
    if (!starts_with(line, kStamp)) out += line + '\n';
  return out;
}

namespace {

constexpr std::array<char, 8> kMagic{'N', 'L', 'S', 'T', 'R', 'A', 'J', '\0'};

template <class T>
void put(std::ostream& out, T v) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.write(reinterpret_cast<const char*>(b.data()), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(T)> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), sizeof(T)))
    throw std::runtime_error("read_trajectory: truncated file " + path.string());
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

}  // namespace

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path, TrajectoryDtype dtype) {
  if (dtype != TrajectoryDtype::kComplex64 && dtype != TrajectoryDtype::kComplex128)
    throw std::invalid_argument("write_trajectory: unknown dtype");
  if (traj.times.size() != traj.states.size()) throw std::invalid_argument("write_trajectory: times/states mismatch");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_trajectory: cannot open " + path.string());
  const auto& g = traj.geometry;
  f.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(f, 1);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(dtype));
  put<std::uint32_t>(f, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(f, 0);
  put<double>(f, traj.coupling);
  put<std::uint64_t>(f, traj.states.size());
  for (double th : g.thetas()) put<double>(f, th);
  for (int m : g.grid()) put<std::uint32_t>(f, static_cast<std::uint32_t>(m));
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    require_same_geometry(g, traj.states[i].geometry(), "write_trajectory");
    put<double>(f, traj.times[i]);
    for (const auto& c : traj.states[i].coeffs()) {
      if (dtype == TrajectoryDtype::kComplex64) {
        put<float>(f, static_cast<float>(c.real()));
        put<float>(f, static_cast<float>(c.imag()));
      } else {
        put<double>(f, c.real());
        put<double>(f, c.imag());
      }
    }
  }
  if (!f) throw std::runtime_error("write_trajectory: write failed for " + path.string());
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_trajectory: cannot open " + path.string());
  std::array<char, 8> magic{};
  if (!f.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("read_trajectory: bad magic in " + path.string());
  if (get<std::uint32_t>(f, path) != 1) throw std::runtime_error("read_trajectory: unsupported version");
  const auto dtype = static_cast<TrajectoryDtype>(get<std::uint32_t>(f, path));
  if (dtype != TrajectoryDtype::kComplex64 && dtype != TrajectoryDtype::kComplex128)
    throw std::runtime_error("read_trajectory: unknown dtype in " + path.string());
  const auto d = get<std::uint32_t>(f, path);
  if (d < 1 || d > 16) throw std::runtime_error("read_trajectory: bad dimension in " + path.string());
  get<std::uint32_t>(f, path);
  const double coupling = get<double>(f, path);
  const auto slices = get<std::uint64_t>(f, path);
  std::vector<double> thetas(d);
  std::vector<int> grid(d);
  for (auto& th : thetas) th = get<double>(f, path);
  for (auto& m : grid) m = static_cast<int>(get<std::uint32_t>(f, path));
  Trajectory traj{TorusGeometry(thetas, grid), {}, {}, coupling};
  for (std::uint64_t s = 0; s < slices; ++s) {
    traj.times.push_back(get<double>(f, path));
    SpectralField phi(traj.geometry);
    for (auto& c : phi.coeffs()) {
      if (dtype == TrajectoryDtype::kComplex64) {
        const float re = get<float>(f, path);
        const float im = get<float>(f, path);
        c = cplx(re, im);
      } else {
        const double re = get<double>(f, path);
        const double im = get<double>(f, path);
        c = cplx(re, im);
      }
    }
    traj.states.push_back(std::move(phi));
  }
  return traj;
}

}  // namespace nlslab
