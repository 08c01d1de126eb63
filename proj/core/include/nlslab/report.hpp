#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nlslab {

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  // RMS of the log-log residuals
  double residual = 0.0;
  std::size_t points = 0;
};

// least squares of log(ratio) against log(x); needs >= 3 distinct positive x
ExponentFit fit_exponent(std::span<const std::pair<double, double>> rows);

struct ReportRow {
  std::string kind;
  std::vector<double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool in_fit = false;
};

// Output of every bench: rows of (parameters, LHS, RHS, ratio), the fit over rows flagged in_fit
// (abscissa: the parameter named fit_variable), and ordered footer metadata.
struct ExperimentReport {
  std::string name;
  std::vector<std::string> param_names;
  std::string fit_variable;
  std::vector<ReportRow> rows;
  std::optional<ExponentFit> fit;
  std::uint64_t seed = 0;
  int trials = 0;
  bool accepted = true;
  std::vector<std::pair<std::string, std::string>> metadata;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  std::optional<std::string> get(const std::string& key) const;
  // refit from rows flagged in_fit
  ExponentFit refit() const;
};

std::string format_double(double v);

}  // namespace nlslab
