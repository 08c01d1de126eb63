#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "nlslab/nls.hpp"
#include "nlslab/report.hpp"

namespace nlslab {

// CSV: a "# nlslab report <name>" line, an optional "# timestamp ..." line, the header row
// kind,<params>,lhs,rhs,ratio,in_fit, one row per ReportRow with %.17g numbers, then "# key=value" footers.
void write_report(const ExperimentReport& report, std::ostream& out, const std::string& timestamp = {});
void write_report(const ExperimentReport& report, const std::filesystem::path& path,
                  const std::string& timestamp = {});
ExperimentReport read_report(std::istream& in);
ExperimentReport read_report(const std::filesystem::path& path);

// drops the timestamp comment so two reports can be compared byte for byte
std::string report_body(const std::string& csv);

enum class TrajectoryDtype : std::uint32_t { kComplex64 = 1, kComplex128 = 2 };

// Binary layout, little-endian:
//   "NLSTRAJ\0", u32 version = 1, u32 dtype, u32 d, u32 reserved = 0, f64 coupling, u64 slices,
//   d x f64 theta, d x u32 M, then per slice f64 t followed by (re, im) pairs in storage order.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                      TrajectoryDtype dtype = TrajectoryDtype::kComplex64);
Trajectory read_trajectory(const std::filesystem::path& path);

}  // namespace nlslab
