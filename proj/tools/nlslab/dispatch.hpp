#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlslab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRejected = 2;

// args excludes the program name; returns 0 on success, 2 when an acceptance check fails, 1 on usage errors
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "2..6" or "4"
std::pair<int, int> parse_range(const std::string& s);
// nmin, 2 nmin, ..., nmax
std::vector<int> dyadic_list(int nmin, int nmax);

}  // namespace nlslab::cli
