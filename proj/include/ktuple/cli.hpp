// cli.hpp
// Command-line front end. Every run prints one header line echoing the
// effective configuration, then one record per line (JSON) or per row (TSV).

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ktuple::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ktuple::cli
