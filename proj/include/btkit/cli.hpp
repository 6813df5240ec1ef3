#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that it can be driven from tests.
//
//   btkit classic {laplace|liouville|sine-gordon} [flags]
//   btkit em {vacuum|medium|conductor} [flags]
//   btkit chiral {residual|potential|hierarchy} [flags]
//   btkit verify <spec-file>

#include <ostream>
#include <string>
#include <vector>

namespace btkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitUsage = 64;

/// args excludes the program name. JSON/CSV go to `out` unless an output
/// path is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace btkit::cli
