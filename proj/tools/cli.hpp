#pragma once

#include <ostream>
#include <span>
#include <string>

namespace rwnet::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kNumericalError = 2;

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out`; diagnostics and warnings go to `err`. Relative output file paths
/// are resolved against $RWNET_OUTPUT_DIR when it is set.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace rwnet::cli
