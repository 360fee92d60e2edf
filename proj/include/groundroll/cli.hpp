#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace grl::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageOrFormat = 1;
inline constexpr int kNotConverged = 2;

/// Entry point for the `groundroll` executable. Subcommands: synth, mask,
/// separate, baseline, metrics, render, spectrum.
int run(int argc, char **argv, std::ostream &out, std::ostream &err);

/// Same, with arguments excluding the program name.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

} // namespace grl::cli
