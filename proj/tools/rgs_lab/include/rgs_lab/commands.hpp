#pragma once

// Subcommands of rgs-lab. Each returns the process exit code:
// 0 success, 1 usage or config error, 2 verification failure, 3 runtime failure.

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "rgs_lab/svg_plot.hpp"

namespace rgs::lab {

enum ExitCode : int { kOk = 0, kUsage = 1, kVerifyFailed = 2, kRuntime = 3 };

// Writes matrix.txt, rhs.txt, x_star.txt and metadata.json to output_dir.
int cmd_gen(const std::filesystem::path& config, bool full, std::ostream& out, std::ostream& err);
// Runs the Monte Carlo experiment and writes output_dir/trace.csv.
int cmd_run(const std::filesystem::path& config, bool full, std::ostream& out, std::ostream& err);
// Without a config the default settings are used and nothing is written to disk.
int cmd_verify(const std::optional<std::filesystem::path>& config, std::ostream& out,
               std::ostream& err);
int cmd_plot(const std::filesystem::path& csv, const PlotOptions& options,
             const std::filesystem::path& output, std::ostream& out, std::ostream& err);

// Full command line front end (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rgs::lab
