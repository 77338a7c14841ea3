// Subcommands of the robust-hedge tool. Each returns a process exit code.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace robust_hedge::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kPreconditionError = 3,
};

/// `method` is one of saddle, corner, both. An empty output path writes to `out`.
int run_solve(const std::filesystem::path& input, std::string_view method,
              const std::filesystem::path& output, std::ostream& out, std::ostream& err);

int run_verify(const std::filesystem::path& input, int grid, int samples, std::uint64_t seed,
               std::ostream& out, std::ostream& err);

int run_sweep_x0(const std::filesystem::path& input, double x0_min, double x0_max, int steps,
                 const std::filesystem::path& csv, std::ostream& out, std::ostream& err);

int run_decompose(const std::filesystem::path& samples, double x0,
                  const std::filesystem::path& output, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the commands above.
int run_main(int argc, char** argv);

}  // namespace robust_hedge::cli
