#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace speclift::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kComputed = 0, kValidation = 2, kNumerical = 3 };

struct Options {
  std::string command;
  std::string input;
  std::string output;  // empty: standard output
  std::uint64_t seed = 0;
  std::optional<double> rank_tol;
  std::optional<double> cluster_tol;
  std::optional<std::string> reading;
  std::size_t samples = 200;
  std::size_t index = 0;  // jordan, dseq
  std::size_t node = 0;   // check-local
  std::size_t from = 0;   // connect
  std::size_t to = 1;     // connect
  std::string lifting;    // verify
};

/// Runs one command; writes the report and returns the exit code.
/// Validation problems go to stderr with a field path and return 2.
int run(const Options& opt);

}  // namespace speclift::cli
