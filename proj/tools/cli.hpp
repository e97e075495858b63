#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace thf::cli {

enum class Command { moments, form_eval, section_spectrum, diagnose, outer, bridge_check };

enum ExitCode : int { kOk = 0, kValidation = 2, kNonConvergence = 3 };

struct RunConfig {
  Command command = Command::moments;
  std::string input;
  std::string output;  // empty: standard output
  std::size_t n_max = 64;
  std::size_t section_size = 64;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  std::string grid = "log:0.1:50:24";
  std::string f = "e0";
  double radius = 0.99;
  std::size_t points = 64;
  std::string format = "json";
  std::vector<std::size_t> sections{256, 1024, 2048};
};

/// Executes one command. Errors go to `err`; the artifact goes to `output` or `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a config and runs it. Parse errors exit with kValidation.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

std::vector<double> parse_grid(const std::string& spec);

}  // namespace thf::cli
