#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gapvi/homotopy.hpp"
#include "gapvi/problems.hpp"

namespace gapvi::cli {

inline constexpr int kExitSolved = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitStationary = 2;
inline constexpr int kExitUnsolved = 3;

int exit_code(SolveStatus s);
int exit_code(HomotopyStatus s);

struct BuiltinOptions {
  std::string preset = "uniform_ones";  // nguyen_dupuis cost preset
  std::size_t n1 = 3, n2 = 2;           // bimatrix_random
  std::uint64_t max_entry = 10;
  std::uint64_t seed = 0;
  Vector omega{-2.0};  // toy_gan
};

std::vector<std::string> builtin_names();
ProblemPtr make_builtin(const std::string& name, const BuiltinOptions& opts = {});
// Builds from a .game or .tep file.
ProblemPtr load_problem_file(const std::string& path);

// One line per builtin: "<name> d=<dim> ... lambda=<..> alpha=<..>".
void list_problems(std::ostream& out);

// Comma-separated numbers; each entry may be a fraction "p/q".
Vector parse_vector(std::string_view text);

void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in);

// Git blob object id: SHA-1 of "blob <size>\0" followed by the content.
std::string content_hash(std::string_view content);

// Entry point for the gapvi tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gapvi::cli
