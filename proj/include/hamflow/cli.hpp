#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hamflow/expansion.hpp"

namespace hamflow {

struct RunConfig {
  std::string command;  // validate | compile | solve | verify | report
  std::string instance_path;
  std::string costs_path;
  std::optional<double> alpha;
  std::string method = "exact";  // exact | anneal | bruteforce
  std::size_t samples = 40;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string solution_path;
  std::string tables_path;
  bool prune = true;
  double time_limit = 300.0;
  std::size_t sweeps = 0;  // 0: solver default
};

// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // invalid input, infeasible model, I/O failure
inline constexpr int kExitUsage = 2;

// Entry point of the hamflow tool. Data goes to `out`, diagnostics to `err`.
// HAMFLOW_SEED supplies the seed when --seed is absent.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Solution files map variable names (Model::describe) to nonzero values.
std::string solution_json(const Model& model, const Assignment& assignment, double objective);
Assignment parse_solution(const Model& model, const std::string& text);

}  // namespace hamflow
