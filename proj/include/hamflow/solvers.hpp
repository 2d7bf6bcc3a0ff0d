#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamflow/expansion.hpp"
#include "hamflow/hamiltonian.hpp"

namespace hamflow {

// One solver output. Exact solvers report energy == objective, since a
// feasible assignment has zero penalty.
struct Sample {
  Assignment assignment;
  double energy = 0.0;
  double objective = 0.0;
  bool feasible = false;
  std::size_t restart_index = 0;
  double wall_time = 0.0;  // seconds
};

enum class SolveStatus {
  optimal,     // proven optimal
  time_limit,  // incumbent (if any) not proven optimal
  infeasible,  // proven: no assignment satisfies the constraints
};

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Sample> best;
  std::uint64_t nodes = 0;
};

// Depth-first branch-and-bound over vehicle counts, most expensive arcs
// first. Each node is bounded by the fixed vehicle cost plus a min-cost flow
// of the remaining mass priced at cost/capacity per unit, and pruned when a
// per-commodity or aggregate max-flow shows the fixed capacities cannot carry
// the schedule. Leaves are settled by an exact joint routing search.
SolveResult solve_exact(const Model& model, double time_limit_seconds = 300.0);

// Exhaustive enumeration of every assignment inside the bounds. Throws
// SearchSpaceTooLarge when prod(ub + 1) exceeds `max_space`.
SolveResult brute_force_oracle(const Model& model, std::uint64_t max_space = 10'000'000);

struct AnnealParams {
  std::size_t restarts = 40;
  std::size_t sweeps = 4000;  // one sweep = one move attempt per decision variable
  double initial_temperature = 1.0;
  double final_temperature = 1e-3;
  bool single_moves = true;  // one variable by +-1
  bool paired_moves = true;  // flow by +-1 with its arc's vehicle count refitted
  unsigned threads = 1;
};

// Temperatures scaled to the Hamiltonian: hot enough to cross a single
// conservation violation, cold enough to settle vehicle counts.
AnnealParams default_anneal_params(const Hamiltonian& hamiltonian, const Model& model);

struct SampleSet {
  std::vector<Sample> samples;  // ordered by (energy, restart_index)
  std::uint64_t seed = 0;
  AnnealParams params;
};

// Independent simulated-annealing chains over integer points inside the
// bounds. Chain i draws from a stream seeded by (seed, i) only, so results do
// not depend on thread count. Slacks always sit at their best value.
SampleSet anneal_sample(const Hamiltonian& hamiltonian, const Model& model,
                        const AnnealParams& params, std::uint64_t seed);

struct PostprocessResult {
  Assignment assignment;
  FeasibilityReport report;
};

// Zeroes every flow on an (arc, time) that has no vehicle.
PostprocessResult postprocess_flows(const Model& model, const Assignment& assignment);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

struct SummaryStats {
  std::size_t count = 0;
  double best_energy = 0.0;
  double median_energy = 0.0;
  double worst_energy = 0.0;
  double feasible_fraction = 0.0;
  double mean_wall_time = 0.0;
  std::vector<HistogramBin> bins;
};

// Fixed-width energy histogram spanning the observed range. Throws Error on
// an empty set.
SummaryStats summarize_samples(const SampleSet& samples, std::size_t bin_count = 20);

// restart_index,energy,objective,feasible[,wall_time_s]
std::string samples_csv(const SampleSet& samples, bool include_timing = true);

}  // namespace hamflow
