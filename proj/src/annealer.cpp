#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "hamflow/error.hpp"
#include "hamflow/format.hpp"
#include "hamflow/solvers.hpp"

namespace hamflow {

namespace {

using Clock = std::chrono::steady_clock;

// Incremental energy of H over decision values, with every slack held at the
// value that minimises its row's residual.
class Chain {
 public:
  Chain(const Hamiltonian& hamiltonian, const Model& model, const AnnealParams& params,
        std::size_t restart, std::uint64_t seed)
      : model_(model), params_(params), alpha_(hamiltonian.alpha()) {
    std::seed_seq sequence{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(restart),
                           static_cast<std::uint32_t>(restart >> 32)};
    rng_.seed(sequence);

    const auto& variables = model.variables();
    const auto& rows = model.constraints();
    values_.assign(variables.size(), 0);
    cost_.assign(variables.size(), 0.0);
    for (const ObjectiveTerm& term : model.objective()) cost_[term.variable] += term.cost;
    columns_.resize(variables.size());
    slack_levels_.assign(rows.size(), -1);
    activity_.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const Term& t : rows[r].terms) columns_[t.variable].emplace_back(r, t.coefficient);
      if (const auto slack = hamiltonian.slack_for(r)) {
        slack_levels_[r] = hamiltonian.variables()[*slack].levels;
      }
      activity_[r] = -rows[r].rhs;
    }
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (variables[i].kind == VariableKind::flow) {
        flows_.push_back(i);
        vehicle_of_.push_back(model.vehicle_variable(variables[i].arc, variables[i].time));
      }
    }
    energy_ = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) energy_ += alpha_ * penalty(r, activity_[r]);
  }

  Assignment run() {
    const std::size_t n = values_.size();
    Assignment best{values_};
    double best_energy = energy_;
    if (n == 0) return best;
    const double t0 = params_.initial_temperature;
    const double t1 = params_.final_temperature;
    const std::size_t sweeps = std::max<std::size_t>(params_.sweeps, 1);
    const bool paired = params_.paired_moves && !flows_.empty();
    const bool single = params_.single_moves || !paired;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
      const double progress = sweeps == 1 ? 1.0 : static_cast<double>(sweep) / (sweeps - 1);
      const double temperature = t0 * std::pow(t1 / t0, progress);
      for (std::size_t step = 0; step < n; ++step) {
        const bool use_pair = paired && (!single || (rng_() & 1U));
        const std::int64_t delta = (rng_() & 1U) ? 1 : -1;
        if (use_pair) {
          paired_move(rng_() % flows_.size(), delta, temperature);
        } else {
          single_move(rng_() % n, delta, temperature);
        }
        if (energy_ < best_energy - 1e-9) {
          best_energy = energy_;
          best.values = values_;
        }
      }
    }
    return best;
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  bool accept(double delta, double temperature) {
    return delta <= 0.0 || uniform() < std::exp(-delta / temperature);
  }

  double penalty(std::size_t r, std::int64_t activity) const {
    std::int64_t residual = activity;
    const std::int64_t levels = slack_levels_[r];
    if (levels >= 0) {
      if (activity > 0) {
        residual = activity;
      } else if (activity < -levels) {
        residual = activity + levels;
      } else {
        residual = 0;
      }
    }
    return static_cast<double>(residual) * static_cast<double>(residual);
  }

  bool in_bounds(std::size_t v, std::int64_t delta) const {
    const std::int64_t next = values_[v] + delta;
    return next >= 0 && next <= model_.variables()[v].upper_bound;
  }

  double shift(std::size_t v, std::int64_t delta) {
    double change = cost_[v] * static_cast<double>(delta);
    for (const auto& [r, a] : columns_[v]) {
      const std::int64_t before = activity_[r];
      activity_[r] += a * delta;
      change += alpha_ * (penalty(r, activity_[r]) - penalty(r, before));
    }
    values_[v] += delta;
    energy_ += change;
    return change;
  }

  void single_move(std::size_t v, std::int64_t delta, double temperature) {
    if (!in_bounds(v, delta)) return;
    const double change = shift(v, delta);
    if (!accept(change, temperature)) shift(v, -delta);
  }

  // Moves one flow unit and refits the arc's vehicle count to its new load.
  void paired_move(std::size_t which, std::int64_t delta, double temperature) {
    const std::size_t f = flows_[which];
    if (!in_bounds(f, delta)) return;
    double change = shift(f, delta);
    std::int64_t vehicle_delta = 0;
    if (const auto z = vehicle_of_[which]) {
      const Variable& fv = model_.variables()[f];
      std::int64_t load = 0;
      for (std::size_t k = 0; k < model_.instance().commodities().size(); ++k) {
        if (const auto x = model_.flow_variable(fv.arc, k, fv.time)) {
          load += values_[*x] * model_.instance().commodities()[k].load;
        }
      }
      const std::int64_t capacity = model_.instance().capacity();
      const std::int64_t wanted = std::clamp<std::int64_t>(
          (load + capacity - 1) / capacity, 0, model_.variables()[*z].upper_bound);
      vehicle_delta = wanted - values_[*z];
      if (vehicle_delta != 0) change += shift(*z, vehicle_delta);
    }
    if (!accept(change, temperature)) {
      if (vehicle_delta != 0) shift(*vehicle_of_[which], -vehicle_delta);
      shift(f, -delta);
    }
  }

  const Model& model_;
  const AnnealParams& params_;
  double alpha_;
  std::mt19937_64 rng_;
  std::vector<std::int64_t> values_;
  std::vector<double> cost_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> columns_;
  std::vector<std::int64_t> slack_levels_;
  std::vector<std::int64_t> activity_;
  std::vector<std::size_t> flows_;
  std::vector<std::optional<std::size_t>> vehicle_of_;
  double energy_ = 0.0;
};

Sample finish(const Hamiltonian& hamiltonian, const Model& model, const Assignment& raw,
              std::size_t restart) {
  PostprocessResult cleaned = postprocess_flows(model, raw);
  Sample sample;
  sample.restart_index = restart;
  sample.feasible = cleaned.report.feasible;
  sample.objective = evaluate_objective(model, cleaned.assignment);
  sample.energy =
      hamiltonian.integer_energy(encode_assignment(hamiltonian, model, cleaned.assignment));
  sample.assignment = std::move(cleaned.assignment);
  return sample;
}

}  // namespace

AnnealParams default_anneal_params(const Hamiltonian& hamiltonian, const Model& model) {
  AnnealParams params;
  std::int64_t smallest_load = 1;
  if (!model.instance().commodities().empty()) {
    smallest_load = model.instance().commodities().front().load;
    for (const Commodity& c : model.instance().commodities()) {
      smallest_load = std::min(smallest_load, c.load);
    }
  }
  double smallest_cost = 0.0;
  for (const ObjectiveTerm& term : model.objective()) {
    if (term.cost > 0.0 && (smallest_cost == 0.0 || term.cost < smallest_cost)) {
      smallest_cost = term.cost;
    }
  }
  if (smallest_cost == 0.0) smallest_cost = 1.0;
  params.initial_temperature =
      hamiltonian.alpha() * static_cast<double>(smallest_load * smallest_load);
  params.final_temperature = 0.05 * smallest_cost;
  return params;
}

SampleSet anneal_sample(const Hamiltonian& hamiltonian, const Model& model,
                        const AnnealParams& params, std::uint64_t seed) {
  if (params.restarts == 0) throw ValidationError("annealing needs at least one restart");
  if (!(params.initial_temperature > 0.0) || !(params.final_temperature > 0.0) ||
      params.final_temperature > params.initial_temperature) {
    throw ValidationError("temperatures must be positive with final <= initial");
  }
  if (hamiltonian.decision_count() != model.variables().size()) {
    throw ValidationError("Hamiltonian was not compiled from this model");
  }

  std::vector<Sample> samples(params.restarts);
  auto run_restart = [&](std::size_t restart) {
    const auto start = Clock::now();
    Chain chain(hamiltonian, model, params, restart, seed);
    samples[restart] = finish(hamiltonian, model, chain.run(), restart);
    samples[restart].wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(params.threads, params.restarts));
  if (workers == 1) {
    for (std::size_t r = 0; r < params.restarts; ++r) run_restart(r);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < params.restarts; r += workers) run_restart(r);
      });
    }
  }

  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.restart_index < b.restart_index;
  });
  return SampleSet{std::move(samples), seed, params};
}

PostprocessResult postprocess_flows(const Model& model, const Assignment& assignment) {
  PostprocessResult result{assignment, {}};
  const auto& variables = model.variables();
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const Variable& v = variables[i];
    if (v.kind != VariableKind::flow) continue;
    const auto z = model.vehicle_variable(v.arc, v.time);
    if (!z || assignment.values.at(*z) == 0) result.assignment.values[i] = 0;
  }
  result.report = verify_assignment(model, result.assignment);
  return result;
}

SummaryStats summarize_samples(const SampleSet& set, std::size_t bin_count) {
  if (set.samples.empty()) throw Error("cannot summarise an empty sample set");
  if (bin_count == 0) throw ValidationError("histogram needs at least one bin");
  SummaryStats stats;
  stats.count = set.samples.size();
  std::vector<double> energies;
  std::size_t feasible = 0;
  double wall = 0.0;
  for (const Sample& s : set.samples) {
    energies.push_back(s.energy);
    feasible += s.feasible ? 1 : 0;
    wall += s.wall_time;
  }
  std::sort(energies.begin(), energies.end());
  const std::size_t n = energies.size();
  stats.best_energy = energies.front();
  stats.worst_energy = energies.back();
  stats.median_energy =
      n % 2 == 1 ? energies[n / 2] : 0.5 * (energies[n / 2 - 1] + energies[n / 2]);
  stats.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(n);
  stats.mean_wall_time = wall / static_cast<double>(n);

  const double low = stats.best_energy;
  const double width = (stats.worst_energy - low) / static_cast<double>(bin_count);
  for (std::size_t b = 0; b < bin_count; ++b) {
    const double lower = low + width * static_cast<double>(b);
    const double upper = b + 1 == bin_count ? stats.worst_energy : low + width * (b + 1.0);
    stats.bins.push_back({lower, upper, 0});
  }
  for (double e : energies) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = std::min(bin_count - 1, static_cast<std::size_t>((e - low) / width));
    }
    ++stats.bins[b].count;
  }
  return stats;
}

std::string samples_csv(const SampleSet& set, bool include_timing) {
  std::string out = "restart_index,energy,objective,feasible";
  out += include_timing ? ",wall_time_s\n" : "\n";
  for (const Sample& s : set.samples) {
    out += std::to_string(s.restart_index) + "," + format_real(s.energy) + "," +
           format_real(s.objective) + "," + (s.feasible ? "1" : "0");
    if (include_timing) out += "," + format_fixed(s.wall_time, 6);
    out += "\n";
  }
  return out;
}

}  // namespace hamflow
