#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hamflow/expansion.hpp"

namespace hamflow::detail {

// One vehicle variable of the model with the flow variables that share its
// (arc, departure time).
struct Slot {
  std::size_t vehicle = 0;
  std::size_t arc = 0;
  int time = 0;
  int arrive = 0;
  std::size_t tail = 0;
  std::size_t head = 0;
  double cost = 0.0;
  std::int64_t vehicle_ub = 0;
  std::vector<std::size_t> flow;  // per commodity, kNoIndex when absent
};

// Time-expanded view of a Model. Mass never waits at a depot, so the
// conservation row of (depot, commodity, t) is flow conservation at the
// node (depot, t). Requires a mass-balanced instance, which makes every
// flow arriving after the horizon zero in any feasible assignment.
class RoutingNetwork {
 public:
  explicit RoutingNetwork(const Model& model);

  const Model& model() const { return model_; }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t commodity_count() const { return loads_.size(); }
  std::int64_t load(std::size_t k) const { return loads_[k]; }
  std::int64_t capacity() const { return capacity_; }
  int horizon() const { return horizon_; }
  std::size_t depot_count() const { return depots_; }

  std::size_t node(std::size_t depot, int time) const { return depot * (horizon_ + 2) + time; }
  std::size_t node_count() const { return depots_ * (horizon_ + 2); }

  std::int64_t supply_units(std::size_t depot, std::size_t k, int time) const;
  std::int64_t demand_units(std::size_t depot, std::size_t k, int time) const;

  // Largest mass a slot can carry given per-commodity flow bounds.
  std::int64_t flow_mass_bound(const Slot& slot) const;

  // Whether the schedule from `from_time` on can be routed with per-slot mass
  // capacities `cap_mass`. `injected[k][node]` adds units already in transit.
  // Both are necessary conditions for joint feasibility.
  bool commodity_feasible(std::size_t k, const std::vector<std::int64_t>& cap_mass,
                          int from_time,
                          const std::vector<std::vector<std::int64_t>>* injected) const;
  bool aggregate_feasible(const std::vector<std::int64_t>& cap_mass, int from_time,
                          const std::vector<std::vector<std::int64_t>>* injected) const;
  bool relaxation_feasible(const std::vector<std::int64_t>& cap_mass, int from_time,
                           const std::vector<std::vector<std::int64_t>>* injected) const;

  // Fixed slots are paid for already; free slots cost cost/capacity per mass
  // unit. Returns the cheapest such routing cost, or nullopt if infeasible.
  std::optional<double> fractional_cost(const std::vector<std::int64_t>& vehicles,
                                        const std::vector<char>& fixed) const;

 private:
  const Model& model_;
  std::vector<Slot> slots_;
  std::vector<std::int64_t> loads_;
  std::int64_t capacity_ = 0;
  int horizon_ = 0;
  std::size_t depots_ = 0;
};

}  // namespace hamflow::detail
