#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hamflow/expansion.hpp"
#include "hamflow/instance.hpp"
#include "hamflow/reports.hpp"

namespace hamflow::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(HAMFLOW_DATA_DIR) / name;
}

inline ArcCostMap fixture_costs() {
  return parse_arc_costs(read_text_file(data_path("case_study_costs.json")));
}

inline ArcCostMap uniform_costs(double cost) {
  ArcCostMap costs;
  for (const auto& key : case_study_arc_keys()) costs[key] = cost;
  return costs;
}

inline Instance case_study() { return build_case_study(fixture_costs()); }

inline Instance micro_instance() { return load_instance(data_path("micro.json").string()); }

inline ScheduleTables reference_tables() {
  return parse_schedule_tables(read_text_file(data_path("reference_schedule.json")));
}

// Small balanced instance: 2-4 depots, 1-2 commodities, horizon 2-3, a few
// arcs with travel time 1 or 2, and shipments that pair each supply with an
// equal demand at a later step. Shipments may be unroutable, which exercises
// the infeasible paths of the solvers.
inline Instance random_micro_instance(std::mt19937_64& rng) {
  auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  const int depot_count = pick(2, 4);
  const int commodity_count = pick(1, 2);
  const int horizon = pick(2, 3);
  const std::int64_t capacity = pick(0, 1) == 0 ? 50 : 100;

  std::vector<Depot> depots;
  for (int i = 0; i < depot_count; ++i) depots.push_back({"D" + std::to_string(i), ""});

  std::set<std::pair<int, int>> pairs;
  const int arc_target = pick(1, depot_count == 2 ? 2 : 4);
  for (int attempt = 0; attempt < 50 && static_cast<int>(pairs.size()) < arc_target; ++attempt) {
    const int from = pick(0, depot_count - 1);
    const int to = pick(0, depot_count - 1);
    if (from != to) pairs.insert({from, to});
  }
  if (pairs.empty()) pairs.insert({0, 1});

  std::vector<Arc> arcs;
  for (const auto& [from, to] : pairs) {
    const int travel = horizon >= 3 && pick(0, 3) == 0 ? 2 : 1;
    arcs.push_back({depots[from].id, depots[to].id, static_cast<double>(pick(1, 9)), travel});
  }

  std::vector<Commodity> commodities;
  for (int k = 0; k < commodity_count; ++k) {
    commodities.push_back({"K" + std::to_string(k), 10 * static_cast<std::int64_t>(pick(1, 4))});
  }

  std::vector<ScheduleEntry> schedule;
  std::set<std::tuple<std::string, std::string, int>> used;
  const int shipments = pick(0, 2);
  for (int s = 0; s < shipments; ++s) {
    const auto& arc = arcs[pick(0, static_cast<int>(arcs.size()) - 1)];
    const auto& commodity = commodities[pick(0, commodity_count - 1)];
    const int start = pick(1, horizon - 1);
    const int finish = pick(start + 1, horizon);
    const std::int64_t mass = commodity.load * pick(1, 3);
    // Mostly along an existing arc so that many instances are feasible.
    const std::string origin = arc.from;
    const std::string target = pick(0, 4) == 0 ? depots[pick(0, depot_count - 1)].id : arc.to;
    if (origin == target) continue;
    if (used.count({origin, commodity.id, start}) || used.count({target, commodity.id, finish})) {
      continue;
    }
    used.insert({origin, commodity.id, start});
    used.insert({target, commodity.id, finish});
    schedule.push_back({origin, commodity.id, start, mass});
    schedule.push_back({target, commodity.id, finish, -mass});
  }

  return Instance(std::move(depots), std::move(arcs), std::move(commodities), horizon, capacity,
                  std::move(schedule));
}

}  // namespace hamflow::testing
