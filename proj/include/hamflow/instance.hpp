#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hamflow {

// A node of the logistics network (planet surface, orbit, staging point).
struct Depot {
  std::string id;
  std::string label;
  bool operator==(const Depot&) const = default;
};

// Directed route. `cost` is the per-vehicle cost of one traversal (delta-v in
// km/s for the space logistics case); `travel_time` is in time steps.
struct Arc {
  std::string from;
  std::string to;
  double cost = 0.0;
  int travel_time = 1;
  bool operator==(const Arc&) const = default;
};

// `load` is the mass of one unit of flow of this commodity.
struct Commodity {
  std::string id;
  std::int64_t load = 1;
  bool operator==(const Commodity&) const = default;
};

// Supply (amount > 0) or demand (amount < 0) of a commodity at a depot, in
// mass units, at a 1-based time step.
struct ScheduleEntry {
  std::string depot;
  std::string commodity;
  int time = 1;
  std::int64_t amount = 0;
  bool operator==(const ScheduleEntry&) const = default;
};

// Immutable multicommodity network flow problem over a discrete horizon
// t = 1..horizon. The constructor enforces every structural invariant and
// throws ValidationError on the first violation.
class Instance {
 public:
  Instance(std::vector<Depot> depots, std::vector<Arc> arcs,
           std::vector<Commodity> commodities, int horizon,
           std::int64_t capacity, std::vector<ScheduleEntry> schedule);

  const std::vector<Depot>& depots() const { return depots_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Commodity>& commodities() const { return commodities_; }
  const std::vector<ScheduleEntry>& schedule() const { return schedule_; }
  int horizon() const { return horizon_; }
  std::int64_t capacity() const { return capacity_; }

  std::optional<std::size_t> depot_index(std::string_view id) const;
  std::optional<std::size_t> commodity_index(std::string_view id) const;
  std::optional<std::size_t> arc_index(std::string_view from,
                                       std::string_view to) const;

  std::size_t arc_tail(std::size_t arc) const { return arc_ends_[arc].first; }
  std::size_t arc_head(std::size_t arc) const { return arc_ends_[arc].second; }

  // d_{ki}^t in mass units; zero when no schedule entry exists.
  std::int64_t net_supply(std::size_t depot, std::size_t commodity,
                          int time) const;

  // Sum of positive schedule amounts of one commodity, in mass units.
  std::int64_t total_supply_mass(std::size_t commodity) const;

  bool operator==(const Instance& other) const;

 private:
  std::vector<Depot> depots_;
  std::vector<Arc> arcs_;
  std::vector<Commodity> commodities_;
  int horizon_;
  std::int64_t capacity_;
  std::vector<ScheduleEntry> schedule_;

  std::vector<std::pair<std::size_t, std::size_t>> arc_ends_;
  // [depot][commodity][time - 1]
  std::vector<std::int64_t> net_supply_;
};

// "from->to", the key used by arc-cost maps and report rows.
std::string arc_key(const Arc& arc);

// Parses the JSON instance document. Syntax errors raise ParseError with the
// byte offset; schema and cross-reference errors raise ValidationError.
Instance parse_instance(std::string_view text);

// Canonical JSON form; parse_instance(serialize_instance(i)) == i.
std::string serialize_instance(const Instance& instance);

Instance load_instance(const std::string& path);

struct Finding {
  enum class Kind { mass_balance, not_load_multiple, unreachable_demand };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool has(Finding::Kind kind) const;
};

// Semantic checks that do not make an instance malformed: per-commodity mass
// balance, load multiples, and demands that no supply can reach in time.
ValidationReport validate_instance(const Instance& instance);

// Maps "Ni->Nj" to an arc cost.
using ArcCostMap = std::map<std::string, double>;

ArcCostMap parse_arc_costs(std::string_view text);

// The seven-depot Earth-Moon-Mars network with two commodities (loads 10 and
// 20), vehicle capacity 100 and horizon 6. `costs` must name all eight arcs.
Instance build_case_study(const ArcCostMap& costs);

// Arc keys of the case-study network in canonical order.
const std::vector<std::string>& case_study_arc_keys();

}  // namespace hamflow
