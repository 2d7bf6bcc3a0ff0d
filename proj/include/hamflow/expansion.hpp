#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "hamflow/instance.hpp"

namespace hamflow {

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

enum class VariableKind { flow, vehicle };

// x (flow units of one commodity) or z (vehicles) on an arc, indexed by
// departure time. Arrival happens at time + travel_time.
struct Variable {
  VariableKind kind = VariableKind::flow;
  std::size_t arc = 0;
  std::size_t commodity = kNoIndex;  // kNoIndex for vehicle variables
  int time = 1;
  std::int64_t upper_bound = 0;
  bool operator==(const Variable&) const = default;
};

struct Term {
  std::size_t variable = 0;
  std::int64_t coefficient = 0;
  bool operator==(const Term&) const = default;
};

enum class Relation { equal, less_equal };

enum class ConstraintKind { conservation, capacity };

// Identifies the row: conservation rows carry (depot, commodity, time),
// capacity rows carry (arc, time).
struct ConstraintTag {
  ConstraintKind kind = ConstraintKind::conservation;
  std::size_t depot = kNoIndex;
  std::size_t commodity = kNoIndex;
  std::size_t arc = kNoIndex;
  int time = 1;
  bool operator==(const ConstraintTag&) const = default;
};

// sum(coefficient * value) relation rhs, all in mass units.
struct LinearConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::equal;
  std::int64_t rhs = 0;
  ConstraintTag tag;
  bool operator==(const LinearConstraint&) const = default;
};

struct ObjectiveTerm {
  std::size_t variable = 0;
  double cost = 0.0;
};

// Time-expanded integer program:
//   minimize    sum c_a * z[a,t]
//   subject to  sum_out L_k x - sum_in L_k x(departed t - dt) = d[i,k,t]
//               sum_k L_k x[a,k,t] - W z[a,t] <= 0
//               0 <= x, z <= upper bounds, integer.
class Model {
 public:
  Model(Instance instance, std::vector<Variable> variables,
        std::vector<LinearConstraint> constraints);

  const Instance& instance() const { return instance_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::vector<ObjectiveTerm>& objective() const { return objective_; }

  std::optional<std::size_t> flow_variable(std::size_t arc, std::size_t commodity,
                                           int time) const;
  std::optional<std::size_t> vehicle_variable(std::size_t arc, int time) const;

  std::size_t count(VariableKind kind) const;
  std::size_t count(ConstraintKind kind) const;

  // Human-readable names such as "x[N1->N2,L1,t=1]" and "capacity[N1->N2,t=1]".
  std::string describe(std::size_t variable) const;
  std::string describe(const ConstraintTag& tag) const;

 private:
  Instance instance_;
  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
  std::vector<ObjectiveTerm> objective_;
  std::map<std::tuple<int, std::size_t, std::size_t, int>, std::size_t> lookup_;
};

// One value per model variable.
struct Assignment {
  std::vector<std::int64_t> values;
  bool operator==(const Assignment&) const = default;
};

Assignment zero_assignment(const Model& model);

struct FeasibilityReport {
  // lhs - rhs for equalities, max(0, lhs - rhs) for inequalities.
  std::vector<std::int64_t> residuals;
  // Variables outside [0, upper_bound].
  std::vector<std::size_t> bound_violations;
  bool feasible = false;
  // Row with the largest |residual|, when any residual is nonzero.
  std::optional<std::pair<ConstraintTag, std::int64_t>> worst;
};

// Builds the full time-expanded model. Throws ValidationError when the
// instance fails its mass balance check.
Model expand_model(const Instance& instance);

// Drops flow variables that cannot lie on any supply-to-demand path of the
// time-expanded graph, then vehicles and rows left without flow. Throws
// InfeasibleError if a row with nonzero right-hand side loses all its terms.
Model prune_model(const Model& model);

FeasibilityReport verify_assignment(const Model& model, const Assignment& assignment);

double evaluate_objective(const Model& model, const Assignment& assignment);

// Mass of `commodity` moved on (arc, departure time) by an assignment.
std::int64_t flow_mass(const Model& model, const Assignment& assignment,
                       std::size_t arc, std::size_t commodity, int time);

// Debug dump listing variables and rows; stable output for golden tests.
std::string dump_model(const Model& model);

// The three published output tables of a schedule: vehicles per arc and time,
// total cargo mass per arc and time, and per-(depot, commodity) on-hand mass
// per time with delivered demand retained.
struct ScheduleTables {
  // Whether vehicle-table columns count departure or arrival steps.
  enum class TimeLabel { departure, arrival };
  TimeLabel vehicle_time_label = TimeLabel::departure;
  std::map<std::string, std::vector<std::int64_t>> vehicles;  // keyed by arc_key
  std::map<std::string, std::vector<std::int64_t>> cargo;
  std::map<std::pair<std::string, std::string>, std::vector<std::int64_t>> inventory;
};

ScheduleTables parse_schedule_tables(std::string_view text);

// Rebuilds a full assignment from published tables. Per-commodity flows come
// from the inventory table (mass departing a depot at t is its on-hand mass
// minus demand already delivered there); the cargo table is checked against
// the per-arc totals. Throws ValidationError when no integral split exists or
// the schedule needs a variable absent from `model`.
Assignment reconstruct_solution(const Model& model, const ScheduleTables& tables);

}  // namespace hamflow
