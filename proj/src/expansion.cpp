#include "hamflow/expansion.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <utility>

#include "hamflow/error.hpp"
#include "json.hpp"
#include "reachability.hpp"

namespace hamflow {

namespace {

std::tuple<int, std::size_t, std::size_t, int> key_of(const Variable& v) {
  return {static_cast<int>(v.kind), v.arc, v.commodity, v.time};
}

}  // namespace

Model::Model(Instance instance, std::vector<Variable> variables,
             std::vector<LinearConstraint> constraints)
    : instance_(std::move(instance)),
      variables_(std::move(variables)),
      constraints_(std::move(constraints)) {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const Variable& v = variables_[i];
    if (v.upper_bound < 0) throw ValidationError("negative upper bound on " + describe(i));
    if ((v.kind == VariableKind::flow) != (v.commodity != kNoIndex)) {
      throw ValidationError("flow variables need a commodity, vehicles must not carry one");
    }
    if (!lookup_.emplace(key_of(v), i).second) {
      throw ValidationError("duplicate variable " + describe(i));
    }
    if (v.kind == VariableKind::vehicle) {
      objective_.push_back({i, instance_.arcs()[v.arc].cost});
    }
  }
  for (const LinearConstraint& c : constraints_) {
    std::vector<std::size_t> seen;
    for (const Term& term : c.terms) {
      if (term.variable >= variables_.size()) {
        throw ValidationError("constraint " + describe(c.tag) + " references a dead variable");
      }
      seen.push_back(term.variable);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw ValidationError("constraint " + describe(c.tag) + " repeats a variable");
    }
  }
}

std::optional<std::size_t> Model::flow_variable(std::size_t arc, std::size_t commodity,
                                                int time) const {
  const auto it = lookup_.find({static_cast<int>(VariableKind::flow), arc, commodity, time});
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Model::vehicle_variable(std::size_t arc, int time) const {
  const auto it = lookup_.find({static_cast<int>(VariableKind::vehicle), arc, kNoIndex, time});
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Model::count(VariableKind kind) const {
  return std::count_if(variables_.begin(), variables_.end(),
                       [kind](const Variable& v) { return v.kind == kind; });
}

std::size_t Model::count(ConstraintKind kind) const {
  return std::count_if(constraints_.begin(), constraints_.end(),
                       [kind](const LinearConstraint& c) { return c.tag.kind == kind; });
}

std::string Model::describe(std::size_t variable) const {
  const Variable& v = variables_[variable];
  const std::string arc = arc_key(instance_.arcs()[v.arc]);
  if (v.kind == VariableKind::vehicle) {
    return "z[" + arc + ",t=" + std::to_string(v.time) + "]";
  }
  return "x[" + arc + "," + instance_.commodities()[v.commodity].id +
         ",t=" + std::to_string(v.time) + "]";
}

std::string Model::describe(const ConstraintTag& tag) const {
  if (tag.kind == ConstraintKind::capacity) {
    return "capacity[" + arc_key(instance_.arcs()[tag.arc]) + ",t=" +
           std::to_string(tag.time) + "]";
  }
  return "conservation[" + instance_.depots()[tag.depot].id + "," +
         instance_.commodities()[tag.commodity].id + ",t=" + std::to_string(tag.time) + "]";
}

Assignment zero_assignment(const Model& model) {
  return Assignment{std::vector<std::int64_t>(model.variables().size(), 0)};
}

Model expand_model(const Instance& instance) {
  const ValidationReport report = validate_instance(instance);
  for (const Finding& f : report.findings) {
    if (f.kind == Finding::Kind::mass_balance) {
      throw ValidationError("instance is infeasible by balance: " + f.message);
    }
  }

  const int horizon = instance.horizon();
  const auto& arcs = instance.arcs();
  const auto& commodities = instance.commodities();
  const std::int64_t capacity = instance.capacity();

  std::int64_t total_mass = 0;
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    total_mass += instance.total_supply_mass(k);
  }
  const std::int64_t vehicle_ub = (total_mass + capacity - 1) / capacity;

  // Departures whose arrival falls after horizon + 1 are never created.
  auto departs_in_horizon = [&](std::size_t a, int t) {
    return t + arcs[a].travel_time <= horizon + 1;
  };

  std::vector<Variable> variables;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    for (std::size_t k = 0; k < commodities.size(); ++k) {
      const std::int64_t ub = instance.total_supply_mass(k) / commodities[k].load;
      for (int t = 1; t <= horizon; ++t) {
        if (departs_in_horizon(a, t)) {
          variables.push_back({VariableKind::flow, a, k, t, ub});
        }
      }
    }
  }
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    for (int t = 1; t <= horizon; ++t) {
      if (departs_in_horizon(a, t)) {
        variables.push_back({VariableKind::vehicle, a, kNoIndex, t, vehicle_ub});
      }
    }
  }

  // Index lookup local to construction; Model rebuilds its own.
  std::map<std::tuple<std::size_t, std::size_t, int>, std::size_t> flow_index;
  std::map<std::pair<std::size_t, int>, std::size_t> vehicle_index;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const Variable& v = variables[i];
    if (v.kind == VariableKind::flow) {
      flow_index[{v.arc, v.commodity, v.time}] = i;
    } else {
      vehicle_index[{v.arc, v.time}] = i;
    }
  }

  std::vector<LinearConstraint> constraints;
  for (std::size_t d = 0; d < instance.depots().size(); ++d) {
    for (std::size_t k = 0; k < commodities.size(); ++k) {
      const std::int64_t load = commodities[k].load;
      for (int t = 1; t <= horizon; ++t) {
        LinearConstraint row;
        row.relation = Relation::equal;
        row.rhs = instance.net_supply(d, k, t);
        row.tag = {ConstraintKind::conservation, d, k, kNoIndex, t};
        for (std::size_t a = 0; a < arcs.size(); ++a) {
          if (instance.arc_tail(a) == d) {
            if (auto it = flow_index.find({a, k, t}); it != flow_index.end()) {
              row.terms.push_back({it->second, load});
            }
          }
          if (instance.arc_head(a) == d) {
            const int departed = t - arcs[a].travel_time;
            if (auto it = flow_index.find({a, k, departed}); it != flow_index.end()) {
              row.terms.push_back({it->second, -load});
            }
          }
        }
        constraints.push_back(std::move(row));
      }
    }
  }
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    for (int t = 1; t <= horizon; ++t) {
      const auto z = vehicle_index.find({a, t});
      if (z == vehicle_index.end()) continue;
      LinearConstraint row;
      row.relation = Relation::less_equal;
      row.rhs = 0;
      row.tag = {ConstraintKind::capacity, kNoIndex, kNoIndex, a, t};
      for (std::size_t k = 0; k < commodities.size(); ++k) {
        row.terms.push_back({flow_index.at({a, k, t}), commodities[k].load});
      }
      row.terms.push_back({z->second, -capacity});
      constraints.push_back(std::move(row));
    }
  }
  return Model(instance, std::move(variables), std::move(constraints));
}

Model prune_model(const Model& model) {
  const Instance& instance = model.instance();
  std::vector<detail::TimeGrid> forward;
  std::vector<detail::TimeGrid> backward;
  for (std::size_t k = 0; k < instance.commodities().size(); ++k) {
    forward.push_back(detail::forward_reachable(instance, k));
    backward.push_back(detail::backward_reachable(instance, k));
  }

  const auto& variables = model.variables();
  std::vector<char> keep(variables.size(), 0);
  std::set<std::pair<std::size_t, int>> loaded;  // (arc, t) with a surviving flow
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const Variable& v = variables[i];
    if (v.kind != VariableKind::flow) continue;
    const int arrive = v.time + instance.arcs()[v.arc].travel_time;
    if (arrive > instance.horizon()) continue;
    if (forward[v.commodity][instance.arc_tail(v.arc)][v.time] &&
        backward[v.commodity][instance.arc_head(v.arc)][arrive]) {
      keep[i] = 1;
      loaded.emplace(v.arc, v.time);
    }
  }
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const Variable& v = variables[i];
    if (v.kind == VariableKind::vehicle && loaded.count({v.arc, v.time})) keep[i] = 1;
  }

  std::vector<std::size_t> remap(variables.size(), kNoIndex);
  std::vector<Variable> kept;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (keep[i]) {
      remap[i] = kept.size();
      kept.push_back(variables[i]);
    }
  }

  std::vector<LinearConstraint> constraints;
  for (const LinearConstraint& row : model.constraints()) {
    LinearConstraint pruned = row;
    pruned.terms.clear();
    for (const Term& term : row.terms) {
      if (remap[term.variable] != kNoIndex) {
        pruned.terms.push_back({remap[term.variable], term.coefficient});
      }
    }
    if (row.tag.kind == ConstraintKind::capacity) {
      if (!model.vehicle_variable(row.tag.arc, row.tag.time) ||
          !keep[*model.vehicle_variable(row.tag.arc, row.tag.time)]) {
        continue;
      }
    }
    if (pruned.terms.empty()) {
      const bool violated = pruned.relation == Relation::equal ? pruned.rhs != 0 : pruned.rhs < 0;
      if (violated) {
        throw InfeasibleError("pruning leaves " + model.describe(row.tag) +
                              " without variables but with right-hand side " +
                              std::to_string(row.rhs));
      }
      continue;
    }
    constraints.push_back(std::move(pruned));
  }
  return Model(instance, std::move(kept), std::move(constraints));
}

FeasibilityReport verify_assignment(const Model& model, const Assignment& assignment) {
  if (assignment.values.size() != model.variables().size()) {
    throw ValidationError("assignment has " + std::to_string(assignment.values.size()) +
                          " values for " + std::to_string(model.variables().size()) +
                          " variables");
  }
  FeasibilityReport report;
  for (std::size_t i = 0; i < model.variables().size(); ++i) {
    const std::int64_t value = assignment.values[i];
    if (value < 0 || value > model.variables()[i].upper_bound) {
      report.bound_violations.push_back(i);
    }
  }
  std::int64_t worst = 0;
  for (const LinearConstraint& row : model.constraints()) {
    std::int64_t lhs = 0;
    for (const Term& term : row.terms) lhs += term.coefficient * assignment.values[term.variable];
    std::int64_t residual = lhs - row.rhs;
    if (row.relation == Relation::less_equal) residual = std::max<std::int64_t>(0, residual);
    report.residuals.push_back(residual);
    if (std::llabs(residual) > worst) {
      worst = std::llabs(residual);
      report.worst = std::make_pair(row.tag, residual);
    }
  }
  report.feasible = worst == 0 && report.bound_violations.empty();
  return report;
}

double evaluate_objective(const Model& model, const Assignment& assignment) {
  double total = 0.0;
  for (const ObjectiveTerm& term : model.objective()) {
    total += term.cost * static_cast<double>(assignment.values.at(term.variable));
  }
  return total;
}

std::int64_t flow_mass(const Model& model, const Assignment& assignment, std::size_t arc,
                       std::size_t commodity, int time) {
  const auto index = model.flow_variable(arc, commodity, time);
  if (!index) return 0;
  return assignment.values.at(*index) * model.instance().commodities()[commodity].load;
}

std::string dump_model(const Model& model) {
  using nlohmann::json;
  const Instance& instance = model.instance();
  json variables = json::array();
  for (std::size_t i = 0; i < model.variables().size(); ++i) {
    const Variable& v = model.variables()[i];
    json entry = {{"index", i},
                  {"kind", v.kind == VariableKind::flow ? "flow" : "vehicle"},
                  {"arc", arc_key(instance.arcs()[v.arc])}};
    if (v.kind == VariableKind::flow) entry["commodity"] = instance.commodities()[v.commodity].id;
    entry["time"] = v.time;
    entry["upper_bound"] = v.upper_bound;
    variables.push_back(std::move(entry));
  }
  json constraints = json::array();
  for (const LinearConstraint& row : model.constraints()) {
    json terms = json::array();
    for (const Term& t : row.terms) terms.push_back({t.variable, t.coefficient});
    constraints.push_back({{"tag", model.describe(row.tag)},
                           {"relation", row.relation == Relation::equal ? "==" : "<="},
                           {"rhs", row.rhs},
                           {"terms", std::move(terms)}});
  }
  json objective = json::array();
  for (const ObjectiveTerm& t : model.objective()) objective.push_back({t.variable, t.cost});
  json doc = {{"variables", std::move(variables)},
              {"constraints", std::move(constraints)},
              {"objective", std::move(objective)}};
  return doc.dump(1) + "\n";
}

}  // namespace hamflow
