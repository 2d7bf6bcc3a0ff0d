#include "routing_network.hpp"

#include <algorithm>

#include "hamflow/error.hpp"
#include "network_flow.hpp"

namespace hamflow::detail {

RoutingNetwork::RoutingNetwork(const Model& model) : model_(model) {
  const Instance& instance = model.instance();
  for (const Finding& f : validate_instance(instance).findings) {
    if (f.kind == Finding::Kind::mass_balance) {
      throw ValidationError("routing needs a mass-balanced instance: " + f.message);
    }
  }
  horizon_ = instance.horizon();
  depots_ = instance.depots().size();
  capacity_ = instance.capacity();
  for (const Commodity& c : instance.commodities()) loads_.push_back(c.load);

  for (std::size_t i = 0; i < model.variables().size(); ++i) {
    const Variable& v = model.variables()[i];
    if (v.kind != VariableKind::vehicle) continue;
    Slot slot;
    slot.vehicle = i;
    slot.arc = v.arc;
    slot.time = v.time;
    slot.arrive = v.time + instance.arcs()[v.arc].travel_time;
    slot.tail = instance.arc_tail(v.arc);
    slot.head = instance.arc_head(v.arc);
    slot.cost = instance.arcs()[v.arc].cost;
    slot.vehicle_ub = v.upper_bound;
    for (std::size_t k = 0; k < loads_.size(); ++k) {
      slot.flow.push_back(model.flow_variable(v.arc, k, v.time).value_or(kNoIndex));
    }
    slots_.push_back(std::move(slot));
  }
  for (std::size_t i = 0; i < model.variables().size(); ++i) {
    const Variable& v = model.variables()[i];
    if (v.kind == VariableKind::flow && !model.vehicle_variable(v.arc, v.time)) {
      throw ValidationError("flow variable " + model.describe(i) + " has no vehicle variable");
    }
  }
}

std::int64_t RoutingNetwork::supply_units(std::size_t depot, std::size_t k, int time) const {
  const std::int64_t d = model_.instance().net_supply(depot, k, time);
  return d > 0 ? d / loads_[k] : 0;
}

std::int64_t RoutingNetwork::demand_units(std::size_t depot, std::size_t k, int time) const {
  const std::int64_t d = model_.instance().net_supply(depot, k, time);
  return d < 0 ? -d / loads_[k] : 0;
}

std::int64_t RoutingNetwork::flow_mass_bound(const Slot& slot) const {
  std::int64_t mass = 0;
  for (std::size_t k = 0; k < loads_.size(); ++k) {
    if (slot.flow[k] != kNoIndex) mass += loads_[k] * model_.variables()[slot.flow[k]].upper_bound;
  }
  return mass;
}

bool RoutingNetwork::commodity_feasible(
    std::size_t k, const std::vector<std::int64_t>& cap_mass, int from_time,
    const std::vector<std::vector<std::int64_t>>* injected) const {
  const std::size_t source = node_count();
  const std::size_t sink = source + 1;
  MaxFlow network(sink + 1);
  std::int64_t offered = 0;
  std::int64_t required = 0;
  for (std::size_t d = 0; d < depots_; ++d) {
    for (int t = from_time; t <= horizon_; ++t) {
      std::int64_t in = supply_units(d, k, t);
      if (injected) in += (*injected)[k][node(d, t)];
      if (in > 0) network.add_edge(source, node(d, t), in);
      const std::int64_t out = demand_units(d, k, t);
      if (out > 0) network.add_edge(node(d, t), sink, out);
      offered += in;
      required += out;
    }
  }
  if (offered != required) return false;
  if (required == 0) return true;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& slot = slots_[s];
    if (slot.time < from_time || slot.arrive > horizon_ || slot.flow[k] == kNoIndex) continue;
    const std::int64_t cap =
        std::min(model_.variables()[slot.flow[k]].upper_bound, cap_mass[s] / loads_[k]);
    if (cap > 0) network.add_edge(node(slot.tail, slot.time), node(slot.head, slot.arrive), cap);
  }
  return network.solve(source, sink) == required;
}

bool RoutingNetwork::aggregate_feasible(
    const std::vector<std::int64_t>& cap_mass, int from_time,
    const std::vector<std::vector<std::int64_t>>* injected) const {
  const std::size_t source = node_count();
  const std::size_t sink = source + 1;
  MaxFlow network(sink + 1);
  std::int64_t required = 0;
  for (std::size_t d = 0; d < depots_; ++d) {
    for (int t = from_time; t <= horizon_; ++t) {
      std::int64_t in = 0;
      std::int64_t out = 0;
      for (std::size_t k = 0; k < loads_.size(); ++k) {
        std::int64_t units = supply_units(d, k, t);
        if (injected) units += (*injected)[k][node(d, t)];
        in += units * loads_[k];
        out += demand_units(d, k, t) * loads_[k];
      }
      if (in > 0) network.add_edge(source, node(d, t), in);
      if (out > 0) network.add_edge(node(d, t), sink, out);
      required += out;
    }
  }
  if (required == 0) return true;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& slot = slots_[s];
    if (slot.time < from_time || slot.arrive > horizon_) continue;
    const std::int64_t cap = std::min(cap_mass[s], flow_mass_bound(slot));
    if (cap > 0) network.add_edge(node(slot.tail, slot.time), node(slot.head, slot.arrive), cap);
  }
  return network.solve(source, sink) == required;
}

bool RoutingNetwork::relaxation_feasible(
    const std::vector<std::int64_t>& cap_mass, int from_time,
    const std::vector<std::vector<std::int64_t>>* injected) const {
  for (std::size_t k = 0; k < loads_.size(); ++k) {
    if (!commodity_feasible(k, cap_mass, from_time, injected)) return false;
  }
  return aggregate_feasible(cap_mass, from_time, injected);
}

std::optional<double> RoutingNetwork::fractional_cost(const std::vector<std::int64_t>& vehicles,
                                                      const std::vector<char>& fixed) const {
  const std::size_t source = node_count();
  const std::size_t sink = source + 1;
  MinCostFlow network(sink + 1);
  std::int64_t required = 0;
  for (std::size_t d = 0; d < depots_; ++d) {
    for (int t = 1; t <= horizon_; ++t) {
      std::int64_t in = 0;
      std::int64_t out = 0;
      for (std::size_t k = 0; k < loads_.size(); ++k) {
        in += supply_units(d, k, t) * loads_[k];
        out += demand_units(d, k, t) * loads_[k];
      }
      if (in > 0) network.add_edge(source, node(d, t), in, 0.0);
      if (out > 0) network.add_edge(node(d, t), sink, out, 0.0);
      required += out;
    }
  }
  if (required == 0) return 0.0;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& slot = slots_[s];
    if (slot.arrive > horizon_) continue;
    const std::int64_t vehicles_here = fixed[s] ? vehicles[s] : slot.vehicle_ub;
    const std::int64_t cap = std::min(vehicles_here * capacity_, flow_mass_bound(slot));
    if (cap <= 0) continue;
    const double unit_cost = fixed[s] ? 0.0 : slot.cost / static_cast<double>(capacity_);
    network.add_edge(node(slot.tail, slot.time), node(slot.head, slot.arrive), cap, unit_cost);
  }
  const auto result = network.solve(source, sink, required);
  if (result.flow < required) return std::nullopt;
  return result.cost;
}

}  // namespace hamflow::detail
