#include <map>
#include <string>

#include "hamflow/error.hpp"
#include "hamflow/expansion.hpp"
#include "json.hpp"
#include "network_flow.hpp"

namespace hamflow {

using nlohmann::json;

namespace {

std::vector<std::int64_t> read_row(const json& value, const std::string& where) {
  if (!value.is_array()) throw ValidationError(where + " must be an array of integers");
  std::vector<std::int64_t> row;
  for (const json& x : value) {
    if (!x.is_number_integer()) throw ValidationError(where + " must hold integers");
    row.push_back(x.get<std::int64_t>());
  }
  return row;
}

std::map<std::string, std::vector<std::int64_t>> read_arc_table(const json& doc,
                                                                const char* key) {
  std::map<std::string, std::vector<std::int64_t>> table;
  if (!doc.contains(key) || !doc.at(key).is_object()) {
    throw ValidationError(std::string("tables document needs an object '") + key + "'");
  }
  for (const auto& [arc, row] : doc.at(key).items()) {
    table[arc] = read_row(row, std::string(key) + "." + arc);
  }
  return table;
}

}  // namespace

ScheduleTables parse_schedule_tables(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError("tables document must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "vehicle_time_label" && key != "vehicles" && key != "cargo" &&
        key != "inventory") {
      throw ValidationError("unknown key '" + key + "' in tables document");
    }
  }
  ScheduleTables tables;
  if (doc.contains("vehicle_time_label")) {
    const std::string label = doc.at("vehicle_time_label").get<std::string>();
    if (label == "arrival") {
      tables.vehicle_time_label = ScheduleTables::TimeLabel::arrival;
    } else if (label != "departure") {
      throw ValidationError("vehicle_time_label must be 'departure' or 'arrival'");
    }
  }
  tables.vehicles = read_arc_table(doc, "vehicles");
  tables.cargo = read_arc_table(doc, "cargo");
  if (!doc.contains("inventory") || !doc.at("inventory").is_array()) {
    throw ValidationError("tables document needs an array 'inventory'");
  }
  for (const json& entry : doc.at("inventory")) {
    if (!entry.is_object() || !entry.contains("depot") || !entry.contains("commodity") ||
        !entry.contains("mass")) {
      throw ValidationError("inventory rows need depot, commodity and mass");
    }
    const std::string depot = entry.at("depot").get<std::string>();
    const std::string commodity = entry.at("commodity").get<std::string>();
    tables.inventory[{depot, commodity}] =
        read_row(entry.at("mass"), "inventory " + depot + "," + commodity);
  }
  return tables;
}

Assignment reconstruct_solution(const Model& model, const ScheduleTables& tables) {
  const Instance& instance = model.instance();
  const int horizon = instance.horizon();
  const std::size_t depots = instance.depots().size();
  const auto& arcs = instance.arcs();
  Assignment assignment = zero_assignment(model);

  auto cell = [&](const std::vector<std::int64_t>& row, int t, const std::string& where) {
    if (row.size() != static_cast<std::size_t>(horizon)) {
      throw ValidationError(where + " must have one column per time step");
    }
    return row[t - 1];
  };

  for (std::size_t k = 0; k < instance.commodities().size(); ++k) {
    const Commodity& commodity = instance.commodities()[k];
    // Units leaving each depot at each departure time, and units arriving.
    std::vector<std::vector<std::int64_t>> departing(depots,
                                                     std::vector<std::int64_t>(horizon + 2, 0));
    std::vector<std::vector<std::int64_t>> arriving = departing;
    for (std::size_t d = 0; d < depots; ++d) {
      const std::string& depot = instance.depots()[d].id;
      const auto it = tables.inventory.find({depot, commodity.id});
      std::int64_t delivered = 0;
      for (int t = 1; t <= horizon; ++t) {
        const std::int64_t supply = instance.net_supply(d, k, t);
        if (supply < 0) delivered += -supply;
        const std::int64_t on_hand =
            it == tables.inventory.end()
                ? delivered
                : cell(it->second, t, "inventory " + depot + "," + commodity.id);
        const std::int64_t out = on_hand - delivered;
        const std::string where = depot + "," + commodity.id + ",t=" + std::to_string(t);
        if (out < 0 || out % commodity.load != 0) {
          throw ValidationError("inventory at " + where + " is inconsistent with the schedule");
        }
        departing[d][t] = out / commodity.load;
        arriving[d][t] = departing[d][t] - supply / commodity.load;
        if (arriving[d][t] < 0) {
          throw ValidationError("inventory at " + where + " implies negative arrivals");
        }
      }
    }

    // Transportation problem from (depot, departure) to (depot, arrival).
    const std::size_t slots = depots * (horizon + 2);
    const std::size_t source = 2 * slots;
    const std::size_t sink = source + 1;
    detail::MaxFlow network(sink + 1);
    std::int64_t total = 0;
    for (std::size_t d = 0; d < depots; ++d) {
      for (int t = 1; t <= horizon; ++t) {
        network.add_edge(source, d * (horizon + 2) + t, departing[d][t]);
        network.add_edge(slots + d * (horizon + 2) + t, sink, arriving[d][t]);
        total += departing[d][t];
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (edge id, variable)
    for (std::size_t i = 0; i < model.variables().size(); ++i) {
      const Variable& v = model.variables()[i];
      if (v.kind != VariableKind::flow || v.commodity != k) continue;
      const int arrive = v.time + arcs[v.arc].travel_time;
      if (arrive > horizon) continue;
      const std::size_t from = instance.arc_tail(v.arc) * (horizon + 2) + v.time;
      const std::size_t to = slots + instance.arc_head(v.arc) * (horizon + 2) + arrive;
      edges.emplace_back(network.add_edge(from, to, v.upper_bound), i);
    }
    if (network.solve(source, sink) != total) {
      throw ValidationError("no integral split of commodity '" + commodity.id +
                            "' matches the inventory table on this model");
    }
    for (const auto& [edge, variable] : edges) assignment.values[variable] = network.flow(edge);
  }

  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const std::string key = arc_key(arcs[a]);
    if (const auto it = tables.cargo.find(key); it != tables.cargo.end()) {
      std::int64_t published = 0;
      std::int64_t rebuilt = 0;
      for (int t = 1; t <= horizon; ++t) {
        published += cell(it->second, t, "cargo " + key);
        for (std::size_t k = 0; k < instance.commodities().size(); ++k) {
          rebuilt += flow_mass(model, assignment, a, k, t);
        }
      }
      if (published != rebuilt) {
        throw ValidationError("cargo total on " + key + " is " + std::to_string(published) +
                              " but the inventory table moves " + std::to_string(rebuilt));
      }
    }
    const auto vehicles = tables.vehicles.find(key);
    if (vehicles == tables.vehicles.end()) continue;
    for (int label = 1; label <= horizon; ++label) {
      const std::int64_t count = cell(vehicles->second, label, "vehicles " + key);
      if (count == 0) continue;
      const int depart = tables.vehicle_time_label == ScheduleTables::TimeLabel::arrival
                             ? label - arcs[a].travel_time
                             : label;
      const auto z = model.vehicle_variable(a, depart);
      if (!z) {
        throw ValidationError("vehicles on " + key + " at step " + std::to_string(label) +
                              " have no matching model variable");
      }
      assignment.values[*z] = count;
    }
  }
  for (const auto& [key, _] : tables.vehicles) {
    const std::size_t sep = key.find("->");
    if (sep == std::string::npos ||
        !instance.arc_index(key.substr(0, sep), key.substr(sep + 2))) {
      throw ValidationError("vehicle table names unknown arc '" + key + "'");
    }
  }
  return assignment;
}

}  // namespace hamflow
