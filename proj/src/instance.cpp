#include "hamflow/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "hamflow/error.hpp"
#include "json.hpp"
#include "reachability.hpp"

namespace hamflow {

using nlohmann::json;

Instance::Instance(std::vector<Depot> depots, std::vector<Arc> arcs,
                   std::vector<Commodity> commodities, int horizon,
                   std::int64_t capacity, std::vector<ScheduleEntry> schedule)
    : depots_(std::move(depots)),
      arcs_(std::move(arcs)),
      commodities_(std::move(commodities)),
      horizon_(horizon),
      capacity_(capacity),
      schedule_(std::move(schedule)) {
  if (horizon_ <= 0) throw ValidationError("horizon must be positive");
  if (capacity_ <= 0) throw ValidationError("capacity must be positive");

  std::set<std::string_view> seen;
  for (const Depot& d : depots_) {
    if (d.id.empty()) throw ValidationError("depot id must not be empty");
    if (!seen.insert(d.id).second) {
      throw ValidationError("duplicate depot id '" + d.id + "'");
    }
  }
  seen.clear();
  for (const Commodity& c : commodities_) {
    if (c.id.empty()) throw ValidationError("commodity id must not be empty");
    if (!seen.insert(c.id).second) {
      throw ValidationError("duplicate commodity id '" + c.id + "'");
    }
    if (c.load <= 0) {
      throw ValidationError("commodity '" + c.id + "' must have positive load");
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const Arc& a : arcs_) {
    const auto from = depot_index(a.from);
    const auto to = depot_index(a.to);
    if (!from) throw ValidationError("arc references unknown depot '" + a.from + "'");
    if (!to) throw ValidationError("arc references unknown depot '" + a.to + "'");
    if (*from == *to) throw ValidationError("arc " + arc_key(a) + " is a self-loop");
    if (!(a.cost >= 0.0) || !std::isfinite(a.cost)) {
      throw ValidationError("arc " + arc_key(a) + " must have a finite nonnegative cost");
    }
    if (a.travel_time < 1) {
      throw ValidationError("arc " + arc_key(a) + " must have travel_time >= 1");
    }
    if (a.travel_time > horizon_) {
      throw ValidationError("arc " + arc_key(a) + " travel_time exceeds the horizon");
    }
    if (!pairs.emplace(*from, *to).second) {
      throw ValidationError("duplicate arc " + arc_key(a));
    }
    arc_ends_.emplace_back(*from, *to);
  }

  net_supply_.assign(depots_.size() * commodities_.size() * horizon_, 0);
  std::set<std::tuple<std::size_t, std::size_t, int>> keys;
  for (const ScheduleEntry& e : schedule_) {
    const auto d = depot_index(e.depot);
    const auto k = commodity_index(e.commodity);
    if (!d) throw ValidationError("schedule references unknown depot '" + e.depot + "'");
    if (!k) {
      throw ValidationError("schedule references unknown commodity '" + e.commodity + "'");
    }
    const std::string where = "schedule entry (" + e.depot + ", " + e.commodity +
                              ", t=" + std::to_string(e.time) + ")";
    if (e.time < 1 || e.time > horizon_) {
      throw ValidationError(where + " lies outside the horizon");
    }
    if (e.amount == 0) throw ValidationError(where + " has zero amount");
    if (e.amount % commodities_[*k].load != 0) {
      throw ValidationError(where + " amount is not a multiple of the commodity load");
    }
    if (!keys.emplace(*d, *k, e.time).second) throw ValidationError("duplicate " + where);
    net_supply_[(*d * commodities_.size() + *k) * horizon_ + (e.time - 1)] = e.amount;
  }
}

std::optional<std::size_t> Instance::depot_index(std::string_view id) const {
  for (std::size_t i = 0; i < depots_.size(); ++i) {
    if (depots_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Instance::commodity_index(std::string_view id) const {
  for (std::size_t i = 0; i < commodities_.size(); ++i) {
    if (commodities_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Instance::arc_index(std::string_view from,
                                               std::string_view to) const {
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (arcs_[i].from == from && arcs_[i].to == to) return i;
  }
  return std::nullopt;
}

std::int64_t Instance::net_supply(std::size_t depot, std::size_t commodity,
                                  int time) const {
  if (time < 1 || time > horizon_) return 0;
  return net_supply_[(depot * commodities_.size() + commodity) * horizon_ + (time - 1)];
}

std::int64_t Instance::total_supply_mass(std::size_t commodity) const {
  std::int64_t total = 0;
  for (const ScheduleEntry& e : schedule_) {
    if (e.amount > 0 && e.commodity == commodities_[commodity].id) {
      total += e.amount;
    }
  }
  return total;
}

bool Instance::operator==(const Instance& other) const {
  return depots_ == other.depots_ && arcs_ == other.arcs_ &&
         commodities_ == other.commodities_ && horizon_ == other.horizon_ &&
         capacity_ == other.capacity_ && schedule_ == other.schedule_;
}

std::string arc_key(const Arc& arc) { return arc.from + "->" + arc.to; }

bool ValidationReport::has(Finding::Kind kind) const {
  return std::any_of(findings.begin(), findings.end(),
                     [kind](const Finding& f) { return f.kind == kind; });
}

namespace {

void require_keys(const json& object, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!object.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, _] : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw ValidationError("unknown key '" + key + "' in " + where);
    }
  }
  for (const char* key : allowed) {
    if (!object.contains(key)) {
      throw ValidationError("missing key '" + std::string(key) + "' in " + where);
    }
  }
}

std::string get_string(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  if (!v.is_string()) throw ValidationError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

double get_number(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
  return v.get<double>();
}

// Integral quantity that may be written as 10 or 10.0 in the document.
std::int64_t get_integer(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15) {
      return static_cast<std::int64_t>(x);
    }
  }
  throw ValidationError(where + "." + key + " must be an integer");
}

const json& get_array(const json& object, const char* key) {
  const json& v = object.at(key);
  if (!v.is_array()) throw ValidationError(std::string(key) + " must be an array");
  return v;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what(),
                     e.byte);
  }
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  require_keys(doc, {"depots", "arcs", "commodities", "horizon", "capacity", "schedule"},
               "instance");

  std::vector<Depot> depots;
  for (const json& d : get_array(doc, "depots")) {
    require_keys(d, {"id", "label"}, "depot");
    depots.push_back({get_string(d, "id", "depot"), get_string(d, "label", "depot")});
  }
  std::vector<Arc> arcs;
  for (const json& a : get_array(doc, "arcs")) {
    require_keys(a, {"from", "to", "cost", "travel_time"}, "arc");
    arcs.push_back({get_string(a, "from", "arc"), get_string(a, "to", "arc"),
                    get_number(a, "cost", "arc"),
                    static_cast<int>(get_integer(a, "travel_time", "arc"))});
  }
  std::vector<Commodity> commodities;
  for (const json& c : get_array(doc, "commodities")) {
    require_keys(c, {"id", "load"}, "commodity");
    commodities.push_back({get_string(c, "id", "commodity"),
                           get_integer(c, "load", "commodity")});
  }
  std::vector<ScheduleEntry> schedule;
  for (const json& e : get_array(doc, "schedule")) {
    require_keys(e, {"depot", "commodity", "time", "amount"}, "schedule entry");
    schedule.push_back({get_string(e, "depot", "schedule"),
                        get_string(e, "commodity", "schedule"),
                        static_cast<int>(get_integer(e, "time", "schedule")),
                        get_integer(e, "amount", "schedule")});
  }
  return Instance(std::move(depots), std::move(arcs), std::move(commodities),
                  static_cast<int>(get_integer(doc, "horizon", "instance")),
                  get_integer(doc, "capacity", "instance"), std::move(schedule));
}

std::string serialize_instance(const Instance& instance) {
  json doc = json::object();
  json depots = json::array();
  for (const Depot& d : instance.depots()) depots.push_back({{"id", d.id}, {"label", d.label}});
  json arcs = json::array();
  for (const Arc& a : instance.arcs()) {
    arcs.push_back({{"from", a.from}, {"to", a.to}, {"cost", a.cost},
                    {"travel_time", a.travel_time}});
  }
  json commodities = json::array();
  for (const Commodity& c : instance.commodities()) {
    commodities.push_back({{"id", c.id}, {"load", c.load}});
  }
  json schedule = json::array();
  for (const ScheduleEntry& e : instance.schedule()) {
    schedule.push_back({{"depot", e.depot}, {"commodity", e.commodity},
                        {"time", e.time}, {"amount", e.amount}});
  }
  doc["depots"] = std::move(depots);
  doc["arcs"] = std::move(arcs);
  doc["commodities"] = std::move(commodities);
  doc["horizon"] = instance.horizon();
  doc["capacity"] = instance.capacity();
  doc["schedule"] = std::move(schedule);
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

ValidationReport validate_instance(const Instance& instance) {
  ValidationReport report;
  const auto& commodities = instance.commodities();
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    std::int64_t balance = 0;
    for (const ScheduleEntry& e : instance.schedule()) {
      if (e.commodity == commodities[k].id) balance += e.amount;
    }
    if (balance != 0) {
      report.findings.push_back(
          {Finding::Kind::mass_balance,
           "commodity '" + commodities[k].id + "' has net mass balance " +
               std::to_string(balance) + " (supply and demand must cancel)"});
    }
  }

  for (const ScheduleEntry& e : instance.schedule()) {
    const std::size_t k = *instance.commodity_index(e.commodity);
    if (e.amount % commodities[k].load != 0) {
      report.findings.push_back(
          {Finding::Kind::not_load_multiple,
           "schedule amount " + std::to_string(e.amount) + " of '" + e.commodity +
               "' at " + e.depot + " is not a multiple of load " +
               std::to_string(commodities[k].load)});
    }
  }

  for (std::size_t k = 0; k < commodities.size(); ++k) {
    const detail::TimeGrid reach = detail::forward_reachable(instance, k);
    for (const ScheduleEntry& e : instance.schedule()) {
      if (e.amount >= 0 || e.commodity != commodities[k].id) continue;
      const std::size_t d = *instance.depot_index(e.depot);
      if (reach[d][e.time]) continue;
      std::string earliest = "never";
      for (int t = 1; t <= instance.horizon(); ++t) {
        if (reach[d][t]) {
          earliest = "t=" + std::to_string(t);
          break;
        }
      }
      report.findings.push_back(
          {Finding::Kind::unreachable_demand,
           "demand of '" + e.commodity + "' at " + e.depot + ", t=" +
               std::to_string(e.time) + " cannot be reached (earliest arrival " +
               earliest + ")"});
    }
  }
  return report;
}

ArcCostMap parse_arc_costs(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ValidationError("arc-cost map must be a JSON object");
  ArcCostMap costs;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) {
      throw ValidationError("cost of arc '" + key + "' must be a number");
    }
    costs[key] = value.get<double>();
  }
  return costs;
}

const std::vector<std::string>& case_study_arc_keys() {
  static const std::vector<std::string> keys = {
      "N1->N2", "N2->N3", "N2->N4", "N3->N6", "N3->N4", "N4->N5", "N6->N7", "N4->N3"};
  return keys;
}

Instance build_case_study(const ArcCostMap& costs) {
  std::vector<Depot> depots = {{"N1", "Earth"}, {"N2", "LEO"}, {"N3", "LTO"},
                               {"N4", "LLO"},   {"N5", "LS"},  {"N6", "LMO"},
                               {"N7", "Mars"}};
  for (const auto& [key, _] : costs) {
    const auto& keys = case_study_arc_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ValidationError("arc '" + key + "' is not part of the case-study network");
    }
  }
  std::vector<Arc> arcs;
  for (const std::string& key : case_study_arc_keys()) {
    const auto it = costs.find(key);
    if (it == costs.end()) throw ValidationError("missing cost for arc '" + key + "'");
    const std::size_t sep = key.find("->");
    arcs.push_back({key.substr(0, sep), key.substr(sep + 2), it->second, 1});
  }
  std::vector<Commodity> commodities = {{"L1", 10}, {"L2", 20}};

  // Earth supplies at t=1,2; the lunar surface and Mars each take delivery at
  // t=5,6.
  std::vector<ScheduleEntry> schedule = {
      {"N1", "L1", 1, 40},  {"N1", "L2", 1, 80},  {"N1", "L1", 2, 60},
      {"N1", "L2", 2, 120}, {"N5", "L1", 5, -20}, {"N5", "L2", 5, -40},
      {"N5", "L1", 6, -30}, {"N5", "L2", 6, -60}, {"N7", "L1", 5, -20},
      {"N7", "L2", 5, -40}, {"N7", "L1", 6, -30}, {"N7", "L2", 6, -60},
  };
  return Instance(std::move(depots), std::move(arcs), std::move(commodities), 6, 100,
                  std::move(schedule));
}

}  // namespace hamflow
