#include "hamflow/reports.hpp"

#include <fstream>
#include <sstream>

#include "hamflow/error.hpp"
#include "hamflow/format.hpp"
#include "json.hpp"

namespace hamflow {

namespace {

struct Table {
  std::vector<std::string> key_columns;
  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::int64_t>> values;
};

std::string to_text(const Table& table, int horizon, TableFormat format) {
  if (format == TableFormat::json) {
    nlohmann::ordered_json doc;
    doc["time_index"] = "departure";
    doc["key_columns"] = table.key_columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < table.keys.size(); ++r) {
      rows.push_back({{"key", table.keys[r]}, {"values", table.values[r]}});
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
  }
  std::string out;
  for (const std::string& c : table.key_columns) out += c + ",";
  for (int t = 1; t <= horizon; ++t) {
    out += "depart_" + std::to_string(t) + (t == horizon ? "" : ",");
  }
  out += "\n";
  for (std::size_t r = 0; r < table.keys.size(); ++r) {
    for (const std::string& k : table.keys[r]) out += k + ",";
    for (std::size_t t = 0; t < table.values[r].size(); ++t) {
      out += std::to_string(table.values[r][t]) + (t + 1 == table.values[r].size() ? "" : ",");
    }
    out += "\n";
  }
  return out;
}

}  // namespace

ReportTables render_report_tables(const Model& model, const Assignment& assignment,
                                  TableFormat format) {
  const FeasibilityReport check = verify_assignment(model, assignment);
  if (!check.feasible) {
    std::string why = "assignment does not verify";
    if (check.worst) {
      why += ": " + model.describe(check.worst->first) + " residual " +
             std::to_string(check.worst->second);
    } else if (!check.bound_violations.empty()) {
      why += ": " + model.describe(check.bound_violations.front()) + " is out of bounds";
    }
    throw ValidationError(why);
  }
  const Instance& instance = model.instance();
  const int horizon = instance.horizon();
  const std::size_t commodities = instance.commodities().size();

  Table vehicles{{"arc"}, {}, {}};
  Table cargo{{"arc"}, {}, {}};
  for (std::size_t a = 0; a < instance.arcs().size(); ++a) {
    std::vector<std::int64_t> counts(horizon, 0);
    std::vector<std::int64_t> mass(horizon, 0);
    for (int t = 1; t <= horizon; ++t) {
      if (const auto z = model.vehicle_variable(a, t)) counts[t - 1] = assignment.values[*z];
      for (std::size_t k = 0; k < commodities; ++k) {
        mass[t - 1] += flow_mass(model, assignment, a, k, t);
      }
    }
    const std::string key = arc_key(instance.arcs()[a]);
    vehicles.keys.push_back({key});
    vehicles.values.push_back(std::move(counts));
    cargo.keys.push_back({key});
    cargo.values.push_back(std::move(mass));
  }

  Table inventory{{"depot", "commodity"}, {}, {}};
  for (std::size_t k = 0; k < commodities; ++k) {
    for (std::size_t d = 0; d < instance.depots().size(); ++d) {
      std::vector<std::int64_t> on_hand(horizon, 0);
      std::int64_t delivered = 0;
      for (int t = 1; t <= horizon; ++t) {
        const std::int64_t net = instance.net_supply(d, k, t);
        if (net < 0) delivered += -net;
        std::int64_t departing = 0;
        for (std::size_t a = 0; a < instance.arcs().size(); ++a) {
          if (instance.arc_tail(a) == d) departing += flow_mass(model, assignment, a, k, t);
        }
        on_hand[t - 1] = departing + delivered;
      }
      inventory.keys.push_back({instance.depots()[d].id, instance.commodities()[k].id});
      inventory.values.push_back(std::move(on_hand));
    }
  }
  return {to_text(vehicles, horizon, format), to_text(cargo, horizon, format),
          to_text(inventory, horizon, format)};
}

void render_reports(const Model& model, const Assignment& assignment,
                    const std::filesystem::path& directory, TableFormat format) {
  const ReportTables tables = render_report_tables(model, assignment, format);
  const std::string ext = format == TableFormat::csv ? ".csv" : ".json";
  std::filesystem::create_directories(directory);
  write_text_file(directory / ("vehicles" + ext), tables.vehicles);
  write_text_file(directory / ("cargo" + ext), tables.cargo);
  write_text_file(directory / ("inventory" + ext), tables.inventory);
}

std::string histogram_csv(const SampleSet& samples) {
  const SummaryStats stats = summarize_samples(samples);
  std::string out = "kind,bin_lower,bin_upper,count\n";
  for (const HistogramBin& bin : stats.bins) {
    out += "bin," + format_real(bin.lower) + "," + format_real(bin.upper) + "," +
           std::to_string(bin.count) + "\n";
  }
  out += "summary," + format_real(stats.best_energy) + "," + format_real(stats.worst_energy) +
         "," + std::to_string(stats.count) + "\n";
  return out;
}

void emit_histogram(const SampleSet& samples, const std::filesystem::path& file) {
  write_text_file(file, histogram_csv(samples));
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) throw Error("failed to write '" + file.string() + "'");
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open '" + file.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace hamflow
