#include "hamflow/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "hamflow/error.hpp"
#include "hamflow/format.hpp"
#include "hamflow/hamiltonian.hpp"
#include "hamflow/reports.hpp"
#include "hamflow/solvers.hpp"
#include "json.hpp"

namespace hamflow {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSynopsis =
    "usage: hamflow <validate|compile|solve|verify|report> --instance PATH [--costs PATH]\n"
    "               [--alpha A] [--method exact|anneal|bruteforce] [--samples N] [--seed S]\n"
    "               [--out DIR] [--format csv|json]\n";

constexpr const char* kCaseStudy = "builtin:case-study";

class UsageError : public Error {
 public:
  using Error::Error;
};

Instance load(const RunConfig& config) {
  if (config.instance_path == kCaseStudy) {
    if (config.costs_path.empty()) throw UsageError("builtin:case-study needs --costs");
    return build_case_study(parse_arc_costs(read_text_file(config.costs_path)));
  }
  Instance instance = load_instance(config.instance_path);
  if (config.costs_path.empty()) return instance;
  // Override arc costs from the map.
  std::vector<Arc> arcs = instance.arcs();
  for (const auto& [key, cost] : parse_arc_costs(read_text_file(config.costs_path))) {
    const auto it = std::find_if(arcs.begin(), arcs.end(),
                                 [&](const Arc& a) { return arc_key(a) == key; });
    if (it == arcs.end()) throw ValidationError("cost map names unknown arc '" + key + "'");
    it->cost = cost;
  }
  return Instance(instance.depots(), std::move(arcs), instance.commodities(), instance.horizon(),
                  instance.capacity(), instance.schedule());
}

Model build_model(const RunConfig& config) {
  Model model = expand_model(load(config));
  return config.prune ? prune_model(model) : model;
}

TableFormat table_format(const RunConfig& config) {
  return config.format == "json" ? TableFormat::json : TableFormat::csv;
}

Assignment load_assignment(const RunConfig& config, const Model& model) {
  if (!config.tables_path.empty()) {
    return reconstruct_solution(model, parse_schedule_tables(read_text_file(config.tables_path)));
  }
  if (config.solution_path.empty()) {
    throw UsageError(config.command + " needs --solution or --tables");
  }
  return parse_solution(model, read_text_file(config.solution_path));
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
  const ValidationReport report = validate_instance(load(config));
  out << report.findings.size() << " findings\n";
  for (const Finding& f : report.findings) out << "  " << f.message << "\n";
  return report.ok() ? kExitOk : kExitInvalid;
}

int cmd_compile(const RunConfig& config, std::ostream& out) {
  const Model model = build_model(config);
  const Hamiltonian h = compile_hamiltonian(model, config.alpha);
  const fs::path dir = config.out_dir;
  std::ostringstream poly;
  export_polynomial(h.polynomial(), poly,
                    {{"quantum_fluctuation_coefficient", "1/sqrt(7)"},
                     {"relaxation_schedule", "2"}});
  write_text_file(dir / "hamiltonian.txt", poly.str());
  write_text_file(dir / "model.json", dump_model(model));

  bool has_terms = !h.polynomial().linear.empty() || !h.polynomial().quadratic.empty();
  const std::string range = has_terms ? format_fixed(dynamic_range_db(h.polynomial()), 2) : "n/a";
  if (config.format == "json") {
    nlohmann::ordered_json doc;
    doc["decision_variables"] = h.decision_count();
    doc["slack_variables"] = h.slack_count();
    doc["variables"] = h.variables().size();
    doc["levels"] = h.total_levels();
    doc["alpha"] = h.alpha();
    doc["dynamic_range_db"] = range;
    out << doc.dump(2) << "\n";
  } else {
    out << "decision_variables " << h.decision_count() << "\n"
        << "slack_variables " << h.slack_count() << "\n"
        << "variables " << h.variables().size() << "\n"
        << "levels " << h.total_levels() << "\n"
        << "alpha " << format_real(h.alpha()) << "\n"
        << "dynamic_range_db " << range << "\n";
  }
  return kExitOk;
}

int finish_solution(const RunConfig& config, const Model& model, const Sample& best,
                    std::ostream& out) {
  const fs::path dir = config.out_dir;
  write_text_file(dir / "solution.json", solution_json(model, best.assignment, best.objective));
  render_reports(model, best.assignment, dir, table_format(config));
  out << "objective " << format_real(best.objective) << "\n";
  return kExitOk;
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Model model = build_model(config);
  if (config.method == "anneal") {
    const Hamiltonian h = compile_hamiltonian(model, config.alpha);
    AnnealParams params = default_anneal_params(h, model);
    params.restarts = config.samples;
    if (config.sweeps > 0) params.sweeps = config.sweeps;
    const SampleSet set = anneal_sample(h, model, params, config.seed);
    const fs::path dir = config.out_dir;
    write_text_file(dir / "samples.csv", samples_csv(set));
    emit_histogram(set, dir / "histogram.csv");
    const SummaryStats stats = summarize_samples(set);
    out << "samples " << stats.count << "\n"
        << "feasible_fraction " << format_fixed(stats.feasible_fraction, 3) << "\n"
        << "best_energy " << format_real(stats.best_energy) << "\n"
        << "median_energy " << format_real(stats.median_energy) << "\n"
        << "mean_wall_time_s " << format_fixed(stats.mean_wall_time, 3) << "\n";
    const Sample* best = nullptr;
    for (const Sample& s : set.samples) {
      if (s.feasible) {
        best = &s;
        break;
      }
    }
    if (!best) {
      err << "error: no feasible sample among " << set.samples.size() << "\n";
      return kExitInvalid;
    }
    return finish_solution(config, model, *best, out);
  }

  const SolveResult result = config.method == "bruteforce"
                                 ? brute_force_oracle(model)
                                 : solve_exact(model, config.time_limit);
  if (result.status == SolveStatus::infeasible) {
    err << "error: model is infeasible\n";
    return kExitInvalid;
  }
  if (!result.best) {
    err << "error: time limit reached without a feasible schedule\n";
    return kExitInvalid;
  }
  out << "status " << (result.status == SolveStatus::optimal ? "optimal" : "time_limit") << "\n"
      << "nodes " << result.nodes << "\n";
  return finish_solution(config, model, *result.best, out);
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Model model = build_model(config);
  const Assignment assignment = load_assignment(config, model);
  const FeasibilityReport report = verify_assignment(model, assignment);
  out << (report.feasible ? "feasible" : "infeasible") << "\n"
      << "objective " << format_real(evaluate_objective(model, assignment)) << "\n";
  for (std::size_t r = 0; r < report.residuals.size(); ++r) {
    if (report.residuals[r] != 0) {
      out << "  " << model.describe(model.constraints()[r].tag) << " residual "
          << report.residuals[r] << "\n";
    }
  }
  for (std::size_t v : report.bound_violations) {
    out << "  " << model.describe(v) << " outside [0, " << model.variables()[v].upper_bound
        << "]\n";
  }
  if (!report.feasible) {
    err << "error: assignment violates " << report.bound_violations.size() << " bounds";
    if (report.worst) {
      err << "; worst row " << model.describe(report.worst->first) << " residual "
          << report.worst->second;
    }
    err << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
  const Model model = build_model(config);
  const Assignment assignment = load_assignment(config, model);
  render_reports(model, assignment, config.out_dir, table_format(config));
  out << "objective " << format_real(evaluate_objective(model, assignment)) << "\n";
  return kExitOk;
}

}  // namespace

std::string solution_json(const Model& model, const Assignment& assignment, double objective) {
  nlohmann::ordered_json doc;
  doc["objective"] = objective;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < assignment.values.size(); ++i) {
    if (assignment.values[i] != 0) values[model.describe(i)] = assignment.values[i];
  }
  doc["values"] = std::move(values);
  return doc.dump(2) + "\n";
}

Assignment parse_solution(const Model& model, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("solution file: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("values") || !doc.at("values").is_object()) {
    throw ValidationError("solution file needs an object 'values'");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < model.variables().size(); ++i) index[model.describe(i)] = i;
  Assignment assignment = zero_assignment(model);
  for (const auto& [name, value] : doc.at("values").items()) {
    const auto it = index.find(name);
    if (it == index.end()) throw ValidationError("solution names unknown variable " + name);
    if (!value.is_number_integer()) throw ValidationError("value of " + name + " must be integer");
    assignment.values[it->second] = value.get<std::int64_t>();
  }
  return assignment;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Time-expanded multicommodity flow to penalty Hamiltonian compiler"};
  app.add_option("command", config.command, "validate|compile|solve|verify|report")
      ->required()
      ->check(CLI::IsMember({"validate", "compile", "solve", "verify", "report"}));
  app.add_option("--instance", config.instance_path,
                 "instance JSON, or builtin:case-study with --costs")
      ->required();
  app.add_option("--costs", config.costs_path, "arc-cost map JSON");
  double alpha = 0.0;
  auto* alpha_opt = app.add_option("--alpha", alpha, "penalty weight");
  app.add_option("--method", config.method)
      ->check(CLI::IsMember({"exact", "anneal", "bruteforce"}));
  app.add_option("--samples", config.samples, "annealing restarts")->check(CLI::PositiveNumber);
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed);
  app.add_option("--out", config.out_dir);
  app.add_option("--format", config.format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--solution", config.solution_path, "solution JSON for verify/report");
  app.add_option("--tables", config.tables_path, "published schedule tables for verify/report");
  bool no_prune = false;
  app.add_flag("--no-prune", no_prune, "keep unreachable variables");
  app.add_option("--time-limit", config.time_limit, "exact solver time limit, seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--sweeps", config.sweeps, "annealing sweeps per restart");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kSynopsis;
    return kExitUsage;
  }
  if (alpha_opt->count() > 0) config.alpha = alpha;
  config.prune = !no_prune;
  if (seed_opt->count() > 0) {
    config.seed = seed;
  } else if (const char* env = std::getenv("HAMFLOW_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: HAMFLOW_SEED must be an unsigned integer\n" << kSynopsis;
      return kExitUsage;
    }
  }

  try {
    if (config.command == "validate") return cmd_validate(config, out);
    if (config.command == "compile") return cmd_compile(config, out);
    if (config.command == "solve") return cmd_solve(config, out, err);
    if (config.command == "verify") return cmd_verify(config, out, err);
    return cmd_report(config, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << kSynopsis;
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace hamflow
