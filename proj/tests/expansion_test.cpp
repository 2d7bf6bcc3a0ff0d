#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hamflow/error.hpp"
#include "hamflow/expansion.hpp"
#include "hamflow/reports.hpp"
#include "hamflow/solvers.hpp"
#include "support/test_support.hpp"

namespace hamflow {
namespace {

using testing::case_study;
using testing::micro_instance;
using testing::reference_tables;

// Conservation residuals straight from the instance, independent of the
// model's row storage: out - in - d per (depot, commodity, time).
std::map<std::tuple<std::size_t, std::size_t, int>, std::int64_t> conservation_residuals(
    const Model& model, const Assignment& a) {
  const Instance& inst = model.instance();
  std::map<std::tuple<std::size_t, std::size_t, int>, std::int64_t> out;
  for (std::size_t d = 0; d < inst.depots().size(); ++d) {
    for (std::size_t k = 0; k < inst.commodities().size(); ++k) {
      for (int t = 1; t <= inst.horizon(); ++t) out[{d, k, t}] = -inst.net_supply(d, k, t);
    }
  }
  for (std::size_t v = 0; v < model.variables().size(); ++v) {
    const Variable& var = model.variables()[v];
    if (var.kind != VariableKind::flow) continue;
    const std::int64_t mass = inst.commodities()[var.commodity].load * a.values[v];
    out[{inst.arc_tail(var.arc), var.commodity, var.time}] += mass;
    const int arrival = var.time + inst.arcs()[var.arc].travel_time;
    if (arrival <= inst.horizon()) out[{inst.arc_head(var.arc), var.commodity, arrival}] -= mass;
  }
  return out;
}

std::int64_t delivered_mass(const Model& model, const Assignment& a, const std::string& depot,
                            const std::string& commodity) {
  const Instance& inst = model.instance();
  const auto d = *inst.depot_index(depot);
  const auto k = *inst.commodity_index(commodity);
  std::int64_t in = 0;
  std::int64_t out = 0;
  for (std::size_t v = 0; v < model.variables().size(); ++v) {
    const Variable& var = model.variables()[v];
    if (var.kind != VariableKind::flow || var.commodity != k) continue;
    const std::int64_t mass = inst.commodities()[k].load * a.values[v];
    if (inst.arc_head(var.arc) == d) in += mass;
    if (inst.arc_tail(var.arc) == d) out += mass;
  }
  return in - out;
}

TEST(ExpandModel, CaseStudyCardinalities) {
  const Model model = expand_model(case_study());
  EXPECT_EQ(model.count(VariableKind::flow), 96u);
  EXPECT_EQ(model.count(VariableKind::vehicle), 48u);
  EXPECT_EQ(model.count(ConstraintKind::conservation), 84u);
  EXPECT_EQ(model.count(ConstraintKind::capacity), 48u);
}

TEST(ExpandModel, MicroCardinalities) {
  const Model model = expand_model(micro_instance());
  EXPECT_EQ(model.count(VariableKind::flow), 2u);
  EXPECT_EQ(model.count(VariableKind::vehicle), 2u);
  EXPECT_EQ(model.count(ConstraintKind::conservation), 4u);
  EXPECT_EQ(model.count(ConstraintKind::capacity), 2u);
}

TEST(ExpandModel, ArrivalsBeyondHorizonAreExcluded) {
  const Instance inst({{"A", ""}, {"B", ""}}, {{"A", "B", 1.0, 2}}, {{"K", 10}}, 3, 100, {});
  const Model model = expand_model(inst);
  // Departures t with t + 2 <= 4: t = 1, 2.
  EXPECT_EQ(model.count(VariableKind::flow), 2u);
  EXPECT_FALSE(model.flow_variable(0, 0, 3).has_value());
}

TEST(ExpandModel, UpperBounds) {
  const Model model = expand_model(case_study());
  for (const Variable& v : model.variables()) {
    if (v.kind == VariableKind::flow) {
      // Total supply: 100 mass of L1 (load 10), 200 mass of L2 (load 20).
      EXPECT_EQ(v.upper_bound, 10);
    } else {
      EXPECT_EQ(v.upper_bound, 3);  // ceil(300 / 100)
    }
  }
}

TEST(ExpandModel, UnbalancedInstanceIsRejected) {
  const Instance inst({{"A", ""}, {"B", ""}}, {{"A", "B", 1.0, 1}}, {{"K", 10}}, 2, 100,
                      {{"A", "K", 1, 10}});
  EXPECT_THROW(expand_model(inst), ValidationError);
}

TEST(ExpandModel, EmptyScheduleZeroAssignmentIsFeasible) {
  const Instance inst({{"A", ""}, {"B", ""}}, {{"A", "B", 1.0, 1}}, {{"K", 10}}, 2, 100, {});
  const Model model = expand_model(inst);
  const FeasibilityReport report = verify_assignment(model, zero_assignment(model));
  EXPECT_TRUE(report.feasible);
  EXPECT_EQ(evaluate_objective(model, zero_assignment(model)), 0.0);
}

TEST(ExpandModel, DumpIsStable) {
  const Model model = expand_model(micro_instance());
  const std::string dump = dump_model(model);
  EXPECT_EQ(dump, dump_model(expand_model(micro_instance())));
  EXPECT_EQ(dump, read_text_file(testing::data_path("golden/micro_model.json")));
}

TEST(PruneModel, CaseStudyReachability) {
  const Model full = expand_model(case_study());
  const Model pruned = prune_model(full);
  const Instance& inst = pruned.instance();
  const auto arc = [&](const char* from, const char* to) { return *inst.arc_index(from, to); };
  const auto l1 = *inst.commodity_index("L1");
  EXPECT_TRUE(pruned.flow_variable(arc("N1", "N2"), l1, 1).has_value());
  // The earliest L1 mass at N4 arrives at t=3 (N1 -> N2 -> N4).
  EXPECT_FALSE(pruned.flow_variable(arc("N4", "N5"), l1, 1).has_value());
  EXPECT_FALSE(pruned.flow_variable(arc("N4", "N5"), l1, 2).has_value());
  EXPECT_LT(pruned.variables().size(), full.variables().size());
  EXPECT_GT(pruned.variables().size(), 0u);
  EXPECT_LE(pruned.variables().size(), 144u);
}

TEST(PruneModel, MicroKeepsTheOnlyUsefulDeparture) {
  // Nothing can sit at A at t=2 (no waiting) and a t=2 departure arrives
  // after the horizon, so only the t=1 flow and vehicle survive.
  const Model full = expand_model(micro_instance());
  const Model pruned = prune_model(full);
  EXPECT_EQ(pruned.count(VariableKind::flow), 1u);
  EXPECT_EQ(pruned.count(VariableKind::vehicle), 1u);
  EXPECT_TRUE(pruned.flow_variable(0, 0, 1).has_value());
  EXPECT_TRUE(pruned.vehicle_variable(0, 1).has_value());
  EXPECT_EQ(solve_exact(pruned).best->objective, solve_exact(full).best->objective);
}

TEST(PruneModel, IdempotentAndReachableVariablesKept) {
  const Model once = prune_model(expand_model(case_study()));
  const Model twice = prune_model(once);
  EXPECT_EQ(twice.variables(), once.variables());
  EXPECT_EQ(twice.constraints(), once.constraints());
}

TEST(PruneModel, PreservesOptimumOnRandomInstances) {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    const Instance inst = testing::random_micro_instance(rng);
    const Model full = expand_model(inst);
    const SolveResult a = solve_exact(full);
    std::optional<Model> pruned;
    try {
      pruned = prune_model(full);
    } catch (const InfeasibleError&) {
      EXPECT_EQ(a.status, SolveStatus::infeasible);
      continue;
    }
    const SolveResult b = solve_exact(*pruned);
    ASSERT_EQ(a.status, b.status) << serialize_instance(inst);
    if (a.best) {
      EXPECT_DOUBLE_EQ(a.best->objective, b.best->objective) << serialize_instance(inst);
      ++compared;
    }
  }
  EXPECT_GT(compared, 10);
}

TEST(VerifyAssignment, ResidualsAgreeWithDirectEvaluation) {
  std::mt19937_64 rng(5);
  const Model model = expand_model(case_study());
  for (int trial = 0; trial < 200; ++trial) {
    Assignment a = zero_assignment(model);
    for (std::size_t v = 0; v < a.values.size(); ++v) {
      a.values[v] = std::uniform_int_distribution<std::int64_t>(
          0, model.variables()[v].upper_bound)(rng);
    }
    const FeasibilityReport report = verify_assignment(model, a);
    const auto direct = conservation_residuals(model, a);
    for (std::size_t r = 0; r < model.constraints().size(); ++r) {
      const ConstraintTag& tag = model.constraints()[r].tag;
      if (tag.kind != ConstraintKind::conservation) continue;
      EXPECT_EQ(report.residuals[r], direct.at({tag.depot, tag.commodity, tag.time}));
    }
  }
}

TEST(VerifyAssignment, BoundViolationIsAFinding) {
  const Model model = expand_model(micro_instance());
  Assignment a = zero_assignment(model);
  a.values[0] = -1;
  const FeasibilityReport report = verify_assignment(model, a);
  EXPECT_FALSE(report.feasible);
  ASSERT_EQ(report.bound_violations.size(), 1u);
  EXPECT_EQ(report.bound_violations[0], 0u);
}

TEST(ReconstructSolution, ReferenceTablesAreFeasible) {
  const Model model = prune_model(expand_model(case_study()));
  const Assignment a = reconstruct_solution(model, reference_tables());
  const FeasibilityReport report = verify_assignment(model, a);
  EXPECT_TRUE(report.feasible);
  for (std::int64_t r : report.residuals) EXPECT_EQ(r, 0);
  EXPECT_EQ(delivered_mass(model, a, "N5", "L1"), 50);
  EXPECT_EQ(delivered_mass(model, a, "N5", "L2"), 100);
  EXPECT_EQ(delivered_mass(model, a, "N7", "L1"), 50);
  EXPECT_EQ(delivered_mass(model, a, "N7", "L2"), 100);
}

TEST(ReconstructSolution, FirstLegSplit) {
  const Model model = prune_model(expand_model(case_study()));
  const Assignment a = reconstruct_solution(model, reference_tables());
  const Instance& inst = model.instance();
  const auto n1n2 = *inst.arc_index("N1", "N2");
  const auto l1 = *inst.commodity_index("L1");
  const auto l2 = *inst.commodity_index("L2");
  // Cargo 120 leaves N1 at departure t=1: 4 units of L1 (40) and 4 of L2 (80).
  EXPECT_EQ(a.values[*model.flow_variable(n1n2, l1, 1)], 4);
  EXPECT_EQ(a.values[*model.flow_variable(n1n2, l2, 1)], 4);
  EXPECT_EQ(a.values[*model.flow_variable(n1n2, l1, 2)], 6);
  EXPECT_EQ(a.values[*model.flow_variable(n1n2, l2, 2)], 6);
  // Rows with zero cargo carry no flow.
  const auto n2n4 = *inst.arc_index("N2", "N4");
  for (int t = 1; t <= inst.horizon(); ++t) {
    for (std::size_t k = 0; k < 2; ++k) {
      if (const auto v = model.flow_variable(n2n4, k, t)) EXPECT_EQ(a.values[*v], 0);
    }
  }
}

TEST(ReconstructSolution, InconsistentCargoIsRejected) {
  const Model model = prune_model(expand_model(case_study()));
  ScheduleTables tables = reference_tables();
  tables.cargo["N1->N2"][1] = 130;
  EXPECT_THROW(reconstruct_solution(model, tables), ValidationError);
}

TEST(EvaluateObjective, ReferenceScheduleTraversals) {
  const Model model = prune_model(expand_model(build_case_study(testing::uniform_costs(1.0))));
  const Assignment a = reconstruct_solution(model, reference_tables());
  EXPECT_DOUBLE_EQ(evaluate_objective(model, a), 17.0);
  EXPECT_EQ(evaluate_objective(model, zero_assignment(model)), 0.0);
}

TEST(VerifyAssignment, RemovedVehicleLeavesCapacityResidual) {
  const Model model = prune_model(expand_model(case_study()));
  Assignment a = reconstruct_solution(model, reference_tables());
  const Instance& inst = model.instance();
  const auto arc = *inst.arc_index("N4", "N5");
  int step = 0;
  for (int t = 1; t <= inst.horizon(); ++t) {
    const auto z = model.vehicle_variable(arc, t);
    if (z && a.values[*z] == 1 &&
        flow_mass(model, a, arc, 0, t) + flow_mass(model, a, arc, 1, t) == 60) {
      step = t;
    }
  }
  ASSERT_NE(step, 0);
  a.values[*model.vehicle_variable(arc, step)] = 0;
  const FeasibilityReport report = verify_assignment(model, a);
  EXPECT_FALSE(report.feasible);
  ASSERT_TRUE(report.worst.has_value());
  EXPECT_EQ(report.worst->first.kind, ConstraintKind::capacity);
  EXPECT_EQ(report.worst->first.arc, arc);
  EXPECT_EQ(report.worst->first.time, step);
  EXPECT_EQ(report.worst->second, 60);
  int nonzero = 0;
  for (std::int64_t r : report.residuals) nonzero += r != 0;
  EXPECT_EQ(nonzero, 1);
}

TEST(ConservationTelescoping, DeliveredEqualsSupplied) {
  const Model model = prune_model(expand_model(case_study()));
  const SolveResult result = solve_exact(model);
  ASSERT_TRUE(result.best.has_value());
  for (const Assignment& a : {result.best->assignment, reconstruct_solution(model, reference_tables())}) {
    for (const char* k : {"L1", "L2"}) {
      const std::int64_t delivered = delivered_mass(model, a, "N5", k) +
                                     delivered_mass(model, a, "N7", k);
      const auto ki = *model.instance().commodity_index(k);
      EXPECT_EQ(delivered, model.instance().total_supply_mass(ki));
    }
  }
}

}  // namespace
}  // namespace hamflow
