#include <gtest/gtest.h>

#include <random>
#include <string>

#include "hamflow/error.hpp"
#include "hamflow/instance.hpp"
#include "support/test_support.hpp"

namespace hamflow {
namespace {

using testing::case_study;
using testing::uniform_costs;

std::string two_depot_document(const std::string& schedule, const std::string& to = "B") {
  return R"({"depots": [{"id": "A", "label": ""}, {"id": "B", "label": ""}],
             "arcs": [{"from": "A", "to": ")" + to + R"(", "cost": 1, "travel_time": 1}],
             "commodities": [{"id": "C", "load": 10}],
             "horizon": 3, "capacity": 100,
             "schedule": )" + schedule + "}";
}

TEST(ParseInstance, CaseStudyDocumentMatchesBuilder) {
  const Instance built = case_study();
  const Instance parsed = parse_instance(serialize_instance(built));
  EXPECT_EQ(parsed, built);
  EXPECT_EQ(parsed.depots().size(), 7u);
  EXPECT_EQ(parsed.arcs().size(), 8u);
  ASSERT_EQ(parsed.commodities().size(), 2u);
  EXPECT_EQ(parsed.commodities()[0].load, 10);
  EXPECT_EQ(parsed.commodities()[1].load, 20);
  EXPECT_EQ(parsed.capacity(), 100);
  EXPECT_EQ(parsed.horizon(), 6);
}

TEST(ParseInstance, EmptyScheduleIsAccepted) {
  const Instance instance = parse_instance(two_depot_document("[]"));
  EXPECT_TRUE(instance.schedule().empty());
}

TEST(ParseInstance, UnknownDepotIsRejected) {
  EXPECT_THROW(parse_instance(two_depot_document("[]", "N9")), ValidationError);
}

TEST(ParseInstance, SyntaxErrorReportsOffset) {
  const std::string text = R"({"depots": [}, )";
  try {
    parse_instance(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 13u);
  }
}

TEST(ParseInstance, StructuralRulesAreEnforced) {
  const std::string base_arcs = R"("arcs": [{"from": "A", "to": "B", "cost": 1, "travel_time": 1}],)";
  auto doc = [&](const std::string& depots, const std::string& commodities, int horizon,
                 int capacity, const std::string& schedule) {
    return "{\"depots\": " + depots + ", " + base_arcs + " \"commodities\": " + commodities +
           ", \"horizon\": " + std::to_string(horizon) +
           ", \"capacity\": " + std::to_string(capacity) + ", \"schedule\": " + schedule + "}";
  };
  const std::string depots = R"([{"id": "A", "label": ""}, {"id": "B", "label": ""}])";
  const std::string commodity = R"([{"id": "C", "load": 10}])";
  EXPECT_NO_THROW(parse_instance(doc(depots, commodity, 2, 100, "[]")));
  EXPECT_THROW(parse_instance(doc(R"([{"id": "A", "label": ""}, {"id": "A", "label": ""}])",
                                  commodity, 2, 100, "[]")),
               ValidationError);
  EXPECT_THROW(parse_instance(doc(depots, commodity, 0, 100, "[]")), ValidationError);
  EXPECT_THROW(parse_instance(doc(depots, commodity, 2, 0, "[]")), ValidationError);
  EXPECT_THROW(parse_instance(doc(depots, R"([{"id": "C", "load": 0}])", 2, 100, "[]")),
               ValidationError);
  EXPECT_THROW(
      parse_instance(doc(depots, commodity, 2, 100,
                         R"([{"depot": "A", "commodity": "C", "time": 1, "amount": 15}])")),
      ValidationError);
  EXPECT_THROW(
      parse_instance(doc(depots, commodity, 2, 100,
                         R"([{"depot": "A", "commodity": "C", "time": 3, "amount": 10}])")),
      ValidationError);
}

TEST(ParseInstance, UnknownKeyIsRejected) {
  std::string text = two_depot_document("[]");
  text.insert(1, R"("extra": 1, )");
  EXPECT_THROW(parse_instance(text), ValidationError);
}

TEST(ParseInstance, RoundTripOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Instance instance = testing::random_micro_instance(rng);
    EXPECT_EQ(parse_instance(serialize_instance(instance)), instance);
  }
}

TEST(ValidateInstance, CaseStudyHasNoFindings) {
  EXPECT_TRUE(validate_instance(case_study()).ok());
  EXPECT_TRUE(validate_instance(build_case_study(uniform_costs(1.0))).ok());
}

TEST(ValidateInstance, UnbalancedSupplyIsReported) {
  const Instance instance = parse_instance(
      two_depot_document(R"([{"depot": "A", "commodity": "C", "time": 1, "amount": 10}])"));
  const ValidationReport report = validate_instance(instance);
  EXPECT_TRUE(report.has(Finding::Kind::mass_balance));
  EXPECT_EQ(report.findings.size(), 1u);
}

TEST(ValidateInstance, DemandBeforeEarliestArrivalIsReported) {
  // Origin A, demand two hops away at t=1: the earliest arrival is t=3.
  const Instance instance(
      {{"A", ""}, {"B", ""}, {"C", ""}}, {{"A", "B", 1.0, 1}, {"B", "C", 1.0, 1}},
      {{"K", 10}}, 3, 100, {{"A", "K", 1, 10}, {"C", "K", 1, -10}});
  const ValidationReport report = validate_instance(instance);
  EXPECT_TRUE(report.has(Finding::Kind::unreachable_demand));
  EXPECT_FALSE(report.has(Finding::Kind::mass_balance));

  const Instance reachable(
      {{"A", ""}, {"B", ""}, {"C", ""}}, {{"A", "B", 1.0, 1}, {"B", "C", 1.0, 1}},
      {{"K", 10}}, 3, 100, {{"A", "K", 1, 10}, {"C", "K", 3, -10}});
  EXPECT_TRUE(validate_instance(reachable).ok());
}

TEST(BuildCaseStudy, CostsPassThrough) {
  const Instance instance = build_case_study(uniform_costs(1.0));
  for (const Arc& arc : instance.arcs()) {
    EXPECT_EQ(arc.cost, 1.0);
    EXPECT_EQ(arc.travel_time, 1);
  }
}

TEST(BuildCaseStudy, MissingArcCostIsRejected) {
  ArcCostMap costs = uniform_costs(1.0);
  costs.erase("N4->N3");
  EXPECT_THROW(build_case_study(costs), ValidationError);
}

TEST(BuildCaseStudy, ScheduleMatchesNodesTable) {
  const Instance instance = case_study();
  const auto n1 = *instance.depot_index("N1");
  const auto n5 = *instance.depot_index("N5");
  const auto n7 = *instance.depot_index("N7");
  const auto l1 = *instance.commodity_index("L1");
  const auto l2 = *instance.commodity_index("L2");
  EXPECT_EQ(instance.net_supply(n5, l1, 5), -20);
  EXPECT_EQ(instance.net_supply(n1, l1, 1), 40);
  EXPECT_EQ(instance.net_supply(n1, l1, 2), 60);
  EXPECT_EQ(instance.net_supply(n1, l2, 1), 80);
  EXPECT_EQ(instance.net_supply(n1, l2, 2), 120);
  EXPECT_EQ(instance.net_supply(n7, l2, 6), -60);
  EXPECT_EQ(instance.net_supply(n7, l2, 4), 0);
  EXPECT_EQ(instance.total_supply_mass(l1), 100);
  EXPECT_EQ(instance.total_supply_mass(l2), 200);
}

TEST(BuildCaseStudy, FixtureRespectsCheapArcRemark) {
  // Exactly two arcs cost at most 0.86: N3->N4 and N6->N7.
  int cheap = 0;
  for (const Arc& arc : case_study().arcs()) {
    if (arc.cost <= 0.86) {
      ++cheap;
      EXPECT_TRUE(arc_key(arc) == "N3->N4" || arc_key(arc) == "N6->N7") << arc_key(arc);
    }
  }
  EXPECT_EQ(cheap, 2);
}

}  // namespace
}  // namespace hamflow
