#include <algorithm>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "properties.hpp"
#include "reqconflict/detector.hpp"

namespace reqconflict {
namespace {

const SynonymLexicon& lex() { return testing::test_lexicon(); }

Requirement req(const std::string& id, OperationMode mode, const std::string& pred, EntitySet io = {}) {
  Requirement r;
  r.id = id;
  r.agent = Entity("UAV");
  r.operation = {mode, pred};
  r.input = io;
  r.output = io;
  return r;
}

Condition when(const char* agent, OperationMode mode, const std::string& pred, EntitySet io = {}) {
  Condition c;
  if (agent) c.agent = Entity(agent);
  c.operation = {mode, pred};
  c.input = io;
  c.output = io;
  return c;
}

bool has(const std::vector<Conflict>& cs, ConflictKind kind, std::vector<std::string> members) {
  return std::any_of(cs.begin(), cs.end(), [&](const Conflict& c) { return c.kind == kind && c.members == members; });
}

TEST(SameGroup, ContradictingOperations) {
  const auto a = req("A", OperationMode::DEFAULT, "issue", {Entity("directive")});
  const auto b = req("B", OperationMode::NOT, "issue", {Entity("directive")});
  const auto cs = check_pair_same_group(a, b, lex());
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].kind, ConflictKind::OPERATION_INCONSISTENCY);
  EXPECT_EQ(cs[0].direction, Direction::BOTH);
}

TEST(SameGroup, DuplicateIsMutualInclusion) {
  const auto a = req("A", OperationMode::DEFAULT, "land");
  auto b = a;
  b.id = "B";
  const auto cs = check_pair_same_group(a, b, lex());
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].kind, ConflictKind::OPERATION_INCLUSION);
  EXPECT_EQ(cs[0].direction, Direction::BOTH);
}

TEST(SameGroup, RestrictionMismatch) {
  auto a = req("A", OperationMode::DEFAULT, "run");
  auto b = req("B", OperationMode::DEFAULT, "run");
  a.restriction = {"every 5 minutes"};
  b.restriction = {"every 15 minutes"};
  const auto cs = check_pair_same_group(a, b, lex());
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].kind, ConflictKind::RESTRICTION_INCONSISTENCY);
  EXPECT_EQ(cs[0].members, (std::vector<std::string>{"A", "B"}));
}

TEST(SameGroup, InclusionIsDirected) {
  const auto a = req("A", OperationMode::DEFAULT, "write");
  const auto b = req("B", OperationMode::ABLE, "write");
  const auto cs = check_pair_same_group(b, a, lex());
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].direction, Direction::FORWARD);
  EXPECT_EQ(cs[0].members, (std::vector<std::string>{"A", "B"}));
}

TEST(CrossGroup, EventOfOneBrokenByOther) {
  auto r2 = req("R2", OperationMode::DEFAULT, "report", {Entity("status")});
  r2.event = EventSpec::single(when("UAV", OperationMode::DEFAULT, "land"));
  const auto r1 = req("R1", OperationMode::NOT, "land");
  const auto out = check_pair_cross_group(r1, r2, lex());
  ASSERT_EQ(out.conflicts.size(), 1u);
  EXPECT_EQ(out.conflicts[0].kind, ConflictKind::EVENT_INCONSISTENCY);
  EXPECT_EQ(out.conflicts[0].members, (std::vector<std::string>{"R2", "R1"}));
}

TEST(CrossGroup, OperationTriggersEvent) {
  const auto r1 = req("R1", OperationMode::DEFAULT, "land");
  auto r2 = req("R2", OperationMode::DEFAULT, "report");
  r2.event = EventSpec::single(when("UAV", OperationMode::DEFAULT, "land"));
  const auto out = check_pair_cross_group(r1, r2, lex());
  ASSERT_EQ(out.operation_event_edges.size(), 1u);
  EXPECT_EQ(out.operation_event_edges[0].from, "R1");
  EXPECT_EQ(out.operation_event_edges[0].to, "R2");
}

TEST(CrossGroup, UnconditionalEventHasNoTrigger) {
  EXPECT_FALSE(operation_event_dependency(req("R1", OperationMode::DEFAULT, "land"),
                                          req("R2", OperationMode::DEFAULT, "report"), lex()));
}

TEST(CrossGroup, SplitOrEventIncludesNarrowerEvent) {
  const auto a = when("UAV", OperationMode::DEFAULT, "land");
  const auto b = when("battery", OperationMode::DEFAULT, "fail");
  auto r1 = req("R1", OperationMode::DEFAULT, "notify");
  r1.event = EventSpec::joined({a, b}, Connective::AND);
  auto r2 = req("R2", OperationMode::DEFAULT, "notify");
  r2.event = EventSpec::single(a);
  EXPECT_TRUE(event_inclusion(r1, r2, lex()));
  EXPECT_FALSE(event_inclusion(r2, r1, lex()));
}

TEST(Io, OutputFeedsInput) {
  auto r1 = req("R1", OperationMode::DEFAULT, "plan", {Entity("flight plan")});
  auto r2 = req("R2", OperationMode::DEFAULT, "execute");
  r2.input = {Entity("flight plan")};
  EXPECT_TRUE(check_pair_io(r1, r2, lex()).has_value());
  r1.output.clear();
  EXPECT_FALSE(check_pair_io(r1, r2, lex()).has_value());
}

TEST(Io, SuppressedByEventInconsistency) {
  auto r1 = req("R1", OperationMode::NOT, "land", {Entity("runway")});
  auto r2 = req("R2", OperationMode::DEFAULT, "report", {Entity("runway")});
  r2.event = EventSpec::single(when("UAV", OperationMode::DEFAULT, "land", {Entity("runway")}));
  EXPECT_TRUE(event_inconsistency(r2, r1, lex()));
  EXPECT_FALSE(check_pair_io(r1, r2, lex()).has_value());
}

TEST(Preprocess, SplitsOrAndDropsSelfContradiction) {
  auto r = req("R", OperationMode::DEFAULT, "notify");
  r.group_id = 1;
  r.event = EventSpec::joined({when("UAV", OperationMode::DEFAULT, "land"), when("battery", OperationMode::DEFAULT,
                                                                                    "fail")},
                              Connective::OR);
  auto s = req("S", OperationMode::DEFAULT, "notify");
  s.group_id = 2;
  s.event = EventSpec::joined(
      {when("UAV", OperationMode::DEFAULT, "land"), when("UAV", OperationMode::NOT, "land")}, Connective::AND);
  const auto pre = preprocess({r, s}, {}, lex());
  ASSERT_EQ(pre.requirements.size(), 2u);
  EXPECT_EQ(pre.requirements[0].id, "R-or1");
  EXPECT_EQ(pre.requirements[1].id, "R-or2");
  EXPECT_NE(pre.requirements[0].group_id, pre.requirements[1].group_id);
  ASSERT_EQ(pre.conflicts.size(), 1u);
  EXPECT_EQ(pre.conflicts[0].kind, ConflictKind::SELF_CONTRADICTORY_EVENT);
  EXPECT_EQ(pre.conflicts[0].members, std::vector<std::string>{"S"});
}

TEST(Preprocess, DistinctTriggersGiveSingletonGroups) {
  std::vector<Requirement> rs;
  for (int i = 0; i < 5; ++i) {
    auto r = req("R" + std::to_string(i), OperationMode::DEFAULT, "land");
    r.agent = Entity("agent" + std::to_string(i));
    rs.push_back(r);
  }
  EXPECT_EQ(group_requirements(rs, lex()).size(), 5u);
}

TEST(Preprocess, ObjectClauseReplacesTuple) {
  const auto s = testing::fixture_sentence("cases.conllu", "CCOMP");
  auto r = extract(s, "CCOMP", 1).requirements.at(0);
  const auto pre = preprocess({r}, {{"CCOMP", s}}, lex());
  ASSERT_EQ(pre.requirements.size(), 1u);
  EXPECT_EQ(pre.requirements[0].agent, Entity("UAV"));
  EXPECT_EQ(pre.requirements[0].operation.predicate, "land");
}

TEST(Detect, EmptySet) { EXPECT_TRUE(detect({}, {}, lex()).conflicts.empty()); }

TEST(Detect, TwoWayInterlock) {
  auto a = req("A", OperationMode::DEFAULT, "merge", {Entity("x")});
  a.input.insert(Entity("y"));
  auto b = req("B", OperationMode::DEFAULT, "split", {Entity("y")});
  b.agent = Entity("operator");
  b.input.insert(Entity("x"));
  const auto cs = detect({a, b}, {}, lex()).conflicts;
  EXPECT_TRUE(has(cs, ConflictKind::INPUT_OUTPUT_INTERLOCK, {"A", "B"}));
}

TEST(Detect, TelecomFixtureFindsKnownConflicts) {
  const auto reqs = testing::fixture_records("telecom.req");
  const auto cs = detect(reqs, {}, SynonymLexicon::builtin()).conflicts;
  EXPECT_EQ(cs.size(), 8u);
  EXPECT_TRUE(has(cs, ConflictKind::OPERATION_INCONSISTENCY, {"TM-01", "TM-02"}));
  EXPECT_TRUE(has(cs, ConflictKind::OPERATION_EVENT_INTERLOCK, {"TM-11", "TM-12"}));
}

TEST(Detect, OutputIsSorted) {
  const auto cs = detect(testing::fixture_records("telecom.req"), {}, lex()).conflicts;
  EXPECT_TRUE(std::is_sorted(cs.begin(), cs.end(), conflict_less));
}

TEST(Detect, MatchesNaiveOracle) {
  const auto r = testing::check_grouped_vs_naive(3, 300, 20);
  EXPECT_TRUE(r.ok()) << r.violations << " mismatches, first: " << r.first_failure;
  EXPECT_GT(r.triggered, 100);
}

TEST(Detect, KindsAreMutuallyExclusivePerPair) {
  const auto r = testing::check_mutual_exclusion(5, 300, 20);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_GT(r.triggered, 100);
}

TEST(Detect, RestrictionInconsistencyIsSymmetric) {
  testing::Generator g(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = g.requirement("A");
    auto b = g.requirement("B");
    if (g.chance(0.5)) {
      b = a;
      b.id = "B";
      b.restriction = g.restriction();
    }
    EXPECT_EQ(restriction_inconsistency(a, b, lex()), restriction_inconsistency(b, a, lex()));
    EXPECT_EQ(operation_inconsistency(a, b, lex()), operation_inconsistency(b, a, lex()));
  }
}

}  // namespace
}  // namespace reqconflict
