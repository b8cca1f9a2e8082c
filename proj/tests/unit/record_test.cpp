#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "reqconflict/record.hpp"

namespace reqconflict {
namespace {

TEST(Record, RandomTuplesRoundTrip) {
  testing::Generator g(17);
  for (int i = 0; i < 100; ++i) {
    auto r = g.requirement("R" + std::to_string(i));
    r.group_id = i;
    const auto text = serialize_requirement(r);
    EXPECT_EQ(parse_requirement(text), r) << text;
  }
}

TEST(Record, EscapedQuotesRoundTrip) {
  Requirement r;
  r.id = "Q1";
  r.agent = Entity("the \"main\" unit", {"back\\slash"});
  r.operation = {OperationMode::ABLE, "say \"hi\""};
  add_constraint(r.restriction, "within 5 seconds");
  EXPECT_EQ(parse_requirement(serialize_requirement(r)), r);
}

TEST(Record, ParsesHandWrittenFixture) {
  const auto reqs = testing::fixture_records("telecom.req");
  ASSERT_EQ(reqs.size(), 14u);
  EXPECT_EQ(reqs[1].id, "TM-02");
  EXPECT_EQ(reqs[1].operation.mode, OperationMode::NOT);
  EXPECT_EQ(*reqs[1].input.begin(), Entity("call", {"international"}));
  EXPECT_EQ(reqs[8].event.conditions.size(), 1u);
}

TEST(Record, ReportsLineOfError) {
  const std::string text = "requirement \"A\"\n  group: 1\n  event: ALL\n  agent: none\n  operation: MAYBE \"x\"\n";
  try {
    parse_requirements(text);
    FAIL() << "expected RecordError";
  } catch (const RecordError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(Record, RejectsUnterminatedRecord) {
  EXPECT_THROW(parse_requirements("requirement \"A\"\n  group: 1\n"), RecordError);
}

TEST(Record, JsonUsesTupleKeys) {
  const auto reqs = testing::fixture_records("telecom.req");
  const auto j = to_json(reqs[8]);
  EXPECT_EQ(j["id"], "TM-09");
  EXPECT_EQ(j["groupId"], 9);
  EXPECT_EQ(j["agent"]["base"], "Firewall");
  EXPECT_EQ(j["operation"]["mode"], "DEFAULT");
  EXPECT_EQ(j["event"]["conditions"].size(), 1u);
  EXPECT_TRUE(j["restriction"].is_array());
}

}  // namespace
}  // namespace reqconflict
