#include <doctest.h>

#include <random>

#include "butler/behavior/plan.hpp"
#include "support/grammar_corpus.hpp"

using namespace butler;
using namespace butler::behavior;
using namespace butler::skills;
using butler::testing::PlanGen;

namespace {

std::size_t error_position(std::string_view s) {
  try {
    parse_plan(s);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("no ParseError for: " << s);
  return 0;
}

}  // namespace

TEST_SUITE("grammar") {

TEST_CASE("the canonical example parses and prints byte for byte") {
  const std::string src = "[pick(*), placeon(\"plate\")]";
  auto p = parse_plan(src);
  REQUIRE(p.steps.size() == 2);
  CHECK(p.steps[0] == PrimitiveAction{SkillKind::pick, {Star{}}});
  CHECK(p.steps[1] == PrimitiveAction{SkillKind::placeon, {TextArg{"plate"}}});
  CHECK(serialize_plan(p.steps) == src);
  CHECK(p.raw == src);
}

TEST_CASE("generated plans round-trip") {
  PlanGen gen(1234);
  for (int i = 0; i < 1000; ++i) {
    auto steps = gen.plan();
    auto text = serialize_plan(steps);
    auto back = parse_plan(text);
    REQUIRE_MESSAGE(back.steps == steps, text);
    CHECK(serialize_plan(back.steps) == text);
  }
}

TEST_CASE("whitespace and escapes") {
  auto p = parse_plan("  [ vqa ( \"say \\\"hi\\\" \\\\ ok\" , * ) ]  ");
  REQUIRE(p.steps.size() == 1);
  CHECK(std::get<TextArg>(p.steps[0].args[0]).text == "say \"hi\" \\ ok");
  CHECK(parse_plan("[]").steps.empty());
}

TEST_CASE("error positions") {
  CHECK(error_position("[pick(") == 6);
  CHECK(error_position("") == 0);
  CHECK(error_position("pick(*)") == 0);
  CHECK(error_position("[jump(*)]") == 1);
  CHECK(error_position("[pick(*) placeon(\"a\")]") == 9);
  CHECK(error_position("[pick(\"a\", \"b\")]") == 11);  // the extra argument
  CHECK(error_position("[open(*)]") == 6);
  CHECK(error_position("[pick(*)] x") == 10);
}

TEST_CASE("invalid corpus") {
  const auto& corpus = butler::testing::invalid_plan_corpus();
  REQUIRE(corpus.size() == 50);
  for (const auto& s : corpus) {
    try {
      parse_plan(s);
      FAIL_CHECK("accepted: " << s);
    } catch (const ParseError& e) {
      CHECK_MESSAGE(e.position() <= s.size(), s);
      CHECK_FALSE(e.expected().empty());
      CHECK(std::string(e.what()).find(std::to_string(e.position())) != std::string::npos);
    }
  }
}

TEST_CASE("points and objects print as stars") {
  std::vector<PrimitiveAction> steps{{SkillKind::pick, {PointArg{{1, 2}, 3, perception::PixelPoint{4, 5}}}},
                                     {SkillKind::placeon, {ObjectArg{"plate"}}}};
  CHECK(serialize_plan(steps) == "[pick(*), placeon(*)]");
}

}  // TEST_SUITE
