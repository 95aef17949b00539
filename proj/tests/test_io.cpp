#include <doctest.h>

#include <string>
#include <variant>
#include <vector>

#include "briberon/io.hpp"
#include "briberon/testkit.hpp"

using namespace briberon;

namespace {

const char* kMinimalKb = R"({
  "schema": "briberon/instance/v1",
  "problem": "kb",
  "candidates": ["p", "a"],
  "preferred": "p",
  "k": 1,
  "b": 1,
  "voters": [
    {"points": {"a": 1}, "prices": {"a->p": 3}},
    {"points": {"a": 1}, "prices": {"a->p": 5}},
    {"points": {"p": 1}, "prices": {}}
  ]
})";

io::ParseError::Stage stage_of(const std::string& text) {
  try {
    (void)io::parse_instance(text);
  } catch (const io::ParseError& e) {
    return e.stage();
  }
  throw std::runtime_error("expected a parse error");
}

std::string message_of(const std::string& text) {
  try {
    (void)io::parse_instance(text);
  } catch (const io::ParseError& e) {
    return e.what();
  }
  return "";
}

CandidateSet numbered(int m) {
  CandidateSet cs;
  for (int c = 1; c <= m; ++c) cs.names.push_back("c" + std::to_string(c));
  return cs;
}

}  // namespace

TEST_CASE("a minimal kb document parses into the expected instance") {
  const auto doc = io::parse_instance(kMinimalKb);
  CHECK(doc.kind == io::ProblemKind::kb);
  CHECK(doc.labels.names == std::vector<std::string>{"p", "a"});

  const auto& inst = std::get<KBBriberyInstance>(doc.payload);
  CHECK(inst.preferred == 0);
  CHECK(inst.election.k == 1);
  CHECK(inst.election.b == 1);
  CHECK_FALSE(inst.election.free_form);
  REQUIRE(inst.election.voter_count() == 3);
  CHECK(inst.election.ballots[0].points == std::vector<std::int64_t>{0, 1});
  CHECK(inst.election.ballots[2].points == std::vector<std::int64_t>{1, 0});
  CHECK(inst.prices[0].at(1, 0) == 3);
  CHECK(inst.prices[0].at(0, 1) == 0);
  CHECK(inst.prices[1].at(1, 0) == 5);
  CHECK_FALSE(inst.budget.has_value());
}

TEST_CASE("serialization is canonical and stable under reparsing") {
  const auto doc = io::parse_instance(kMinimalKb);
  const auto text = io::serialize_instance(doc);
  CHECK(io::parse_instance(text) == doc);
  CHECK(io::serialize_instance(io::parse_instance(text)) == text);
  CHECK(text.back() == '\n');
}

TEST_CASE("a missing required field is a schema error that names the field") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "kb",
    "candidates": ["p", "a"],
    "k": 1,
    "b": 1,
    "voters": []
  })";
  CHECK(stage_of(text) == io::ParseError::Stage::schema);
  CHECK(message_of(text).find("preferred") != std::string::npos);
}

TEST_CASE("unparseable text is a syntax error") {
  CHECK(stage_of("{nope") == io::ParseError::Stage::syntax);
  CHECK(stage_of("") == io::ParseError::Stage::syntax);
}

TEST_CASE("an unexpected schema marker is rejected") {
  CHECK(message_of(R"({"schema": "briberon/instance/v2", "problem": "kb"})")
            .find("unsupported schema") != std::string::npos);
}

TEST_CASE("a nonzero diagonal price is a validation error") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "kb",
    "candidates": ["p", "a"],
    "preferred": "p",
    "k": 1,
    "b": 1,
    "voters": [{"points": {"a": 1}, "prices": {"p->p": 1}}]
  })";
  CHECK(stage_of(text) == io::ParseError::Stage::validation);
  CHECK(message_of(text).find("diagonal price must be 0") != std::string::npos);
}

TEST_CASE("unknown fields are schema errors") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "kb",
    "candidates": ["p", "a"],
    "preferred": "p",
    "k": 1,
    "b": 1,
    "surprise": true,
    "voters": []
  })";
  CHECK(stage_of(text) == io::ParseError::Stage::schema);
  CHECK(message_of(text).find("surprise") != std::string::npos);
}

TEST_CASE("integers beyond the signed 64-bit range are rejected") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "kb",
    "candidates": ["p", "a"],
    "preferred": "p",
    "k": 18446744073709551615,
    "b": 1,
    "voters": []
  })";
  CHECK(stage_of(text) == io::ParseError::Stage::schema);
}

TEST_CASE("the label unassigned is reserved for the free-form pool") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "kb",
    "candidates": ["p", "unassigned"],
    "preferred": "p",
    "k": 1,
    "b": 1,
    "voters": []
  })";
  CHECK(stage_of(text) == io::ParseError::Stage::validation);

  // In strict instances the pool does not exist, so price keys cannot use it.
  const std::string strict = R"({
    "schema": "briberon/instance/v1",
    "problem": "kb",
    "candidates": ["p", "a"],
    "preferred": "p",
    "k": 1,
    "b": 1,
    "voters": [{"points": {"a": 1}, "prices": {"unassigned->p": 1}}]
  })";
  CHECK_THROWS_AS((void)io::parse_instance(strict), io::ParseError);
}

TEST_CASE("free-form documents carry the unassigned pool explicitly") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "kb_freeform",
    "candidates": ["p", "a"],
    "preferred": "p",
    "k": 2,
    "b": 1,
    "voters": [{"points": {"a": 1}, "unassigned": 1, "prices": {"unassigned->p": 2}}]
  })";
  const auto doc = io::parse_instance(text);
  CHECK(doc.kind == io::ProblemKind::kb_freeform);
  const auto& inst = std::get<KBBriberyInstance>(doc.payload);
  CHECK(inst.election.free_form);
  CHECK(inst.election.ballots[0].unassigned == 1);
  CHECK(inst.prices[0].at(2, 0) == 2);
  CHECK(io::parse_instance(io::serialize_instance(doc)) == doc);
}

TEST_CASE("a negative_plurality document requires its budget") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "negative_plurality",
    "candidates": ["p", "a"],
    "preferred": "p",
    "voters": [{"weight": 1, "vote": "a"}]
  })";
  CHECK(stage_of(text) == io::ParseError::Stage::schema);
  CHECK(message_of(text).find("budget") != std::string::npos);
}

TEST_CASE("kb parameters are rejected on weighted kinds") {
  const std::string text = R"({
    "schema": "briberon/instance/v1",
    "problem": "plurality_weighted",
    "candidates": ["p", "a"],
    "preferred": "p",
    "k": 1,
    "voters": []
  })";
  CHECK(stage_of(text) == io::ParseError::Stage::schema);
}

TEST_CASE("every generated kind survives a value round-trip") {
  testkit::SplitMix64 rng(61);
  for (int round = 0; round < 25; ++round) {
    testkit::GenParams params;
    params.seed = rng.next();

    io::InstanceDoc doc;
    doc.kind = round % 2 == 0 ? io::ProblemKind::kb : io::ProblemKind::kb_freeform;
    params.free_form = doc.kind == io::ProblemKind::kb_freeform;
    auto kb = testkit::gen_kb(params);
    doc.labels = kb.election.candidates;
    doc.payload = std::move(kb);
    CHECK(io::parse_instance(io::serialize_instance(doc)) == doc);

    io::InstanceDoc plur;
    plur.kind = io::ProblemKind::plurality_weighted;
    auto p = testkit::gen_plurality(params);
    plur.labels = numbered(p.m);
    plur.payload = std::move(p);
    CHECK(io::parse_instance(io::serialize_instance(plur)) == plur);

    io::InstanceDoc appr;
    appr.kind = io::ProblemKind::approval_prime;
    auto a = testkit::gen_approval(params);
    appr.labels = numbered(a.m);
    appr.payload = std::move(a);
    CHECK(io::parse_instance(io::serialize_instance(appr)) == appr);

    io::InstanceDoc neg;
    neg.kind = io::ProblemKind::negative_plurality;
    auto ng = testkit::gen_negative(params);
    neg.labels = numbered(ng.m);
    neg.payload = std::move(ng);
    CHECK(io::parse_instance(io::serialize_instance(neg)) == neg);

    io::InstanceDoc w11;
    w11.kind = io::ProblemKind::weighted_11;
    auto w = testkit::gen_weighted11(params);
    w11.labels = numbered(w.m);
    w11.payload = std::move(w);
    CHECK(io::parse_instance(io::serialize_instance(w11)) == w11);
  }
}

TEST_CASE("reports round-trip through their serialization") {
  io::Report report;
  report.problem = io::ProblemKind::kb;
  report.method = "flow";
  report.feasible = true;
  report.optimal_cost = 3;
  report.achieved_score = 2;
  report.plan = {{0, "a", "p", {}, 1}};
  report.post_scores = {{"p", 2}, {"a", 1}};
  report.winners = {"p"};
  const auto text = io::serialize_report(report);
  CHECK(io::parse_report(text) == report);
  CHECK(io::serialize_report(io::parse_report(text)) == text);

  io::Report decision;
  decision.problem = io::ProblemKind::negative_plurality;
  decision.method = "oracle";
  decision.feasible = false;
  decision.budget = 1;
  decision.post_scores = {{"p", 1}, {"a", 2}};
  decision.winners = {"a"};
  CHECK(io::parse_report(io::serialize_report(decision)) == decision);

  io::Report approx;
  approx.problem = io::ProblemKind::plurality_weighted;
  approx.method = "fptas";
  approx.epsilon = "1/4";
  approx.feasible = true;
  approx.optimal_cost = 12;
  approx.budget = 20;
  approx.within_budget = true;
  approx.plan = {{2, {}, {}, {}, {}}};
  approx.post_scores = {{"c1", 5}, {"c2", 4}};
  approx.winners = {"c1"};
  CHECK(io::parse_report(io::serialize_report(approx)) == approx);
}

TEST_CASE("kind names map both ways") {
  using io::ProblemKind;
  const ProblemKind kinds[] = {ProblemKind::kb, ProblemKind::kb_freeform,
                               ProblemKind::plurality_weighted, ProblemKind::approval_prime,
                               ProblemKind::negative_plurality, ProblemKind::weighted_11};
  for (const auto kind : kinds) CHECK(io::kind_by_name(io::kind_name(kind)) == kind);
  CHECK_FALSE(io::kind_by_name("ranked_pairs").has_value());
}
