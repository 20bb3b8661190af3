#include <doctest.h>

#include <algorithm>
#include <set>

#include "corpus.hpp"
#include "plp/error.hpp"
#include "plp/grounder.hpp"
#include "plp/oracle.hpp"
#include "plp/parser.hpp"
#include "programs.hpp"

using namespace plp;

namespace {

PartialInterpretation evidence(std::initializer_list<std::pair<const char*, bool>> items) {
  std::string text;
  for (const auto& [atom, value] : items) {
    text += std::string("evidence(") + atom + "," + (value ? "true" : "false") + ").\n";
  }
  return parse_evidence(text);
}

std::set<std::string> fact_names(const GroundProgram& g) {
  std::set<std::string> out;
  for (const auto& f : g.facts) out.insert(g.atoms.name(f.atom));
  return out;
}

std::set<std::string> rule_texts(const GroundProgram& g) {
  std::set<std::string> out;
  for (const auto& r : g.rules) {
    std::string s = g.atoms.name(r.head);
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      s += (i ? ", " : " :- ") + std::string(r.body[i].positive ? "" : "\\+") +
           g.atoms.name(r.body[i].atom);
    }
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("alarm relevant ground program drops mary") {
  auto p = parse_program(testing::kAlarm);
  auto g = relevant_ground_program(p, {Atom("burglary")}, evidence({{"calls(john)", true}}));
  CHECK(fact_names(g) == std::set<std::string>{"burglary", "earthquake", "hears_alarm(john)"});
  CHECK(rule_texts(g) == std::set<std::string>{"alarm :- burglary", "alarm :- earthquake",
                                               "calls(john) :- alarm, hears_alarm(john)"});
  CHECK_FALSE(g.atoms.find(std::string("calls(mary)")));
}

TEST_CASE("smokers with negative evidence prunes the inactive rule") {
  auto p = parse_program(testing::kSmokersFriends);
  auto g = relevant_ground_program(p, {parse_queries("query(smokes(p1)).").front()},
                                   evidence({{"smokes(p2)", true}, {"smokes(p3)", false}}));
  CHECK(fact_names(g) == std::set<std::string>{"stress(p1)", "stress(p2)", "stress(p3)",
                                               "influences(p2,p1)", "influences(p1,p2)",
                                               "influences(p1,p3)"});
  CHECK(rule_texts(g) == std::set<std::string>{
                             "smokes(p1) :- stress(p1)",
                             "smokes(p1) :- smokes(p2), influences(p2,p1)",
                             "smokes(p2) :- stress(p2)",
                             "smokes(p2) :- smokes(p1), influences(p1,p2)",
                             "smokes(p3) :- stress(p3)",
                             "smokes(p3) :- smokes(p1), influences(p1,p3)",
                         });
  CHECK_FALSE(g.atoms.find(std::string("influences(p3,p1)")));
}

TEST_CASE("full grounding of alarm") {
  auto g = full_grounding(parse_program(testing::kAlarm));
  CHECK(g.facts.size() == 4);
  CHECK(g.num_deterministic_facts() == 2);
  CHECK(g.num_proper_rules() == 4);
  auto idx = g.fact_index();
  CHECK(idx[static_cast<std::size_t>(*g.atoms.find(std::string("burglary")))] >= 0);
  CHECK(idx[static_cast<std::size_t>(*g.atoms.find(std::string("alarm")))] == -1);
}

TEST_CASE("non-ground queries expand to Herbrand instances") {
  auto p = parse_program(testing::kAlarm);
  auto g = relevant_ground_program(p, {parse_queries("query(calls(X)).").front()}, {});
  CHECK(g.atoms.find(std::string("calls(john)")));
  CHECK(g.atoms.find(std::string("calls(mary)")));
}

TEST_CASE("evidence outside the Herbrand base is an error") {
  auto p = parse_program(testing::kAlarm);
  CHECK_THROWS_AS(relevant_ground_program(p, {}, evidence({{"calls(bob)", true}})), Error);
}

TEST_CASE("duplicate ground probabilistic atoms are rejected") {
  auto p = parse_program("0.3::a. 0.4::a.");
  CHECK_THROWS_AS(full_grounding(p), Error);
}

TEST_CASE("atom limit is enforced") {
  GroundingOptions o;
  o.atom_limit = 5;
  try {
    full_grounding(parse_program(testing::grid3()), o);
    FAIL("expected a resource error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResourceLimit);
  }
}

TEST_CASE("dump prints facts then rules") {
  auto g = relevant_ground_program(parse_program(testing::kAlarm), {Atom("alarm")}, {});
  auto text = dump(g);
  CHECK(text.find("0.1::burglary.") != std::string::npos);
  CHECK(text.find("alarm :- burglary.") != std::string::npos);
  CHECK(text.find("::") < text.find(":- "));
}

TEST_CASE("sampled worlds are models and reproducible") {
  auto full = full_grounding(parse_program(testing::smokers(false)));
  auto w1 = sample_world(full, 42);
  CHECK(w1 == sample_world(full, 42));
  CHECK(w1.size() == full.atoms.size());
  // Complete worlds: cancer(P) iff spontaneous or (smokes and smoke-cancer).
  for (const char* p : {"p1", "p2", "p3"}) {
    auto v = [&](const std::string& pred) { return *w1.value_of(pred + "(" + p + ")"); };
    CHECK(v("cancer") == (v("cancer_spont") || (v("smokes") && v("cancer_smoke"))));
  }
}

TEST_CASE("relevant ground program keeps oracle answers (corpus)") {
  // The evidence probability over the relevant part equals the one over the
  // full grounding.
  for (const auto& c : testing::corpus(60, 900)) {
    auto full = full_grounding(c.program);
    auto rgp = relevant_ground_program(c.program, c.queries, c.evidence);
    CHECK(rgp.facts.size() <= full.facts.size());
    CHECK(oracle::evid(rgp, c.evidence) == doctest::Approx(oracle::evid(full, c.evidence)).epsilon(1e-12));
  }
}
