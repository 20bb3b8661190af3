#include <doctest.h>

#include "corpus.hpp"
#include "plp/error.hpp"
#include "plp/parser.hpp"
#include "programs.hpp"

using namespace plp;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_program(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;  // no error at all
}

}  // namespace

TEST_CASE("alarm parses into facts, rules and intensional facts") {
  auto p = parse_program(testing::kAlarm);
  REQUIRE(p.prob_facts.size() == 3);
  CHECK(p.prob_facts[0].atom.to_string() == "burglary");
  CHECK(p.prob_facts[0].probability == doctest::Approx(0.1));
  CHECK(p.prob_facts[2].intensional());
  CHECK(p.prob_facts[2].domain_body.front().to_string() == "person(X)");
  CHECK(p.rules.size() == 5);
  CHECK(p.num_parameters() == 0);
}

TEST_CASE("terms and atoms print canonically") {
  Atom a("f", {Term::constant("a"), Term::compound("g", {Term::variable("X"), Term::constant("b")})});
  CHECK(a.to_string() == "f(a,g(X,b))");
  CHECK_FALSE(a.is_ground());
  CHECK(a.signature() == "f/2");
  CHECK(Atom("p").to_string() == "p");
  CHECK(Atom("p").is_ground());
  CHECK(Literal{Atom("q"), false}.to_string() == "\\+q");
}

TEST_CASE("instance_of matches repeated variables consistently") {
  Atom pattern("e", {Term::variable("X"), Term::variable("X")});
  CHECK(instance_of(Atom("e", {Term::constant("a"), Term::constant("a")}), pattern));
  CHECK_FALSE(instance_of(Atom("e", {Term::constant("a"), Term::constant("b")}), pattern));
  CHECK_FALSE(instance_of(Atom("f", {Term::constant("a"), Term::constant("a")}), pattern));
}

TEST_CASE("learnable markers are numbered in source order") {
  auto p = parse_program(testing::kAlarmLearnable);
  CHECK(p.num_parameters() == 3);
  CHECK(p.prob_facts[0].parameter == 0);
  CHECK(p.prob_facts[2].parameter == 2);
  CHECK(p.prob_facts[1].learnable());
}

TEST_CASE("queries and evidence directives") {
  auto p = parse_program("0.5::a. b :- a. query(b). evidence(a,true). evidence(b).");
  REQUIRE(p.queries.size() == 1);
  CHECK(p.queries[0].to_string() == "b");
  CHECK(p.evidence.value_of(std::string("a")) == true);
  CHECK(p.evidence.value_of(std::string("b")) == true);
  auto e = parse_evidence("evidence(calls(john),false).\n% comment\n");
  CHECK(e.value_of(std::string("calls(john)")) == false);
  CHECK(parse_queries("query(p(X)).").front().to_string() == "p(X)");
}

TEST_CASE("static checks reject bad programs") {
  CHECK(kind_of("1.5::a.") == ErrorKind::Semantic);
  CHECK(kind_of("0.5::a. a :- b. b.") == ErrorKind::Semantic);       // a both probabilistic and derived
  CHECK(kind_of("p(X) :- q.") == ErrorKind::Semantic);               // unsafe head variable
  CHECK(kind_of("p(a) :- \\+ q(X).") == ErrorKind::Semantic);        // variable only under negation
  CHECK(kind_of("0.5::a. 0.3::b(X) :- a.") == ErrorKind::Semantic);  // probabilistic domain
  CHECK(kind_of("a :- b") == ErrorKind::Semantic);                   // missing period
  CHECK(kind_of("evidence(a,true). evidence(a,false). a.") == ErrorKind::Semantic);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("a.\nb :- .");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("2:", 0) == 0);
  }
}

TEST_CASE("pretty_print round-trips") {
  for (const auto& text : {testing::kAlarm, testing::kAlarmLearnable, testing::kSmokersFriends,
                           testing::smokers(false), testing::grid3(),
                           std::string("'Odd name'(x). q :- 'Odd name'(x), \\+ r. 1e-3::r. "
                                       "query(q). evidence(r,false).")}) {
    auto p = parse_program(text);
    CHECK(parse_program(pretty_print(p)) == p);
  }
  for (const auto& c : testing::corpus(30, 500)) {
    CHECK(parse_program(pretty_print(c.program)) == c.program);
  }
}

TEST_CASE("format_real is shortest and round-trips") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0) == "1.0");
  CHECK(format_real(0.0) == "0.0");
  CHECK(format_real(1e-20) == "1e-20");
  for (double x : {0.3, 1.0 / 3.0, 0.7, 2.5e-7}) CHECK(std::stod(format_real(x)) == x);
}

TEST_CASE("partial interpretations refuse conflicts") {
  PartialInterpretation e;
  CHECK(e.assign(Atom("a"), true));
  CHECK(e.assign(Atom("a"), true));
  CHECK_FALSE(e.assign(Atom("a"), false));
  CHECK(e.value_of(Atom("a")) == true);
  CHECK(e.size() == 1);
  CHECK(parse_evidence(e.to_string()) == e);
}
