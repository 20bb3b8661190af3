#include <doctest.h>

#include <set>

#include "brute.hpp"
#include "corpus.hpp"
#include "plp/error.hpp"
#include "plp/logic2cnf.hpp"
#include "plp/oracle.hpp"
#include "plp/parser.hpp"
#include "programs.hpp"

using namespace plp;

namespace {

using Model = std::vector<bool>;

// CNF models projected onto the atom variables, with multiplicities.
std::multiset<Model> projected_models(const WeightedCNF& f, std::size_t atoms) {
  std::multiset<Model> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
    if (!testing::satisfies(f.clauses, bits)) continue;
    Model m(atoms);
    for (std::size_t a = 0; a < atoms; ++a) m[a] = (bits >> a) & 1U;
    out.insert(m);
  }
  return out;
}

}  // namespace

TEST_CASE("alarm completion clauses") {
  auto p = parse_program(testing::kAlarm);
  auto e = parse_evidence("evidence(calls(john),true).");
  auto g = relevant_ground_program(p, {}, e);
  auto f = assert_evidence(rules_to_formula(g), e);
  CHECK(f.num_vars == 5);
  CHECK(f.clauses.size() == 7);
  int calls = f.var_of("calls(john)"), alarm = f.var_of("alarm"), hj = f.var_of("hears_alarm(john)");
  int b = f.var_of("burglary"), eq = f.var_of("earthquake");
  auto has = [&](std::vector<int> c) {
    std::sort(c.begin(), c.end());
    for (auto d : f.clauses) {
      std::sort(d.begin(), d.end());
      if (d == c) return true;
    }
    return false;
  };
  CHECK(has({-alarm, b, eq}));
  CHECK(has({alarm, -b}));
  CHECK(has({alarm, -eq}));
  CHECK(has({calls, -alarm, -hj}));
  CHECK(has({-calls, alarm}));
  CHECK(has({-calls, hj}));
  CHECK(has({calls}));
  CHECK(f.evidence_units.size() == 1);
  CHECK(f.role[static_cast<std::size_t>(b)] == VarRole::Probabilistic);
  CHECK(f.role[static_cast<std::size_t>(alarm)] == VarRole::Derived);
  CHECK(f.weights(b) == doctest::Approx(0.1));
  CHECK(f.weights(-b) == doctest::Approx(0.9));
  CHECK(f.weights(alarm) == 1.0);
  CHECK(f.weights(-alarm) == 1.0);
}

TEST_CASE("positive loops get level copies") {
  auto p = parse_program(testing::kSmokersFriends);
  auto g = full_grounding(p);
  auto f = rules_to_formula(g);
  int aux = 0;
  for (int v = 1; v <= f.num_vars; ++v) aux += f.role[static_cast<std::size_t>(v)] == VarRole::Auxiliary;
  CHECK(aux > 0);
  // The cyclic definition must not admit the self-supporting model where
  // everybody smokes without stress.
  CHECK(testing::brute_wmc(f) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a negative edge inside a loop is rejected") {
  auto g = full_grounding(parse_program("0.5::p. a :- p, \\+ b. b :- a."));
  try {
    rules_to_formula(g);
    FAIL("expected unsound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsound);
  }
}

TEST_CASE("learnable facts without a value cannot be converted") {
  auto g = full_grounding(parse_program("t(_)::a. b :- a."));
  CHECK_THROWS_AS(rules_to_formula(g), Error);
}

TEST_CASE("evidence on an unknown atom") {
  auto f = rules_to_formula(full_grounding(parse_program("0.5::a.")));
  CHECK_THROWS_AS(assert_evidence(f, parse_evidence("evidence(zz,true).")), Error);
}

TEST_CASE("models equal well-founded models (corpus)") {
  int checked = 0;
  for (const auto& c : testing::corpus(120, 1)) {
    auto g = full_grounding(c.program);
    auto f = rules_to_formula(g);
    if (f.num_vars > 20) continue;
    ++checked;
    auto models = projected_models(f, g.atoms.size());
    std::multiset<Model> worlds;
    for (const auto& row : oracle::enumerate(g)) worlds.insert(row.world);
    CHECK(models == worlds);
    CHECK(testing::brute_wmc(assert_evidence(f, c.evidence)) ==
          doctest::Approx(oracle::evid(g, c.evidence)).epsilon(1e-12));
  }
  CHECK(checked >= 60);
}

TEST_CASE("DIMACS round trip") {
  for (const auto& c : testing::corpus(25, 700)) {
    auto g = relevant_ground_program(c.program, c.queries, c.evidence);
    auto f = assert_evidence(rules_to_formula(g), c.evidence);
    auto back = import_dimacs(export_dimacs(f));
    CHECK(back == f);
  }
}

TEST_CASE("DIMACS header and weights") {
  auto f = rules_to_formula(full_grounding(parse_program("0.25::a. b :- a.")));
  auto text = export_dimacs(f);
  CHECK(text.rfind("p cnf 2 ", 0) == 0);
  CHECK(text.find("c w 1 0.25") != std::string::npos);
  CHECK_THROWS_AS(import_dimacs("p cnf x y\n"), Error);
}

TEST_CASE("MLN export writes log weights and hard clauses") {
  auto f = rules_to_formula(full_grounding(parse_program("0.25::a. 1.0::c. b :- a, c.")));
  auto mln = export_mln(f);
  CHECK(mln.find("-1.38629436112 a") != std::string::npos);
  CHECK(mln.find("-0.287682072452 !a") != std::string::npos);
  CHECK(mln.find("\nc.\n") != std::string::npos);
  CHECK(testing::mln_partition_function(mln) == doctest::Approx(1.0).epsilon(1e-9));
}
