#include <doctest.h>

#include <random>

#include "brute.hpp"
#include "corpus.hpp"
#include "plp/compiler.hpp"
#include "plp/error.hpp"
#include "plp/parser.hpp"
#include "programs.hpp"

using namespace plp;

namespace {

std::vector<std::vector<int>> random_cnf(std::mt19937_64& rng, int vars, int clauses) {
  std::uniform_int_distribution<int> var(1, vars), len(1, 3), sign(0, 1);
  std::vector<std::vector<int>> out;
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    for (int k = len(rng); k > 0; --k) clause.push_back(sign(rng) ? var(rng) : -var(rng));
    out.push_back(clause);
  }
  return out;
}

std::vector<bool> assignment(std::uint64_t bits, int vars) {
  std::vector<bool> a(static_cast<std::size_t>(vars) + 1);
  for (int v = 1; v <= vars; ++v) a[static_cast<std::size_t>(v)] = (bits >> (v - 1)) & 1U;
  return a;
}

// Model count of a smooth graph over all its variables.
double count_models(const DdnnfGraph& g) {
  std::vector<double> c(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    if (n.kind == DdnnfNode::Kind::Literal) {
      c[i] = 1.0;
    } else if (n.kind == DdnnfNode::Kind::And) {
      c[i] = 1.0;
      for (int k : n.children) c[i] *= c[static_cast<std::size_t>(k)];
    } else {
      c[i] = 0.0;
      for (int k : n.children) c[i] += c[static_cast<std::size_t>(k)];
    }
  }
  return c[static_cast<std::size_t>(g.root)];
}

}  // namespace

TEST_CASE("random CNFs compile to equivalent d-DNNF") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    int vars = 1 + trial % 9;
    auto clauses = random_cnf(rng, vars, 1 + trial % 12);
    auto g = compile(vars, clauses);
    CHECK(is_decomposable(g));
    CHECK(is_deterministic(g));
    auto s = smooth(g);
    CHECK(is_decomposable(s));
    CHECK(is_deterministic(s));
    CHECK(is_smooth(s));
    double models = 0.0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars); ++bits) {
      bool expected = testing::satisfies(clauses, bits);
      models += expected;
      CHECK(satisfied_by(g, assignment(bits, vars)) == expected);
      CHECK(satisfied_by(s, assignment(bits, vars)) == expected);
    }
    if (models == 0.0) {
      CHECK(g.is_false());
      CHECK(s.is_false());
    } else {
      CHECK(count_models(s) == models);
    }
  }
}

TEST_CASE("trivial formulas") {
  auto t = compile(2, {});
  CHECK(t.nodes[static_cast<std::size_t>(t.root)].kind == DdnnfNode::Kind::And);
  CHECK(t.nodes[static_cast<std::size_t>(t.root)].children.empty());
  CHECK(count_models(smooth(t)) == 4.0);
  auto f = compile(1, {{1}, {-1}});
  CHECK(f.is_false());
  CHECK(compile(1, {{}}).is_false());
  auto single = compile(1, {{1}});
  CHECK(export_nnf(single) == "nnf 1 0 1\nL 1\n");
  CHECK_THROWS_AS(compile(1, {{2}}), Error);
}

TEST_CASE("the decision variable is the most frequent one") {
  // x1 v x2, x1 v x3, x1 v x4 : x1 occurs most.
  auto g = compile(4, {{1, 2}, {1, 3}, {1, 4}});
  const auto& root = g.nodes[static_cast<std::size_t>(g.root)];
  REQUIRE(root.kind == DdnnfNode::Kind::Or);
  CHECK(root.decision == 1);
}

TEST_CASE("statistics count decisions and cache lookups") {
  CompileStats stats;
  compile(6, {{1, 2, 3}, {-1, 4}, {-2, 4}, {4, 5, 6}, {-4, -5, -6}}, {}, &stats);
  CHECK(stats.decisions > 0);
  CHECK(stats.cache_misses >= stats.decisions);
}

TEST_CASE("cache limit raises a resource error") {
  CompileOptions o;
  o.cache_limit = 1;
  try {
    compile(8, {{1, 2}, {3, 4}, {-1, -3, 5}, {2, 4, 6}, {-5, -6, 7}, {7, 8, -2}}, o);
    FAIL("expected a resource error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResourceLimit);
  }
}

TEST_CASE("NNF round trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = smooth(compile(6, random_cnf(rng, 6, 8)));
    auto back = import_nnf(export_nnf(g));
    CHECK(back.nodes == g.nodes);
    CHECK(back.root == g.root);
    CHECK(back.num_vars == g.num_vars);
  }
  CHECK_THROWS_AS(import_nnf("nnf 1 0 1\nQ 1\n"), Error);
  CHECK_THROWS_AS(import_nnf("nnf 2 1 1\nA 1 1\nL 1\n"), Error);
}

TEST_CASE("alarm evidence formula compiles to the expected shape") {
  auto p = parse_program(testing::kAlarm);
  auto e = parse_evidence("evidence(calls(john),true).");
  auto f = assert_evidence(rules_to_formula(relevant_ground_program(p, {}, e)), e);
  auto g = compile(f);
  CHECK(is_decomposable(g));
  CHECK(is_deterministic(g));
  CHECK_FALSE(is_smooth(g));
  CHECK(is_smooth(smooth(g)));
  // Models: calls, alarm, hears(john) fixed; (b, e) in {11, 10, 01}.
  CHECK(count_models(smooth(g)) == 3.0);
}

TEST_CASE("smoothing over extra variables") {
  auto g = smooth(compile(1, {{1}}), {1, 2, 3});
  CHECK(count_models(g) == 4.0);
  auto f = smooth(compile(1, {{1}, {-1}}), {1, 2});
  CHECK(f.is_false());
}
