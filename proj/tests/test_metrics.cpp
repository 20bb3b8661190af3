#include <doctest.h>

#include <cmath>
#include <random>

#include "brute.hpp"
#include "corpus.hpp"
#include "plp/error.hpp"
#include "plp/grounder.hpp"
#include "plp/metrics.hpp"
#include "plp/parser.hpp"
#include "programs.hpp"

using namespace plp;

namespace {

ParamVector vec(std::vector<double> p) {
  ParamVector v;
  v.p = std::move(p);
  v.z.assign(v.p.size(), 0.0);
  v.learnable.assign(v.p.size(), true);
  v.estimated.assign(v.p.size(), true);
  return v;
}

}  // namespace

TEST_CASE("KL of identical vectors is zero") {
  auto v = vec({0.2, 0.0, 1.0, 0.5});
  CHECK(kl_divergence(v, v, {1, 2, 3, 4}) == 0.0);
}

TEST_CASE("KL single fact by hand") {
  double expected = 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75);
  CHECK(kl_divergence(vec({0.5}), vec({0.25}), {1}) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(kl_divergence(vec({0.5}), vec({0.25}), {3}) == doctest::Approx(3 * expected).epsilon(1e-15));
}

TEST_CASE("KL support violations") {
  CHECK_THROWS_AS(kl_divergence(vec({0.5}), vec({0.0}), {1}), Error);
  CHECK_THROWS_AS(kl_divergence(vec({0.5}), vec({1.0}), {1}), Error);
  CHECK_THROWS_AS(kl_divergence(vec({0.0}), vec({1.0}), {1}), Error);
  CHECK(kl_divergence(vec({0.0}), vec({0.3}), {1}) == doctest::Approx(-std::log(0.7)));
  CHECK(kl_divergence(vec({0.5}), vec({0.0}), {0}) == 0.0);
  CHECK_THROWS_AS(kl_divergence(vec({0.5}), vec({0.5, 0.5}), {1}), Error);
}

TEST_CASE("two-fact closed form equals the world sum") {
  auto p = parse_program("0.3::a. 0.6::b. c :- a, b.");
  auto q = parse_program("0.4::a. 0.5::b. c :- a, b.");
  double closed = kl_divergence(params_of(p), params_of(q), instance_counts(p));
  double brute = testing::brute_kl(full_grounding(p), full_grounding(q));
  CHECK(std::abs(closed - brute) <= 1e-12);
}

TEST_CASE("closed form equals the world sum on random programs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> prob(0.02, 0.98);
  int checked = 0;
  for (const auto& c : testing::corpus(40, 3000)) {
    auto truth = params_of(c.program);
    auto learned = truth;
    for (auto& x : truth.p) x = prob(rng);
    for (auto& x : learned.p) x = prob(rng);
    auto tp = with_params(c.program, truth), lp = with_params(c.program, learned);
    double closed = kl_divergence(truth, learned, instance_counts(tp));
    double brute = testing::brute_kl(full_grounding(tp), full_grounding(lp));
    CHECK(std::abs(closed - brute) <= 1e-12);
    CHECK(closed >= 0.0);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("instance counts follow the full grounding") {
  CHECK(instance_counts(parse_program(testing::smokers(false))) == std::vector<double>{3, 6, 3, 3});
  CHECK(instance_counts(parse_program(testing::kAlarm)) == std::vector<double>{1, 1, 2});
}

TEST_CASE("mean absolute error") {
  CHECK(mae(vec({0.2, 0.4}), vec({0.2, 0.4})) == 0.0);
  CHECK(mae(vec({0.2, 0.4}), vec({0.3, 0.2})) == doctest::Approx(0.15).epsilon(1e-15));
  auto fixed = vec({0.9, 0.2});
  fixed.learnable = {false, true};
  auto other = vec({0.1, 0.3});
  other.learnable = {false, true};
  CHECK(mae(fixed, other) == doctest::Approx(0.1).epsilon(1e-15));
}
