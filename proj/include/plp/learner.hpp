#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plp/ast.hpp"
#include "plp/parallel.hpp"

namespace plp {

using Dataset = std::vector<PartialInterpretation>;

/// One entry per probabilistic fact statement of a program, in source order.
struct ParamVector {
  std::vector<double> p;
  /// Normalizer per statement: number of ground instances that were counted.
  std::vector<double> z;
  std::vector<bool> learnable;
  /// False for learnable entries that no example said anything about.
  std::vector<bool> estimated;

  std::size_t size() const { return p.size(); }
};

/// Probabilities as written; learnable entries are NaN.
ParamVector params_of(const Program& program);
/// Copy of the program with every statement's probability replaced by
/// params.p. Learnable markers are dropped.
Program with_params(const Program& program, const ParamVector& params);

/// Closed-form maximum likelihood estimate from complete examples. Throws
/// Error(Semantic) if some example leaves a learnable fact instance
/// unassigned.
ParamVector learn_fully_observable(const Program& program, const Dataset& data);

struct EmOptions {
  std::uint64_t seed = 0;
  int max_iters = 100;
  double tolerance = 1e-6;
  /// Compile fresh circuits on every iteration instead of reweighting.
  bool recompile = false;
  Execution exec = Execution::Parallel;
  /// Starting point for learnable entries; drawn from uniform(0.05, 0.95)
  /// when empty.
  std::vector<double> init;
};

struct EmResult {
  ParamVector params;
  /// Log-likelihood before each M-step, plus the final value.
  std::vector<double> ll_trace;
  int iterations = 0;
  bool converged = false;
};

EmResult learn_em(const Program& program, const Dataset& data, const EmOptions& options = {});

/// Sum of ln P(E_m = e_m). Throws Error(ZeroProbability) naming the first
/// example with probability zero.
double log_likelihood(const Program& program, const ParamVector& params, const Dataset& data,
                      Execution exec = Execution::Parallel);

/// Examples separated by "---" lines, each a list of evidence directives.
Dataset parse_dataset(std::string_view text);
std::string format_dataset(const Dataset& data);

/// Keeps round(fraction * size) atoms of the world chosen uniformly at random.
PartialInterpretation retain_fraction(const PartialInterpretation& world, double fraction,
                                      std::uint64_t seed);

}  // namespace plp
