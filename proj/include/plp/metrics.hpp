#pragma once

#include <vector>

#include "plp/ast.hpp"
#include "plp/learner.hpp"

namespace plp {

/// Ground instances per probabilistic fact statement in the full grounding.
std::vector<double> instance_counts(const Program& program);

/// KL(truth || learned) between two programs that differ only in their fact
/// probabilities: sum_i counts_i * (p ln(p/q) + (1-p) ln((1-p)/(1-q))).
/// Throws Error(Semantic) when learned puts 0 or 1 where truth does not.
double kl_divergence(const ParamVector& truth, const ParamVector& learned,
                     const std::vector<double>& counts);

/// Mean |p_i - q_i| over learnable entries (all entries if none is
/// learnable).
double mae(const ParamVector& truth, const ParamVector& learned);

}  // namespace plp
