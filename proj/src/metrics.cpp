#include "plp/metrics.hpp"

#include <cmath>

#include "plp/error.hpp"
#include "plp/grounder.hpp"

namespace plp {

namespace {

void check_sizes(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::Semantic, "parameter vectors differ in size (" +
                                         std::to_string(a.size()) + " vs " +
                                         std::to_string(b.size()) + ")");
  }
}

// x ln(x / y) with 0 ln 0 = 0.
double xlog(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

}  // namespace

std::vector<double> instance_counts(const Program& program) {
  auto full = full_grounding(program);
  std::vector<double> counts(program.prob_facts.size(), 0.0);
  for (const auto& f : full.facts) counts[static_cast<std::size_t>(f.source)] += 1.0;
  return counts;
}

double kl_divergence(const ParamVector& truth, const ParamVector& learned,
                     const std::vector<double>& counts) {
  check_sizes(truth, learned);
  if (counts.size() != truth.size()) {
    throw Error(ErrorKind::Semantic, "instance counts do not match the parameter vector");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (counts[i] == 0.0) continue;
    double p = truth.p[i], q = learned.p[i];
    if ((p > 0.0 && q <= 0.0) || (p < 1.0 && q >= 1.0)) {
      throw Error(ErrorKind::Semantic, "KL divergence is infinite: parameter " + std::to_string(i) +
                                           " has truth " + format_real(p) + " but learned " +
                                           format_real(q));
    }
    kl += counts[i] * (xlog(p, q) + xlog(1.0 - p, 1.0 - q));
  }
  return kl;
}

double mae(const ParamVector& truth, const ParamVector& learned) {
  check_sizes(truth, learned);
  auto is_learnable = [&](std::size_t i) {
    return (i < learned.learnable.size() && learned.learnable[i]) ||
           (i < truth.learnable.size() && truth.learnable[i]);
  };
  bool any = false;
  for (std::size_t i = 0; i < truth.size(); ++i) any = any || is_learnable(i);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (any && !is_learnable(i)) continue;
    sum += std::abs(truth.p[i] - learned.p[i]);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace plp
