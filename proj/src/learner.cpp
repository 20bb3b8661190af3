#include "plp/learner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "plp/engine.hpp"
#include "plp/error.hpp"
#include "plp/parser.hpp"

namespace plp {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Fact weights of a compiled example under a parameter vector.
LiteralWeights weights_for(const WeightedCNF& cnf, const ParamVector& params) {
  LiteralWeights w = cnf.weights;
  for (int v = 1; v <= cnf.num_vars; ++v) {
    if (cnf.role[idx(v)] != VarRole::Probabilistic) continue;
    double p = params.p[idx(cnf.source[idx(v)])];
    w.pos[idx(v)] = p;
    w.neg[idx(v)] = 1.0 - p;
  }
  return w;
}

struct ExampleStats {
  double ll = 0.0;
  std::vector<double> count, z;
};

struct CompiledExample {
  CompiledQuery cq;
  // Per variable: +1 / -1 when the example fixes it, else 0.
  std::vector<signed char> observed;
};

CompiledExample compile_example(const Program& program, const ParamVector& params,
                                const PartialInterpretation& example) {
  CompiledExample ce{compile_query(with_params(program, params), {}, example), {}};
  ce.observed.assign(idx(ce.cq.cnf.num_vars) + 1, 0);
  for (const auto& [key, entry] : example) {
    int v = ce.cq.cnf.var_of(key);
    if (v > 0) ce.observed[idx(v)] = entry.value ? 1 : -1;
  }
  return ce;
}

[[noreturn]] void zero_example(std::size_t m) {
  throw Error(ErrorKind::ZeroProbability,
              "example " + std::to_string(m + 1) + " has probability zero");
}

// Expected counts of every fact instance present in the example's circuit.
ExampleStats expect(CompiledExample& ce, const ParamVector& params, std::size_t m) {
  const auto& cnf = ce.cq.cnf;
  ce.cq.circuit.set_weights(weights_for(cnf, params));
  auto marg = all_marginals(ce.cq.circuit);
  if (!(marg.total > 0.0)) zero_example(m);
  ExampleStats s{std::log(marg.total), std::vector<double>(params.size(), 0.0),
                 std::vector<double>(params.size(), 0.0)};
  for (int v = 1; v <= cnf.num_vars; ++v) {
    if (cnf.role[idx(v)] != VarRole::Probabilistic) continue;
    auto src = idx(cnf.source[idx(v)]);
    double e = ce.observed[idx(v)] != 0 ? (ce.observed[idx(v)] > 0 ? 1.0 : 0.0)
                                        : marg.pos[idx(v)] / marg.total;
    s.count[src] += e;
    s.z[src] += 1.0;
  }
  return s;
}

}  // namespace

ParamVector params_of(const Program& program) {
  ParamVector out;
  for (const auto& f : program.prob_facts) {
    out.p.push_back(f.probability);
    out.z.push_back(0.0);
    out.learnable.push_back(f.learnable());
    out.estimated.push_back(!f.learnable());
  }
  return out;
}

Program with_params(const Program& program, const ParamVector& params) {
  if (params.size() != program.prob_facts.size()) {
    throw Error(ErrorKind::Semantic, "parameter vector has " + std::to_string(params.size()) +
                                         " entries, program has " +
                                         std::to_string(program.prob_facts.size()));
  }
  Program out = program;
  for (std::size_t s = 0; s < params.size(); ++s) {
    double p = params.p[s];
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorKind::Semantic, "no valid probability for " +
                                           program.prob_facts[s].atom.to_string());
    }
    out.prob_facts[s].probability = p;
    out.prob_facts[s].parameter.reset();
  }
  return out;
}

ParamVector learn_fully_observable(const Program& program, const Dataset& data) {
  auto full = full_grounding(program);
  ParamVector out = params_of(program);
  std::vector<double> count(out.size(), 0.0);
  for (const auto& f : full.facts) {
    auto s = idx(f.source);
    if (!out.learnable[s]) continue;
    const auto& name = full.atoms.name(f.atom);
    for (std::size_t m = 0; m < data.size(); ++m) {
      auto value = data[m].value_of(name);
      if (!value) {
        throw Error(ErrorKind::Semantic, "example " + std::to_string(m + 1) + " does not assign " +
                                             name + "; the data is not fully observable, use EM");
      }
      count[s] += *value ? 1.0 : 0.0;
      out.z[s] += 1.0;
    }
  }
  for (std::size_t s = 0; s < out.size(); ++s) {
    if (!out.learnable[s]) continue;
    out.estimated[s] = out.z[s] > 0.0;
    out.p[s] = out.estimated[s] ? count[s] / out.z[s] : 0.0;
  }
  return out;
}

EmResult learn_em(const Program& program, const Dataset& data, const EmOptions& options) {
  EmResult result;
  ParamVector params = params_of(program);
  {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> start(0.05, 0.95);
    std::size_t k = 0;
    for (std::size_t s = 0; s < params.size(); ++s) {
      if (!params.learnable[s]) continue;
      if (options.init.empty()) {
        params.p[s] = start(rng);
      } else if (options.init.size() == params.size()) {
        params.p[s] = options.init[s];
      } else if (k < options.init.size()) {
        params.p[s] = options.init[k];
      } else {
        throw Error(ErrorKind::Usage, "EM init has too few entries");
      }
      ++k;
    }
  }

  std::vector<CompiledExample> circuits(data.size());
  auto compile_all = [&] {
    for_each_index(data.size(), options.exec, [&](std::size_t m) {
      circuits[m] = compile_example(program, params, data[m]);
    });
  };
  compile_all();

  std::vector<ExampleStats> stats(data.size());
  for (int it = 0;; ++it) {
    if (options.recompile && it > 0) compile_all();
    for_each_index(data.size(), options.exec,
                   [&](std::size_t m) { stats[m] = expect(circuits[m], params, m); });

    // Ordered reduction keeps results independent of the thread count.
    double ll = 0.0;
    std::vector<double> count(params.size(), 0.0), z(params.size(), 0.0);
    for (const auto& s : stats) {
      ll += s.ll;
      for (std::size_t n = 0; n < params.size(); ++n) {
        count[n] += s.count[n];
        z[n] += s.z[n];
      }
    }
    params.z = z;
    result.ll_trace.push_back(ll);
    if (it > 0 && std::abs(ll - result.ll_trace[idx(it - 1)]) < options.tolerance) {
      result.converged = true;
      break;
    }
    if (it == options.max_iters) break;

    for (std::size_t n = 0; n < params.size(); ++n) {
      if (!params.learnable[n]) continue;
      params.estimated[n] = z[n] > 0.0;
      params.p[n] = params.estimated[n] ? std::clamp(count[n] / z[n], 0.0, 1.0) : 0.0;
    }
    result.iterations = it + 1;
  }
  result.params = std::move(params);
  return result;
}

double log_likelihood(const Program& program, const ParamVector& params, const Dataset& data,
                      Execution exec) {
  Program bound = with_params(program, params);
  std::vector<double> ll(data.size());
  for_each_index(data.size(), exec, [&](std::size_t m) {
    double p = evaluate(compile_query(bound, {}, data[m]).circuit);
    if (!(p > 0.0)) zero_example(m);
    ll[m] = std::log(p);
  });
  double total = 0.0;
  for (double x : ll) total += x;
  return total;
}

Dataset parse_dataset(std::string_view text) {
  Dataset out;
  std::istringstream in{std::string(text)};
  std::string line, block;
  bool any = false;
  auto flush = [&] {
    out.push_back(parse_evidence(block));
    block.clear();
  };
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    auto last = line.find_last_not_of(" \t\r");
    std::string trimmed = first == std::string::npos ? "" : line.substr(first, last - first + 1);
    if (trimmed == "---") {
      flush();
      any = false;
      continue;
    }
    if (!trimmed.empty()) any = true;
    block += line + "\n";
  }
  if (any || !out.empty()) flush();
  return out;
}

std::string format_dataset(const Dataset& data) {
  std::string out;
  for (std::size_t m = 0; m < data.size(); ++m) {
    if (m) out += "---\n";
    out += data[m].to_string();
  }
  return out;
}

PartialInterpretation retain_fraction(const PartialInterpretation& world, double fraction,
                                      std::uint64_t seed) {
  std::vector<const PartialInterpretation::Entry*> entries;
  for (const auto& [key, entry] : world) entries.push_back(&entry);
  std::mt19937_64 rng(seed);
  std::shuffle(entries.begin(), entries.end(), rng);
  auto keep = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(entries.size())));
  PartialInterpretation out;
  for (std::size_t i = 0; i < keep && i < entries.size(); ++i) {
    out.assign(entries[i]->atom, entries[i]->value);
  }
  return out;
}

}  // namespace plp
