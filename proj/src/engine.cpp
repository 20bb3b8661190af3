#include "plp/engine.hpp"

#include <algorithm>

#include "plp/error.hpp"

namespace plp {

namespace {

std::string one_line(const PartialInterpretation& e) {
  std::string s = e.to_string();
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

[[noreturn]] void zero_evidence(const PartialInterpretation& e) {
  throw Error(ErrorKind::ZeroProbability, "evidence has probability zero: " + one_line(e));
}

}  // namespace

CompiledQuery compile_query(const Program& program, const std::vector<Atom>& queries,
                            const PartialInterpretation& evidence, const PipelineOptions& options) {
  CompiledQuery cq;
  cq.ground = relevant_ground_program(program, queries, evidence, options.grounding);
  cq.cnf = assert_evidence(rules_to_formula(cq.ground), evidence);
  cq.ddnnf = compile(cq.cnf, options.compile, &cq.stats);
  if (options.smooth) cq.ddnnf = smooth(cq.ddnnf);
  cq.circuit = to_arithmetic_circuit(cq.ddnnf, cq.cnf.weights);
  return cq;
}

Engine::Engine(Program program, PipelineOptions options)
    : program_(std::move(program)), options_(options) {}

const CompiledQuery& Engine::compiled(const std::vector<Atom>& queries,
                                      const PartialInterpretation& evidence) {
  std::vector<std::string> names;
  for (const auto& q : queries) names.push_back(q.to_string());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::string key;
  for (const auto& n : names) key += n + ";";
  key += "|" + evidence.to_string();
  auto& slot = cache_[key];
  if (!slot) slot = std::make_unique<CompiledQuery>(compile_query(program_, queries, evidence, options_));
  return *slot;
}

const GroundProgram& Engine::full() {
  if (!full_) full_ = std::make_unique<GroundProgram>(full_grounding(program_, options_.grounding));
  return *full_;
}

double Engine::prob_evidence(const PartialInterpretation& evidence) {
  return evaluate(compiled({}, evidence).circuit);
}

std::map<std::string, double> Engine::marginals(const std::vector<Atom>& queries,
                                                const PartialInterpretation& evidence) {
  const auto& cq = compiled(queries, evidence);
  auto m = all_marginals(cq.circuit);
  if (!(m.total > 0.0)) zero_evidence(evidence);
  std::map<std::string, double> out;
  auto report = [&](AtomId a) {
    auto v = static_cast<std::size_t>(var_of_atom(a));
    out[cq.ground.atoms.name(a)] = m.pos[v] / m.total;
  };
  for (const auto& q : queries) {
    if (q.is_ground()) {
      auto id = cq.ground.atoms.find(q);
      if (id) {
        report(*id);
      } else {
        out[q.to_string()] = 0.0;
      }
      continue;
    }
    for (std::size_t a = 0; a < cq.ground.atoms.size(); ++a) {
      if (instance_of(cq.ground.atoms.atom(static_cast<AtomId>(a)), q)) {
        report(static_cast<AtomId>(a));
      }
    }
  }
  return out;
}

MpeAnswer Engine::mpe(const PartialInterpretation& evidence) {
  const auto& cq = compiled({}, evidence);
  MpeResult best;
  try {
    best = plp::mpe(cq.circuit);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ZeroProbability) zero_evidence(evidence);
    throw;
  }
  const auto& g = full();
  auto in_rgp = cq.ground.fact_index();
  MpeAnswer out;
  out.probability = best.probability;
  std::vector<bool> choice(g.facts.size());
  for (std::size_t i = 0; i < g.facts.size(); ++i) {
    const auto& f = g.facts[i];
    auto id = cq.ground.atoms.find(g.atoms.name(f.atom));
    if (id && in_rgp[static_cast<std::size_t>(*id)] >= 0) {
      choice[i] = best.assignment[static_cast<std::size_t>(var_of_atom(*id))] > 0;
    } else {
      // Irrelevant to the evidence: each fact takes its likelier value.
      choice[i] = f.probability > 0.5;
      out.probability *= std::max(f.probability, 1.0 - f.probability);
    }
    if (choice[i]) out.true_facts.push_back(g.atoms.name(f.atom));
  }
  std::sort(out.true_facts.begin(), out.true_facts.end());
  for (const auto& [key, entry] : world_of_choice(g, choice)) {
    if (!evidence.contains(key)) out.world.assign(entry.atom, entry.value);
  }
  return out;
}

double prob_evidence(const Program& program, const PartialInterpretation& evidence) {
  return Engine(program).prob_evidence(evidence);
}

std::map<std::string, double> marginals(const Program& program, const std::vector<Atom>& queries,
                                        const PartialInterpretation& evidence) {
  return Engine(program).marginals(queries, evidence);
}

MpeAnswer mpe_task(const Program& program, const PartialInterpretation& evidence) {
  return Engine(program).mpe(evidence);
}

}  // namespace plp
