#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plp/circuit.hpp"
#include "plp/compiler.hpp"
#include "plp/grounder.hpp"
#include "plp/logic2cnf.hpp"

namespace plp {

struct PipelineOptions {
  /// Off only to reproduce what goes wrong without smoothing.
  bool smooth = true;
  GroundingOptions grounding;
  CompileOptions compile;
};

/// Every intermediate product of ground -> formula -> d-DNNF -> circuit.
struct CompiledQuery {
  GroundProgram ground;
  WeightedCNF cnf;  // evidence asserted as unit clauses
  DdnnfGraph ddnnf;
  ArithmeticCircuit circuit;
  CompileStats stats;
};

CompiledQuery compile_query(const Program& program, const std::vector<Atom>& queries,
                            const PartialInterpretation& evidence,
                            const PipelineOptions& options = {});

struct MpeAnswer {
  /// Truth values of every atom of the full grounding not fixed by evidence.
  PartialInterpretation world;
  /// Probabilistic atoms chosen true, in surface syntax, sorted.
  std::vector<std::string> true_facts;
  double probability = 0.0;
};

/// Caches one compiled circuit per (queries, evidence) pair.
class Engine {
 public:
  explicit Engine(Program program, PipelineOptions options = {});

  double prob_evidence(const PartialInterpretation& evidence);
  /// P(q | evidence) for every ground instance of every query, keyed by
  /// surface syntax. Ground queries outside the Herbrand base map to 0.
  std::map<std::string, double> marginals(const std::vector<Atom>& queries,
                                          const PartialInterpretation& evidence);
  MpeAnswer mpe(const PartialInterpretation& evidence);

  const CompiledQuery& compiled(const std::vector<Atom>& queries,
                                const PartialInterpretation& evidence);
  const GroundProgram& full();
  std::size_t cache_size() const { return cache_.size(); }

 private:
  Program program_;
  PipelineOptions options_;
  std::map<std::string, std::unique_ptr<CompiledQuery>> cache_;
  std::unique_ptr<GroundProgram> full_;
};

double prob_evidence(const Program& program, const PartialInterpretation& evidence);
std::map<std::string, double> marginals(const Program& program, const std::vector<Atom>& queries,
                                        const PartialInterpretation& evidence);
MpeAnswer mpe_task(const Program& program, const PartialInterpretation& evidence);

}  // namespace plp
