#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "plp/grounder.hpp"

namespace plp {

enum class VarRole : unsigned char { Probabilistic, Derived, Auxiliary };

/// Weight per literal; index by variable, positive and negative phase apart.
struct LiteralWeights {
  std::vector<double> pos;
  std::vector<double> neg;

  double operator()(int lit) const {
    return lit > 0 ? pos[static_cast<std::size_t>(lit)] : neg[static_cast<std::size_t>(-lit)];
  }

  friend bool operator==(const LiteralWeights&, const LiteralWeights&) = default;
};

/// CNF over variables 1..num_vars with a weight for every literal. Variable
/// a+1 stands for atom id a of the ground program it was built from;
/// auxiliary variables follow the original ones.
struct WeightedCNF {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  LiteralWeights weights;
  std::vector<VarRole> role;          // index 1..num_vars
  std::vector<std::string> var_atom;  // index 1..num_vars
  /// Probabilistic variables: source statement index, else -1.
  std::vector<int> source;
  /// Indices into `clauses` of the unit clauses added by assert_evidence.
  std::vector<std::size_t> evidence_units;

  int var_of(const std::string& atom) const;  // 0 when absent

  friend bool operator==(const WeightedCNF&, const WeightedCNF&) = default;
};

inline int var_of_atom(AtomId a) { return a + 1; }

/// Completion of the ground rules, with positive loops removed by unfolding
/// each cyclic strongly connected component into level-indexed copies.
/// Throws Error(Unsound) when a component contains a negative edge.
WeightedCNF rules_to_formula(const GroundProgram& g);

/// Adds one unit clause per evidence literal.
WeightedCNF assert_evidence(WeightedCNF f, const PartialInterpretation& e);

/// "p cnf V C" followed by comment lines "c a <var> <name>", "c r <var>
/// p|d|x", "c w <lit> <weight>", "c e <clause index>", then the clauses.
std::string export_dimacs(const WeightedCNF& f);
WeightedCNF import_dimacs(std::string_view text);

/// Ground MLN: every clause as a hard formula, ln(p) / ln(1-p) soft units for
/// probabilistic variables. Probabilities 0 and 1 become hard units.
std::string export_mln(const WeightedCNF& f);

}  // namespace plp
