#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "plp/grounder.hpp"
#include "plp/parallel.hpp"

// Brute-force reference semantics. Deliberately naive: every answer comes from
// enumerating total choices and computing well-founded models.

namespace plp::oracle {

enum class Truth : signed char { False = 0, True = 1, Undefined = 2 };

struct WfmResult {
  std::vector<Truth> value;
  std::vector<AtomId> undefined;

  bool two_valued() const { return undefined.empty(); }
  bool holds(AtomId a) const { return value[static_cast<std::size_t>(a)] == Truth::True; }
};

/// Well-founded model by the alternating fixpoint. `true_facts` marks atoms
/// that hold unconditionally (the chosen probabilistic facts).
WfmResult wfm(const std::vector<GroundRule>& rules, std::size_t num_atoms,
              const std::vector<bool>& true_facts);

struct Row {
  std::vector<bool> choice;  // one flag per entry of GroundProgram::facts
  std::vector<bool> world;   // one flag per atom id
  double probability;
};

inline constexpr std::size_t kMaxFacts = 24;

/// All 2^n total choices. Row r sets fact i true iff bit (n-1-i) of r is
/// clear, so row 0 is the all-true choice and the last fact varies fastest.
std::vector<Row> enumerate(const GroundProgram& g, Execution exec = Execution::Parallel);

double evid(const GroundProgram& g, const PartialInterpretation& e,
            Execution exec = Execution::Parallel);

/// Conditional marginals P(q | e) keyed by surface syntax. Query atoms outside
/// the atom table are reported as 0.
std::map<std::string, double> marg(const GroundProgram& g, const std::vector<Atom>& queries,
                                   const PartialInterpretation& e,
                                   Execution exec = Execution::Parallel);

struct MpeWorld {
  Row row;
  std::size_t row_index;
};

/// Most probable world consistent with e; ties go to the lowest row index.
MpeWorld mpe(const GroundProgram& g, const PartialInterpretation& e,
             Execution exec = Execution::Parallel);

}  // namespace plp::oracle
