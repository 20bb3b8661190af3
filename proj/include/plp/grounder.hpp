#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "plp/ast.hpp"

namespace plp {

using AtomId = int;

/// Bijection between ground atoms and dense integer ids.
class AtomTable {
 public:
  AtomId intern(const Atom& atom);
  std::optional<AtomId> find(const std::string& key) const;
  std::optional<AtomId> find(const Atom& atom) const { return find(atom.to_string()); }

  const Atom& atom(AtomId id) const { return atoms_[static_cast<std::size_t>(id)]; }
  const std::string& name(AtomId id) const { return names_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, AtomId> index_;
};

struct GroundLiteral {
  AtomId atom;
  bool positive;

  friend bool operator==(const GroundLiteral&, const GroundLiteral&) = default;
};

struct GroundRule {
  AtomId head;
  std::vector<GroundLiteral> body;

  friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

struct GroundFact {
  AtomId atom;
  double probability;
  /// Index of the ProbabilisticFact statement this instance came from.
  int source;
  std::optional<int> parameter;
};

struct GroundProgram {
  AtomTable atoms;
  std::vector<GroundRule> rules;
  std::vector<GroundFact> facts;

  /// Per atom id: index into `facts`, or -1 for derived atoms.
  std::vector<int> fact_index() const;
  std::size_t num_deterministic_facts() const;
  std::size_t num_proper_rules() const;
};

struct GroundingOptions {
  std::size_t atom_limit = 1'000'000;
};

/// Ground rules reached by tabled backward chaining from queries and evidence
/// atoms. Rules with a body literal that is false under the evidence are
/// dropped and their bodies are not explored. Non-ground queries are expanded
/// to their instances in the Herbrand base.
GroundProgram relevant_ground_program(const Program& program, const std::vector<Atom>& queries,
                                      const PartialInterpretation& evidence,
                                      const GroundingOptions& options = {});

/// Every ground fact and every ground rule instance whose positive body can
/// hold in some world.
GroundProgram full_grounding(const Program& program, const GroundingOptions& options = {});

/// One-line-per-statement dump in surface syntax: probabilistic facts first,
/// then rules in discovery order.
std::string dump(const GroundProgram& g);

/// Total truth assignment of `g` induced by a total choice (one flag per entry
/// of g.facts). Throws Error(Unsound) if the well-founded model is not
/// two-valued.
PartialInterpretation world_of_choice(const GroundProgram& g, const std::vector<bool>& choice);

/// Draws each ground probabilistic fact independently, then completes the
/// world with the well-founded model.
PartialInterpretation sample_world(const Program& program, std::uint64_t seed);
PartialInterpretation sample_world(const GroundProgram& full, std::uint64_t seed);

}  // namespace plp
