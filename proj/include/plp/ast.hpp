#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plp {

/// A first-order term: variable, constant, or compound f(t1,...,tn).
struct Term {
  enum class Kind { Variable, Constant, Compound };

  Kind kind = Kind::Constant;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_ground() const;
  std::string to_string() const;

  friend bool operator==(const Term&, const Term&) = default;
};

/// p(t1,...,tn). Arity zero atoms print without parentheses.
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  explicit Atom(std::string pred, std::vector<Term> a = {})
      : predicate(std::move(pred)), args(std::move(a)) {}

  bool is_ground() const;
  /// "name/arity"; predicates are identified by this key.
  std::string signature() const;
  /// Canonical surface syntax, also the identity of a ground atom.
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  std::string to_string() const;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// head :- body. An empty body makes the rule a (deterministic) fact.
struct Rule {
  Atom head;
  std::vector<Literal> body;

  std::string to_string() const;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// p::atom :- domain_body. A learnable fact carries the t(_) marker instead of
/// a probability; `parameter` is its index among learnable facts.
struct ProbabilisticFact {
  double probability = std::numeric_limits<double>::quiet_NaN();
  std::optional<int> parameter;
  Atom atom;
  std::vector<Literal> domain_body;

  bool learnable() const { return parameter.has_value(); }
  bool intensional() const { return !domain_body.empty(); }
  std::string to_string() const;

  friend bool operator==(const ProbabilisticFact& a, const ProbabilisticFact& b);
};

/// Truth-value map over ground atoms, ordered by surface syntax.
class PartialInterpretation {
 public:
  struct Entry {
    Atom atom;
    bool value;
  };

  /// Records atom=value. Returns false (and changes nothing) when the atom is
  /// already assigned the opposite value.
  bool assign(const Atom& atom, bool value);
  void erase(const std::string& key) { entries_.erase(key); }

  std::optional<bool> value_of(const Atom& atom) const;
  std::optional<bool> value_of(const std::string& key) const;
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// evidence(atom,value). lines.
  std::string to_string() const;

  friend bool operator==(const PartialInterpretation& a,
                         const PartialInterpretation& b);

 private:
  std::map<std::string, Entry> entries_;
};

struct Program {
  std::vector<ProbabilisticFact> prob_facts;
  std::vector<Rule> rules;
  std::vector<Atom> queries;
  PartialInterpretation evidence;

  int num_parameters() const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// True when some substitution of the variables of `pattern` yields `ground`.
bool instance_of(const Atom& ground, const Atom& pattern);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace plp
