#include "plp/grounder.hpp"

#include <cmath>
#include <random>
#include <set>
#include <unordered_set>
#include <utility>

#include "plp/error.hpp"
#include "plp/oracle.hpp"

namespace plp {

AtomId AtomTable::intern(const Atom& atom) {
  auto key = atom.to_string();
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  auto id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(atom);
  names_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<AtomId> AtomTable::find(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> GroundProgram::fact_index() const {
  std::vector<int> out(atoms.size(), -1);
  for (std::size_t i = 0; i < facts.size(); ++i) {
    out[static_cast<std::size_t>(facts[i].atom)] = static_cast<int>(i);
  }
  return out;
}

std::size_t GroundProgram::num_deterministic_facts() const {
  std::size_t n = 0;
  for (const auto& r : rules) n += r.body.empty();
  return n;
}

std::size_t GroundProgram::num_proper_rules() const {
  return rules.size() - num_deterministic_facts();
}

namespace {

using Substitution = std::vector<std::pair<std::string, Term>>;

const Term* lookup(const Substitution& s, const std::string& var) {
  for (const auto& [name, value] : s) {
    if (name == var) return &value;
  }
  return nullptr;
}

// One-way matching of a pattern against a ground term.
bool match(const Term& pattern, const Term& ground, Substitution& s) {
  if (pattern.is_variable()) {
    if (const Term* bound = lookup(s, pattern.name)) return *bound == ground;
    s.emplace_back(pattern.name, ground);
    return true;
  }
  if (pattern.kind != ground.kind || pattern.name != ground.name ||
      pattern.args.size() != ground.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (!match(pattern.args[i], ground.args[i], s)) return false;
  }
  return true;
}

Term substitute(const Term& t, const Substitution& s) {
  if (t.is_variable()) {
    const Term* bound = lookup(s, t.name);
    return bound ? *bound : t;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, s);
  return out;
}

Atom substitute(const Atom& a, const Substitution& s) {
  Atom out = a;
  for (auto& t : out.args) t = substitute(t, s);
  return out;
}

// Ground atoms bucketed by predicate signature, in insertion order.
class AtomIndex {
 public:
  explicit AtomIndex(std::size_t limit) : limit_(limit) {}

  bool add(const Atom& atom, const std::string& key) {
    if (!keys_.insert(key).second) return false;
    if (keys_.size() > limit_) {
      throw Error(ErrorKind::ResourceLimit,
                  "grounding exceeded the limit of " + std::to_string(limit_) + " atoms");
    }
    buckets_[atom.signature()].push_back(atom);
    return true;
  }
  bool add(const Atom& atom) { return add(atom, atom.to_string()); }

  bool contains(const std::string& key) const { return keys_.count(key) != 0; }

  const std::vector<Atom>& bucket(const std::string& signature) const {
    static const std::vector<Atom> kEmpty;
    auto it = buckets_.find(signature);
    return it == buckets_.end() ? kEmpty : it->second;
  }

 private:
  std::size_t limit_;
  std::unordered_set<std::string> keys_;
  std::unordered_map<std::string, std::vector<Atom>> buckets_;
};

// Enumerates substitutions that make every positive literal a member of the
// index. Buckets are copied by index, so callers may not grow them meanwhile.
template <class Fn>
void solve(const std::vector<const Literal*>& goals, std::size_t i, const Substitution& s,
           const AtomIndex& index, Fn&& on_solution) {
  if (i == goals.size()) {
    on_solution(s);
    return;
  }
  const Atom& goal = goals[i]->atom;
  const auto& bucket = index.bucket(goal.signature());
  for (std::size_t k = 0; k < bucket.size(); ++k) {
    Substitution next = s;
    bool ok = true;
    for (std::size_t a = 0; a < goal.args.size() && ok; ++a) {
      ok = match(goal.args[a], bucket[k].args[a], next);
    }
    if (ok) solve(goals, i + 1, next, index, on_solution);
  }
}

std::vector<const Literal*> positives(const std::vector<Literal>& body) {
  std::vector<const Literal*> out;
  for (const auto& l : body) {
    if (l.positive) out.push_back(&l);
  }
  return out;
}

struct KeyedLiteral {
  std::string key;
  bool positive;
};

struct RuleInstance {
  std::string head;
  std::vector<KeyedLiteral> body;
};

struct FactInstance {
  std::string key;
  double probability;
  int source;
  std::optional<int> parameter;
};

// The ground universe of a program: expanded probabilistic facts and every
// rule instance whose positive body is possible.
struct Universe {
  std::vector<FactInstance> facts;
  std::unordered_map<std::string, std::size_t> fact_by_key;
  std::vector<RuleInstance> rules;
  std::unordered_map<std::string, std::vector<std::size_t>> rules_by_head;
  std::unordered_map<std::string, Atom> atoms;  // Herbrand base
  std::unordered_map<std::string, std::vector<std::string>> keys_by_signature;

  void note_atom(const Atom& a, const std::string& key) {
    if (atoms.emplace(key, a).second) keys_by_signature[a.signature()].push_back(key);
  }
};

// Fixpoint over rules ignoring negation: the atoms that can hold in some world.
void saturate(const std::vector<const Rule*>& rules, AtomIndex& index) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule* r : rules) {
      std::vector<Atom> heads;
      solve(positives(r->body), 0, {}, index,
            [&](const Substitution& s) { heads.push_back(substitute(r->head, s)); });
      for (const auto& h : heads) changed |= index.add(h);
    }
  }
}

template <class Fn>
void instantiate(const std::vector<const Rule*>& rules, const AtomIndex& index, Fn&& emit) {
  for (const Rule* r : rules) {
    solve(positives(r->body), 0, {}, index, [&](const Substitution& s) {
      Atom head = substitute(r->head, s);
      std::vector<Literal> body;
      body.reserve(r->body.size());
      for (const auto& l : r->body) body.push_back(Literal{substitute(l.atom, s), l.positive});
      emit(std::move(head), std::move(body));
    });
  }
}

std::set<std::string> probabilistic_dependents(const Program& program) {
  std::set<std::string> out;
  for (const auto& f : program.prob_facts) out.insert(f.atom.signature());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : program.rules) {
      if (out.count(r.head.signature())) continue;
      for (const auto& l : r.body) {
        if (out.count(l.atom.signature())) {
          out.insert(r.head.signature());
          changed = true;
          break;
        }
      }
    }
  }
  return out;
}

// Atoms true in the part of the program that does not depend on any
// probabilistic fact; these define the domains of intensional facts.
AtomIndex deterministic_model(const Program& program, const std::set<std::string>& nondet,
                              std::size_t limit) {
  std::vector<const Rule*> rules;
  for (const auto& r : program.rules) {
    if (!nondet.count(r.head.signature())) rules.push_back(&r);
  }
  AtomIndex possible(limit);
  saturate(rules, possible);

  AtomTable table;
  std::vector<GroundRule> ground;
  instantiate(rules, possible, [&](Atom head, std::vector<Literal> body) {
    GroundRule g{table.intern(head), {}};
    for (const auto& l : body) g.body.push_back({table.intern(l.atom), l.positive});
    ground.push_back(std::move(g));
  });
  auto model = oracle::wfm(ground, table.size(), std::vector<bool>(table.size(), false));
  if (!model.two_valued()) {
    throw Error(ErrorKind::Unsound, "deterministic part of the program has no two-valued model; " +
                                        table.name(model.undefined.front()) + " is undefined");
  }
  AtomIndex truth(limit);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (model.holds(static_cast<AtomId>(i))) truth.add(table.atom(static_cast<AtomId>(i)));
  }
  return truth;
}

Universe build_universe(const Program& program, const GroundingOptions& options) {
  Universe u;
  auto nondet = probabilistic_dependents(program);
  bool need_domains = false;
  for (const auto& f : program.prob_facts) {
    for (const auto& l : f.domain_body) {
      need_domains = true;
      if (nondet.count(l.atom.signature())) {
        throw Error(ErrorKind::Semantic, "domain of " + f.atom.to_string() +
                                             " depends on probabilistic facts through " +
                                             l.atom.signature());
      }
    }
  }
  AtomIndex domains =
      need_domains ? deterministic_model(program, nondet, options.atom_limit) : AtomIndex(0);

  AtomIndex possible(options.atom_limit);
  for (std::size_t i = 0; i < program.prob_facts.size(); ++i) {
    const auto& f = program.prob_facts[i];
    std::vector<Atom> instances;
    if (f.domain_body.empty()) {
      instances.push_back(f.atom);
    } else {
      solve(positives(f.domain_body), 0, {}, domains, [&](const Substitution& s) {
        for (const auto& l : f.domain_body) {
          if (!l.positive && domains.contains(substitute(l.atom, s).to_string())) return;
        }
        instances.push_back(substitute(f.atom, s));
      });
    }
    std::unordered_set<std::string> seen;
    for (const auto& a : instances) {
      auto key = a.to_string();
      if (!seen.insert(key).second) continue;
      if (u.fact_by_key.count(key)) {
        throw Error(ErrorKind::Semantic, "probabilistic fact " + key + " is defined twice");
      }
      u.fact_by_key.emplace(key, u.facts.size());
      u.facts.push_back({key, f.probability, static_cast<int>(i), f.parameter});
      possible.add(a, key);
      u.note_atom(a, key);
    }
  }

  std::vector<const Rule*> rules;
  for (const auto& r : program.rules) rules.push_back(&r);
  saturate(rules, possible);

  instantiate(rules, possible, [&](Atom head, std::vector<Literal> body) {
    RuleInstance inst;
    inst.head = head.to_string();
    u.note_atom(head, inst.head);
    for (const auto& l : body) {
      auto key = l.atom.to_string();
      u.note_atom(l.atom, key);
      inst.body.push_back({std::move(key), l.positive});
    }
    u.rules_by_head[inst.head].push_back(u.rules.size());
    u.rules.push_back(std::move(inst));
  });
  return u;
}

GroundRule intern_rule(GroundProgram& g, const Universe& u, const RuleInstance& r) {
  GroundRule out{g.atoms.intern(u.atoms.at(r.head)), {}};
  out.body.reserve(r.body.size());
  for (const auto& l : r.body) out.body.push_back({g.atoms.intern(u.atoms.at(l.key)), l.positive});
  return out;
}

bool inactive(const RuleInstance& r, const PartialInterpretation& evidence) {
  for (const auto& l : r.body) {
    auto v = evidence.value_of(l.key);
    if (v && *v != l.positive) return true;
  }
  return false;
}

}  // namespace

GroundProgram relevant_ground_program(const Program& program, const std::vector<Atom>& queries,
                                      const PartialInterpretation& evidence,
                                      const GroundingOptions& options) {
  Universe u = build_universe(program, options);
  GroundProgram g;

  std::vector<Atom> roots;
  for (const auto& q : queries) {
    if (q.is_ground()) {
      roots.push_back(q);
      continue;
    }
    auto it = u.keys_by_signature.find(q.signature());
    if (it == u.keys_by_signature.end()) continue;
    for (const auto& key : it->second) {
      Substitution s;
      const Atom& candidate = u.atoms.at(key);
      bool ok = true;
      for (std::size_t a = 0; a < q.args.size() && ok; ++a) {
        ok = match(q.args[a], candidate.args[a], s);
      }
      if (ok) roots.push_back(candidate);
    }
  }
  for (const auto& [key, entry] : evidence) {
    if (!u.atoms.count(key)) {
      throw Error(ErrorKind::Semantic, "evidence atom " + key + " does not occur in the program");
    }
    roots.push_back(entry.atom);
  }

  std::unordered_set<std::string> visited;
  std::vector<std::string> stack;
  for (const auto& root : roots) {
    g.atoms.intern(root);
    stack.push_back(root.to_string());
    while (!stack.empty()) {
      std::string key = std::move(stack.back());
      stack.pop_back();
      if (!visited.insert(key).second) continue;
      if (auto f = u.fact_by_key.find(key); f != u.fact_by_key.end()) {
        const auto& fact = u.facts[f->second];
        g.facts.push_back({*g.atoms.find(key), fact.probability, fact.source, fact.parameter});
        continue;
      }
      auto it = u.rules_by_head.find(key);
      if (it == u.rules_by_head.end()) continue;
      for (std::size_t idx : it->second) {
        const auto& r = u.rules[idx];
        if (inactive(r, evidence)) continue;
        g.rules.push_back(intern_rule(g, u, r));
        for (auto l = r.body.rbegin(); l != r.body.rend(); ++l) {
          if (!visited.count(l->key)) stack.push_back(l->key);
        }
      }
    }
  }
  return g;
}

GroundProgram full_grounding(const Program& program, const GroundingOptions& options) {
  Universe u = build_universe(program, options);
  GroundProgram g;
  for (const auto& f : u.facts) {
    g.facts.push_back({g.atoms.intern(u.atoms.at(f.key)), f.probability, f.source, f.parameter});
  }
  for (const auto& r : u.rules) g.rules.push_back(intern_rule(g, u, r));
  return g;
}

std::string dump(const GroundProgram& g) {
  std::string out;
  for (const auto& f : g.facts) {
    out += std::isnan(f.probability) ? std::string("t(_)") : format_real(f.probability);
    out += "::" + g.atoms.name(f.atom) + ".\n";
  }
  for (const auto& r : g.rules) {
    out += g.atoms.name(r.head);
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      out += i ? ", " : " :- ";
      if (!r.body[i].positive) out += "\\+";
      out += g.atoms.name(r.body[i].atom);
    }
    out += ".\n";
  }
  return out;
}

PartialInterpretation world_of_choice(const GroundProgram& g, const std::vector<bool>& choice) {
  std::vector<bool> chosen(g.atoms.size(), false);
  for (std::size_t i = 0; i < g.facts.size(); ++i) {
    chosen[static_cast<std::size_t>(g.facts[i].atom)] = choice[i];
  }
  auto model = oracle::wfm(g.rules, g.atoms.size(), chosen);
  if (!model.two_valued()) {
    throw Error(ErrorKind::Unsound, "program is not sound: the well-founded model leaves " +
                                        g.atoms.name(model.undefined.front()) + " undefined");
  }
  PartialInterpretation world;
  for (std::size_t i = 0; i < g.atoms.size(); ++i) {
    world.assign(g.atoms.atom(static_cast<AtomId>(i)), model.holds(static_cast<AtomId>(i)));
  }
  return world;
}

PartialInterpretation sample_world(const GroundProgram& full, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<bool> choice(full.facts.size());
  for (std::size_t i = 0; i < full.facts.size(); ++i) {
    double p = full.facts[i].probability;
    if (std::isnan(p)) {
      throw Error(ErrorKind::Semantic,
                  "cannot sample: " + full.atoms.name(full.facts[i].atom) + " has no probability");
    }
    choice[i] = unit(rng) < p;
  }
  return world_of_choice(full, choice);
}

PartialInterpretation sample_world(const Program& program, std::uint64_t seed) {
  return sample_world(full_grounding(program), seed);
}

}  // namespace plp
