#include "plp/logic2cnf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "plp/error.hpp"

namespace plp {

int WeightedCNF::var_of(const std::string& atom) const {
  for (int v = 1; v <= num_vars; ++v) {
    if (var_atom[static_cast<std::size_t>(v)] == atom) return v;
  }
  return 0;
}

namespace {

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string real12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

class FormulaBuilder {
 public:
  explicit FormulaBuilder(WeightedCNF& f) : f_(f) {}

  int new_aux(std::string name) {
    ++f_.num_vars;
    f_.role.push_back(VarRole::Auxiliary);
    f_.var_atom.push_back(std::move(name));
    f_.source.push_back(-1);
    f_.weights.pos.push_back(1.0);
    f_.weights.neg.push_back(1.0);
    return f_.num_vars;
  }

  void add_clause(std::vector<int> lits) {
    std::vector<int> out;
    for (int l : lits) {
      if (std::find(out.begin(), out.end(), -l) != out.end()) return;  // tautology
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    f_.clauses.push_back(std::move(out));
  }

  // head <-> OR_i AND(bodies[i])
  void define(int head, const std::vector<std::vector<int>>& bodies) {
    for (const auto& b : bodies) {
      if (b.empty()) {
        add_clause({head});
        return;
      }
    }
    if (bodies.empty()) {
      add_clause({-head});
      return;
    }
    if (bodies.size() == 1) {
      define_conjunction(head, bodies.front());
      return;
    }
    std::vector<int> terms;
    for (const auto& b : bodies) {
      if (b.size() == 1) {
        terms.push_back(b.front());
      } else {
        int aux = new_aux("aux" + std::to_string(++aux_count_));
        define_conjunction(aux, b);
        terms.push_back(aux);
      }
    }
    for (int t : terms) add_clause({head, -t});
    std::vector<int> big{-head};
    big.insert(big.end(), terms.begin(), terms.end());
    add_clause(std::move(big));
  }

 private:
  void define_conjunction(int head, const std::vector<int>& body) {
    std::vector<int> back{head};
    for (int l : body) {
      add_clause({-head, l});
      back.push_back(-l);
    }
    add_clause(std::move(back));
  }

  WeightedCNF& f_;
  int aux_count_ = 0;
};

// Tarjan's algorithm, iterative. Returns the component index of every atom;
// components are numbered in reverse topological order.
std::vector<int> strongly_connected(const std::vector<std::vector<AtomId>>& succ) {
  const std::size_t n = succ.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0, components = 0;
  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    std::vector<Frame> frames{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      if (fr.edge < succ[fr.node].size()) {
        auto w = static_cast<std::size_t>(succ[fr.node][fr.edge++]);
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.node] = std::min(low[fr.node], index[w]);
        }
        continue;
      }
      std::size_t v = fr.node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
    }
  }
  return comp;
}

}  // namespace

WeightedCNF rules_to_formula(const GroundProgram& g) {
  const std::size_t n = g.atoms.size();
  WeightedCNF f;
  f.num_vars = static_cast<int>(n);
  f.role.assign(n + 1, VarRole::Derived);
  f.var_atom.assign(n + 1, "");
  f.source.assign(n + 1, -1);
  f.weights.pos.assign(n + 1, 1.0);
  f.weights.neg.assign(n + 1, 1.0);

  auto fact_of = g.fact_index();
  for (std::size_t a = 0; a < n; ++a) {
    f.var_atom[a + 1] = g.atoms.name(static_cast<AtomId>(a));
    int fi = fact_of[a];
    if (fi < 0) continue;
    const auto& fact = g.facts[static_cast<std::size_t>(fi)];
    if (std::isnan(fact.probability)) {
      throw Error(ErrorKind::Semantic,
                  "probabilistic fact " + g.atoms.name(fact.atom) + " has no probability");
    }
    f.role[a + 1] = VarRole::Probabilistic;
    f.source[a + 1] = fact.source;
    f.weights.pos[a + 1] = fact.probability;
    f.weights.neg[a + 1] = 1.0 - fact.probability;
  }

  std::vector<std::vector<std::size_t>> rules_of(n);
  std::vector<std::vector<AtomId>> succ(n);
  for (std::size_t r = 0; r < g.rules.size(); ++r) {
    const auto& rule = g.rules[r];
    auto h = static_cast<std::size_t>(rule.head);
    if (fact_of[h] >= 0) {
      throw Error(ErrorKind::Semantic, "probabilistic atom " + g.atoms.name(rule.head) +
                                           " occurs as a rule head");
    }
    rules_of[h].push_back(r);
    for (const auto& l : rule.body) {
      if (fact_of[static_cast<std::size_t>(l.atom)] < 0) succ[h].push_back(l.atom);
    }
  }

  auto comp = strongly_connected(succ);
  std::vector<std::vector<AtomId>> members(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (fact_of[a] < 0) members[static_cast<std::size_t>(comp[a])].push_back(static_cast<AtomId>(a));
  }
  std::vector<bool> cyclic(n, false);
  for (const auto& rule : g.rules) {
    int c = comp[static_cast<std::size_t>(rule.head)];
    for (const auto& l : rule.body) {
      if (comp[static_cast<std::size_t>(l.atom)] != c || fact_of[static_cast<std::size_t>(l.atom)] >= 0) {
        continue;
      }
      if (!l.positive) {
        throw Error(ErrorKind::Unsound, "not locally stratified under this converter: " +
                                            g.atoms.name(rule.head) + " depends negatively on " +
                                            g.atoms.name(l.atom) + " within a cycle");
      }
      cyclic[static_cast<std::size_t>(c)] = true;
    }
  }

  FormulaBuilder builder(f);
  auto body_of = [&](const GroundRule& rule) {
    std::vector<int> lits;
    for (const auto& l : rule.body) lits.push_back(l.positive ? var_of_atom(l.atom) : -var_of_atom(l.atom));
    return lits;
  };

  std::vector<bool> done(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    if (fact_of[a] >= 0 || done[a]) continue;
    auto c = static_cast<std::size_t>(comp[a]);
    if (!cyclic[c]) {
      std::vector<std::vector<int>> bodies;
      for (std::size_t r : rules_of[a]) bodies.push_back(body_of(g.rules[r]));
      builder.define(var_of_atom(static_cast<AtomId>(a)), bodies);
      done[a] = true;
      continue;
    }

    // Unfold the component: level j of atom b holds iff some rule body of b
    // holds with the component's atoms read at level j-1. Level 0 is all
    // false and level k (the component size) is the atom itself.
    const auto& scc = members[c];
    const std::size_t k = scc.size();
    std::unordered_map<AtomId, std::size_t> slot;
    for (std::size_t i = 0; i < k; ++i) slot[scc[i]] = i;
    std::vector<std::vector<int>> level(k, std::vector<int>(k + 1, 0));
    for (std::size_t i = 0; i < k; ++i) level[i][k] = var_of_atom(scc[i]);
    for (std::size_t j = 1; j < k; ++j) {
      for (std::size_t i = 0; i < k; ++i) {
        level[i][j] = builder.new_aux("lvl" + std::to_string(j) + "__" + g.atoms.name(scc[i]));
      }
    }
    for (std::size_t j = 1; j <= k; ++j) {
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::vector<int>> bodies;
        for (std::size_t r : rules_of[static_cast<std::size_t>(scc[i])]) {
          std::vector<int> lits;
          bool reachable = true;
          for (const auto& l : g.rules[r].body) {
            auto it = slot.find(l.atom);
            if (it == slot.end() || fact_of[static_cast<std::size_t>(l.atom)] >= 0) {
              lits.push_back(l.positive ? var_of_atom(l.atom) : -var_of_atom(l.atom));
            } else if (j == 1) {
              reachable = false;
              break;
            } else {
              lits.push_back(level[it->second][j - 1]);
            }
          }
          if (reachable) bodies.push_back(std::move(lits));
        }
        builder.define(level[i][j], bodies);
      }
    }
    for (AtomId m : scc) done[static_cast<std::size_t>(m)] = true;
  }
  return f;
}

WeightedCNF assert_evidence(WeightedCNF f, const PartialInterpretation& e) {
  std::unordered_map<std::string, int> vars;
  for (int v = 1; v <= f.num_vars; ++v) {
    if (f.role[static_cast<std::size_t>(v)] != VarRole::Auxiliary) {
      vars.emplace(f.var_atom[static_cast<std::size_t>(v)], v);
    }
  }
  for (const auto& [key, entry] : e) {
    auto it = vars.find(key);
    if (it == vars.end()) {
      throw Error(ErrorKind::Semantic, "evidence atom " + key + " is not in the formula");
    }
    f.evidence_units.push_back(f.clauses.size());
    f.clauses.push_back({entry.value ? it->second : -it->second});
  }
  return f;
}

std::string export_dimacs(const WeightedCNF& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (int v = 1; v <= f.num_vars; ++v) {
    auto i = static_cast<std::size_t>(v);
    out << "c a " << v << ' ' << f.var_atom[i] << '\n';
    char role = f.role[i] == VarRole::Probabilistic ? 'p' : f.role[i] == VarRole::Derived ? 'd' : 'x';
    out << "c r " << v << ' ' << role << '\n';
    if (f.source[i] >= 0) out << "c s " << v << ' ' << f.source[i] << '\n';
    out << "c w " << v << ' ' << real17(f.weights.pos[i]) << '\n';
    out << "c w " << -v << ' ' << real17(f.weights.neg[i]) << '\n';
  }
  for (std::size_t u : f.evidence_units) out << "c e " << u << '\n';
  for (const auto& c : f.clauses) {
    for (int l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

WeightedCNF import_dimacs(std::string_view text) {
  WeightedCNF f;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::vector<int> pending;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::Semantic, "dimacs line " + std::to_string(line_no) + ": " + msg);
  };
  auto check_var = [&](long v) {
    if (v < 1 || v > f.num_vars) fail("variable out of range");
    return static_cast<std::size_t>(v);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "p") {
      std::string fmt;
      long vars = 0, clauses = 0;
      if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0) fail("malformed header");
      f.num_vars = static_cast<int>(vars);
      auto size = static_cast<std::size_t>(vars) + 1;
      f.role.assign(size, VarRole::Derived);
      f.var_atom.assign(size, "");
      f.source.assign(size, -1);
      f.weights.pos.assign(size, 1.0);
      f.weights.neg.assign(size, 1.0);
      header = true;
      continue;
    }
    if (!header) fail("clause or comment before header");
    if (tag == "c") {
      std::string kind;
      if (!(ls >> kind)) continue;
      if (kind == "a") {
        long v;
        std::string name;
        if (!(ls >> v)) fail("malformed atom line");
        std::getline(ls >> std::ws, name);
        f.var_atom[check_var(v)] = name;
      } else if (kind == "r") {
        long v;
        char r;
        if (!(ls >> v >> r)) fail("malformed role line");
        f.role[check_var(v)] = r == 'p' ? VarRole::Probabilistic : r == 'd' ? VarRole::Derived : VarRole::Auxiliary;
      } else if (kind == "s") {
        long v;
        int s;
        if (!(ls >> v >> s)) fail("malformed source line");
        f.source[check_var(v)] = s;
      } else if (kind == "w") {
        long lit;
        std::string w;
        if (!(ls >> lit >> w)) fail("malformed weight line");
        double value = std::strtod(w.c_str(), nullptr);
        if (lit > 0) {
          f.weights.pos[check_var(lit)] = value;
        } else {
          f.weights.neg[check_var(-lit)] = value;
        }
      } else if (kind == "e") {
        std::size_t idx;
        if (!(ls >> idx)) fail("malformed evidence line");
        f.evidence_units.push_back(idx);
      }
      continue;
    }
    std::istringstream cs(line);
    long lit;
    while (cs >> lit) {
      if (lit == 0) {
        f.clauses.push_back(std::move(pending));
        pending.clear();
      } else {
        check_var(lit < 0 ? -lit : lit);
        pending.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!pending.empty()) fail("last clause is not terminated by 0");
  return f;
}

std::string export_mln(const WeightedCNF& f) {
  std::ostringstream out;
  auto name = [&](int lit) {
    const auto& n = f.var_atom[static_cast<std::size_t>(lit < 0 ? -lit : lit)];
    return lit < 0 ? "!" + n : n;
  };
  for (const auto& c : f.clauses) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " v " : "") << name(c[i]);
    out << ".\n";
  }
  for (int v = 1; v <= f.num_vars; ++v) {
    if (f.role[static_cast<std::size_t>(v)] != VarRole::Probabilistic) continue;
    double p = f.weights.pos[static_cast<std::size_t>(v)];
    if (p <= 0.0) {
      out << name(-v) << ".\n";
    } else if (p >= 1.0) {
      out << name(v) << ".\n";
    } else {
      out << real12(std::log(p)) << ' ' << name(v) << '\n';
      out << real12(std::log(1.0 - p)) << ' ' << name(-v) << '\n';
    }
  }
  return out.str();
}

}  // namespace plp
