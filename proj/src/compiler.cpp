#include "plp/compiler.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "plp/error.hpp"

namespace plp {

bool DdnnfGraph::is_false() const {
  const auto& r = nodes[static_cast<std::size_t>(root)];
  return r.kind == DdnnfNode::Kind::Or && r.children.empty();
}

std::size_t DdnnfGraph::num_edges() const {
  std::size_t e = 0;
  for (const auto& n : nodes) e += n.children.size();
  return e;
}

std::vector<std::vector<int>> DdnnfGraph::var_sets() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.kind == DdnnfNode::Kind::Literal) {
      out[i] = {std::abs(n.literal)};
      continue;
    }
    std::vector<int> acc;
    for (int c : n.children) {
      std::vector<int> merged;
      const auto& cs = out[static_cast<std::size_t>(c)];
      std::set_union(acc.begin(), acc.end(), cs.begin(), cs.end(), std::back_inserter(merged));
      acc.swap(merged);
    }
    out[i] = std::move(acc);
  }
  return out;
}

namespace {

using Clause = std::vector<int>;

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

// Hash-consed node storage.
class NodeStore {
 public:
  int literal(int lit) { return intern({DdnnfNode::Kind::Literal, lit, 0, {}}); }
  int true_node() { return intern({DdnnfNode::Kind::And, 0, 0, {}}); }
  int false_node() { return intern({DdnnfNode::Kind::Or, 0, 0, {}}); }

  bool is_true(int id) const {
    const auto& n = nodes_[static_cast<std::size_t>(id)];
    return n.kind == DdnnfNode::Kind::And && n.children.empty();
  }
  bool is_false(int id) const {
    const auto& n = nodes_[static_cast<std::size_t>(id)];
    return n.kind == DdnnfNode::Kind::Or && n.children.empty();
  }

  int make_and(const std::vector<int>& children) {
    std::vector<int> kept;
    for (int c : children) {
      if (is_false(c)) return false_node();
      if (!is_true(c) && std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
    }
    if (kept.empty()) return true_node();
    if (kept.size() == 1) return kept.front();
    return intern({DdnnfNode::Kind::And, 0, 0, std::move(kept)});
  }

  int make_or(int decision, const std::vector<int>& children) {
    std::vector<int> kept;
    for (int c : children) {
      if (!is_false(c)) kept.push_back(c);
    }
    if (kept.empty()) return false_node();
    if (kept.size() == 1) return kept.front();
    return intern({DdnnfNode::Kind::Or, 0, decision, std::move(kept)});
  }

  // Keeps only nodes reachable from root, renumbered in the same order.
  DdnnfGraph finish(int root, int num_vars) && {
    std::vector<bool> live(nodes_.size(), false);
    live[static_cast<std::size_t>(root)] = true;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      if (!live[i]) continue;
      for (int c : nodes_[i].children) live[static_cast<std::size_t>(c)] = true;
    }
    std::vector<int> id(nodes_.size(), -1);
    DdnnfGraph g;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!live[i]) continue;
      id[i] = static_cast<int>(g.nodes.size());
      DdnnfNode n = std::move(nodes_[i]);
      for (int& c : n.children) c = id[static_cast<std::size_t>(c)];
      g.nodes.push_back(std::move(n));
    }
    g.root = id[static_cast<std::size_t>(root)];
    g.num_vars = num_vars;
    return g;
  }

 private:
  int intern(DdnnfNode node) {
    std::vector<int> key{static_cast<int>(node.kind), node.literal, node.decision};
    key.insert(key.end(), node.children.begin(), node.children.end());
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(node));
    unique_.emplace(std::move(key), id);
    return id;
  }

  std::vector<DdnnfNode> nodes_;
  std::unordered_map<std::vector<int>, int, VectorHash> unique_;
};

std::vector<Clause> condition(const std::vector<Clause>& clauses, int lit) {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (const auto& c : clauses) {
    if (std::find(c.begin(), c.end(), lit) != c.end()) continue;
    Clause reduced;
    reduced.reserve(c.size());
    for (int l : c) {
      if (l != -lit) reduced.push_back(l);
    }
    out.push_back(std::move(reduced));
  }
  return out;
}

// Unit propagation. Returns false on conflict.
bool propagate(std::vector<Clause>& clauses, std::vector<int>& units) {
  while (true) {
    int unit = 0;
    for (const auto& c : clauses) {
      if (c.empty()) return false;
      if (c.size() == 1 && unit == 0) unit = c.front();
    }
    if (unit == 0) return true;
    units.push_back(unit);
    clauses = condition(clauses, unit);
  }
}

int find_root(std::unordered_map<int, int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

// Splits clauses into groups that share no variable, ordered by first clause.
std::vector<std::vector<Clause>> components(std::vector<Clause> clauses) {
  std::unordered_map<int, int> parent;
  for (const auto& c : clauses) {
    for (int l : c) parent.emplace(std::abs(l), std::abs(l));
  }
  for (const auto& c : clauses) {
    int first = find_root(parent, std::abs(c.front()));
    for (int l : c) {
      int r = find_root(parent, std::abs(l));
      if (r != first) parent[r] = first;
    }
  }
  std::unordered_map<int, std::size_t> group_of;
  std::vector<std::vector<Clause>> out;
  for (auto& c : clauses) {
    int r = find_root(parent, std::abs(c.front()));
    auto [it, inserted] = group_of.emplace(r, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(std::move(c));
  }
  return out;
}

bool literal_less(int a, int b) {
  return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
}

class Compiler {
 public:
  Compiler(NodeStore& store, const CompileOptions& options, CompileStats& stats)
      : store_(store), options_(options), stats_(stats) {}

  int formula(std::vector<Clause> clauses) {
    std::vector<int> units;
    if (!propagate(clauses, units)) return store_.false_node();
    std::vector<int> children;
    for (int u : units) children.push_back(store_.literal(u));
    for (auto& comp : components(std::move(clauses))) {
      int child = component(std::move(comp));
      if (store_.is_false(child)) return child;
      children.push_back(child);
    }
    return store_.make_and(children);
  }

 private:
  int component(std::vector<Clause> comp) {
    for (auto& c : comp) std::sort(c.begin(), c.end(), literal_less);
    std::sort(comp.begin(), comp.end(), [](const Clause& a, const Clause& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), literal_less);
    });
    std::vector<int> key;
    for (const auto& c : comp) {
      key.insert(key.end(), c.begin(), c.end());
      key.push_back(0);
    }
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++stats_.cache_hits;
      return it->second;
    }
    ++stats_.cache_misses;
    if (cache_.size() >= options_.cache_limit) {
      throw Error(ErrorKind::ResourceLimit, "compiler cache limit of " +
                                                std::to_string(options_.cache_limit) +
                                                " components exceeded");
    }

    // Most frequent variable, ties to the smallest id.
    std::map<int, int> count;
    for (const auto& c : comp) {
      for (int l : c) ++count[std::abs(l)];
    }
    int var = 0, best = -1;
    for (const auto& [v, n] : count) {
      if (n > best) {
        best = n;
        var = v;
      }
    }
    ++stats_.decisions;

    std::vector<int> branches;
    for (int lit : {var, -var}) {
      auto branch = comp;
      branch.push_back({lit});
      branches.push_back(formula(std::move(branch)));
    }
    int node = store_.make_or(var, branches);
    cache_.emplace(std::move(key), node);
    return node;
  }

  NodeStore& store_;
  const CompileOptions& options_;
  CompileStats& stats_;
  std::unordered_map<std::vector<int>, int, VectorHash> cache_;
};

// Phase of `var` fixed by node (through And children), or 0.
int fixed_phase(const DdnnfGraph& g, int id, int var) {
  const auto& n = g.nodes[static_cast<std::size_t>(id)];
  if (n.kind == DdnnfNode::Kind::Literal) {
    return std::abs(n.literal) == var ? (n.literal > 0 ? 1 : -1) : 0;
  }
  if (n.kind == DdnnfNode::Kind::And) {
    for (int c : n.children) {
      if (int p = fixed_phase(g, c, var)) return p;
    }
  }
  return 0;
}

}  // namespace

DdnnfGraph compile(int num_vars, const std::vector<std::vector<int>>& clauses,
                   const CompileOptions& options, CompileStats* stats) {
  CompileStats local;
  CompileStats& st = stats ? *stats : local;
  std::vector<Clause> normalized;
  for (const auto& c : clauses) {
    Clause out;
    bool tautology = false;
    for (int l : c) {
      if (l == 0 || std::abs(l) > num_vars) {
        throw Error(ErrorKind::Semantic, "clause literal " + std::to_string(l) + " out of range");
      }
      if (std::find(out.begin(), out.end(), -l) != out.end()) tautology = true;
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    if (!tautology) normalized.push_back(std::move(out));
  }
  NodeStore store;
  Compiler compiler(store, options, st);
  int root = compiler.formula(std::move(normalized));
  return std::move(store).finish(root, num_vars);
}

DdnnfGraph compile(const WeightedCNF& f, const CompileOptions& options, CompileStats* stats) {
  return compile(f.num_vars, f.clauses, options, stats);
}

DdnnfGraph smooth(const DdnnfGraph& g, const std::vector<int>& all_vars) {
  auto vs = g.var_sets();
  NodeStore store;
  std::unordered_map<int, int> gadgets;
  auto gadget = [&](int v) {
    auto it = gadgets.find(v);
    if (it != gadgets.end()) return it->second;
    int id = store.make_or(v, {store.literal(v), store.literal(-v)});
    gadgets.emplace(v, id);
    return id;
  };
  auto pad = [&](int node, const std::vector<int>& have, const std::vector<int>& want) {
    std::vector<int> missing;
    std::set_difference(want.begin(), want.end(), have.begin(), have.end(),
                        std::back_inserter(missing));
    if (missing.empty()) return node;
    std::vector<int> children{node};
    for (int v : missing) children.push_back(gadget(v));
    return store.make_and(children);
  };

  std::vector<int> mapped(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    switch (n.kind) {
      case DdnnfNode::Kind::Literal:
        mapped[i] = store.literal(n.literal);
        break;
      case DdnnfNode::Kind::And: {
        std::vector<int> children;
        for (int c : n.children) children.push_back(mapped[static_cast<std::size_t>(c)]);
        mapped[i] = store.make_and(children);
        break;
      }
      case DdnnfNode::Kind::Or: {
        std::vector<int> children;
        for (int c : n.children) {
          auto ci = static_cast<std::size_t>(c);
          children.push_back(pad(mapped[ci], vs[ci], vs[i]));
        }
        mapped[i] = store.make_or(n.decision, children);
        break;
      }
    }
  }
  auto r = static_cast<std::size_t>(g.root);
  int root = mapped[r];
  if (!store.is_false(root)) {
    std::vector<int> want = all_vars;
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    root = pad(root, vs[r], want);
  }
  return std::move(store).finish(root, g.num_vars);
}

DdnnfGraph smooth(const DdnnfGraph& g) {
  std::vector<int> all(static_cast<std::size_t>(g.num_vars));
  std::iota(all.begin(), all.end(), 1);
  return smooth(g, all);
}

bool is_decomposable(const DdnnfGraph& g) {
  auto vs = g.var_sets();
  for (const auto& n : g.nodes) {
    if (n.kind != DdnnfNode::Kind::And) continue;
    std::size_t total = 0;
    for (int c : n.children) total += vs[static_cast<std::size_t>(c)].size();
    std::vector<int> all;
    for (int c : n.children) {
      const auto& s = vs[static_cast<std::size_t>(c)];
      all.insert(all.end(), s.begin(), s.end());
    }
    std::sort(all.begin(), all.end());
    if (std::unique(all.begin(), all.end()) - all.begin() != static_cast<std::ptrdiff_t>(total)) {
      return false;
    }
  }
  return true;
}

bool is_deterministic(const DdnnfGraph& g) {
  for (const auto& n : g.nodes) {
    if (n.kind != DdnnfNode::Kind::Or || n.children.empty()) continue;
    if (n.children.size() > 2 || n.decision == 0) return false;
    std::vector<int> phases;
    for (int c : n.children) {
      int p = fixed_phase(g, c, n.decision);
      if (p == 0) return false;
      phases.push_back(p);
    }
    if (phases.size() == 2 && phases[0] == phases[1]) return false;
  }
  return true;
}

bool is_smooth(const DdnnfGraph& g) {
  auto vs = g.var_sets();
  for (const auto& n : g.nodes) {
    if (n.kind != DdnnfNode::Kind::Or) continue;
    for (int c : n.children) {
      if (vs[static_cast<std::size_t>(c)] != vs[static_cast<std::size_t>(n.children.front())]) {
        return false;
      }
    }
  }
  return true;
}

bool satisfied_by(const DdnnfGraph& g, const std::vector<bool>& assignment) {
  std::vector<bool> value(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    switch (n.kind) {
      case DdnnfNode::Kind::Literal:
        value[i] = assignment[static_cast<std::size_t>(std::abs(n.literal))] == (n.literal > 0);
        break;
      case DdnnfNode::Kind::And:
        value[i] = std::all_of(n.children.begin(), n.children.end(),
                               [&](int c) { return value[static_cast<std::size_t>(c)]; });
        break;
      case DdnnfNode::Kind::Or:
        value[i] = std::any_of(n.children.begin(), n.children.end(),
                               [&](int c) { return value[static_cast<std::size_t>(c)]; });
        break;
    }
  }
  return value[static_cast<std::size_t>(g.root)];
}

std::string export_nnf(const DdnnfGraph& g) {
  // Emit only nodes reachable from the root, renumbered densely.
  std::vector<bool> live(g.nodes.size(), false);
  live[static_cast<std::size_t>(g.root)] = true;
  for (std::size_t i = g.nodes.size(); i-- > 0;) {
    if (!live[i]) continue;
    for (int c : g.nodes[i].children) live[static_cast<std::size_t>(c)] = true;
  }
  std::vector<int> id(g.nodes.size(), -1);
  int next = 0;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!live[i]) continue;
    id[i] = next++;
    edges += g.nodes[i].children.size();
  }
  std::ostringstream out;
  out << "nnf " << next << ' ' << edges << ' ' << g.num_vars << '\n';
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!live[i]) continue;
    const auto& n = g.nodes[i];
    if (n.kind == DdnnfNode::Kind::Literal) {
      out << "L " << n.literal << '\n';
      continue;
    }
    if (n.kind == DdnnfNode::Kind::And) {
      out << "A " << n.children.size();
    } else {
      out << "O " << n.decision << ' ' << n.children.size();
    }
    for (int c : n.children) out << ' ' << id[static_cast<std::size_t>(c)];
    out << '\n';
  }
  return out.str();
}

DdnnfGraph import_nnf(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag;
  std::size_t nodes = 0, edges = 0;
  DdnnfGraph g;
  if (!(in >> tag >> nodes >> edges >> g.num_vars) || tag != "nnf") {
    throw Error(ErrorKind::Semantic, "nnf: malformed header");
  }
  for (std::size_t i = 0; i < nodes; ++i) {
    DdnnfNode n{DdnnfNode::Kind::And, 0, 0, {}};
    if (!(in >> tag)) throw Error(ErrorKind::Semantic, "nnf: truncated file");
    if (tag == "L") {
      n.kind = DdnnfNode::Kind::Literal;
      in >> n.literal;
    } else {
      std::size_t k = 0;
      if (tag == "O") {
        n.kind = DdnnfNode::Kind::Or;
        in >> n.decision;
      } else if (tag != "A") {
        throw Error(ErrorKind::Semantic, "nnf: unknown node type " + tag);
      }
      in >> k;
      n.children.resize(k);
      for (auto& c : n.children) {
        in >> c;
        if (c < 0 || static_cast<std::size_t>(c) >= i) {
          throw Error(ErrorKind::Semantic, "nnf: child id out of order");
        }
      }
    }
    if (!in) throw Error(ErrorKind::Semantic, "nnf: malformed node line");
    g.nodes.push_back(std::move(n));
  }
  if (g.nodes.empty()) throw Error(ErrorKind::Semantic, "nnf: no nodes");
  g.root = static_cast<int>(g.nodes.size()) - 1;
  return g;
}

}  // namespace plp
