#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "plp/logic2cnf.hpp"

namespace plp {

struct DdnnfNode {
  enum class Kind : unsigned char { Literal, And, Or };

  Kind kind;
  int literal = 0;   // Literal nodes
  int decision = 0;  // Or nodes: the variable the children disagree on, 0 if none
  std::vector<int> children;

  friend bool operator==(const DdnnfNode&, const DdnnfNode&) = default;
};

/// Rooted DAG in topological order (children precede parents). The empty And
/// is true, the empty Or is false.
struct DdnnfGraph {
  std::vector<DdnnfNode> nodes;
  int root = 0;
  int num_vars = 0;

  bool is_false() const;
  std::size_t num_edges() const;
  /// Sorted variables mentioned below each node.
  std::vector<std::vector<int>> var_sets() const;
};

struct CompileOptions {
  /// Maximum number of cached components before compilation gives up.
  std::size_t cache_limit = std::size_t{1} << 22;
};

struct CompileStats {
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
  std::size_t decisions = 0;
};

/// Exhaustive DPLL search with unit propagation, connected-component
/// decomposition and component caching. The result is decomposable and
/// deterministic but not smooth. An unsatisfiable formula compiles to the
/// false node.
DdnnfGraph compile(const WeightedCNF& f, const CompileOptions& options = {},
                   CompileStats* stats = nullptr);
DdnnfGraph compile(int num_vars, const std::vector<std::vector<int>>& clauses,
                   const CompileOptions& options = {}, CompileStats* stats = nullptr);

/// Pads Or children with (v or -v) gadgets until every child mentions the
/// same variables, and pads the root to mention all of `all_vars`.
DdnnfGraph smooth(const DdnnfGraph& g, const std::vector<int>& all_vars);
/// Smooths over 1..g.num_vars.
DdnnfGraph smooth(const DdnnfGraph& g);

bool is_decomposable(const DdnnfGraph& g);
/// Structural determinism: each Or child fixes its decision variable to a
/// different phase.
bool is_deterministic(const DdnnfGraph& g);
bool is_smooth(const DdnnfGraph& g);

/// Evaluates the graph as a Boolean function; assignment is indexed by var.
bool satisfied_by(const DdnnfGraph& g, const std::vector<bool>& assignment);

/// c2d-style text: "nnf N E V", then "L lit", "A k ids..." and
/// "O decision k ids..." lines in topological order.
std::string export_nnf(const DdnnfGraph& g);
DdnnfGraph import_nnf(std::string_view text);

}  // namespace plp
