#include "plp/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "plp/error.hpp"

namespace plp {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Leaf values under an indicator assignment; interior nodes are left at 0.
std::vector<double> leaf_values(const ArithmeticCircuit& ac, const IndicatorAssignment& ind) {
  std::vector<double> v(ac.nodes.size(), 0.0);
  for (std::size_t i = 0; i < ac.nodes.size(); ++i) {
    const auto& n = ac.nodes[i];
    if (n.kind == AcNode::Kind::Weight) {
      v[i] = n.weight;
    } else if (n.kind == AcNode::Kind::Indicator) {
      v[i] = std::abs(n.literal) <= ind.num_vars() ? ind(n.literal) : 1.0;
    }
  }
  return v;
}

std::vector<double> upward(const ArithmeticCircuit& ac, const IndicatorAssignment& ind) {
  auto v = leaf_values(ac, ind);
  for (std::size_t i = 0; i < ac.nodes.size(); ++i) {
    const auto& n = ac.nodes[i];
    if (n.kind == AcNode::Kind::Sum) {
      double s = 0.0;
      for (int c : n.children) s += v[idx(c)];
      v[i] = s;
    } else if (n.kind == AcNode::Kind::Product) {
      double p = 1.0;
      for (int c : n.children) p *= v[idx(c)];
      v[i] = p;
    }
  }
  return v;
}

}  // namespace

int ArithmeticCircuit::indicator_of(int lit) const {
  if (lit == 0 || std::abs(lit) > num_vars) return -1;
  return lit > 0 ? indicator_pos[idx(lit)] : indicator_neg[idx(-lit)];
}

bool ArithmeticCircuit::mentions(int var) const {
  return indicator_of(var) >= 0 || indicator_of(-var) >= 0;
}

void ArithmeticCircuit::set_weights(const LiteralWeights& w) {
  for (auto& n : nodes) {
    if (n.kind != AcNode::Kind::Weight) continue;
    double value = w(n.literal);
    if (std::isnan(value)) {
      throw Error(ErrorKind::Semantic, "no weight for literal " + std::to_string(n.literal));
    }
    n.weight = value;
  }
}

ArithmeticCircuit to_arithmetic_circuit(const DdnnfGraph& g, const LiteralWeights& w) {
  ArithmeticCircuit ac;
  ac.num_vars = g.num_vars;
  const std::size_t slots = idx(g.num_vars) + 1;
  ac.indicator_pos.assign(slots, -1);
  ac.indicator_neg.assign(slots, -1);
  ac.weight_pos.assign(slots, -1);
  ac.weight_neg.assign(slots, -1);
  std::vector<int> mapped(g.nodes.size());
  auto push = [&](AcNode n) {
    ac.nodes.push_back(std::move(n));
    return static_cast<int>(ac.nodes.size()) - 1;
  };
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    if (n.kind == DdnnfNode::Kind::Literal) {
      int lit = n.literal;
      auto var = idx(std::abs(lit));
      if (var >= w.pos.size() || var >= w.neg.size() || std::isnan(w(lit))) {
        throw Error(ErrorKind::Semantic, "no weight for literal " + std::to_string(lit));
      }
      int ind = push({AcNode::Kind::Indicator, lit, 0.0, {}});
      int wt = push({AcNode::Kind::Weight, lit, w(lit), {}});
      (lit > 0 ? ac.indicator_pos : ac.indicator_neg)[var] = ind;
      (lit > 0 ? ac.weight_pos : ac.weight_neg)[var] = wt;
      mapped[i] = push({AcNode::Kind::Product, 0, 0.0, {ind, wt}});
      continue;
    }
    AcNode out{n.kind == DdnnfNode::Kind::And ? AcNode::Kind::Product : AcNode::Kind::Sum, 0, 0.0,
               {}};
    for (int c : n.children) out.children.push_back(mapped[idx(c)]);
    mapped[i] = push(std::move(out));
  }
  ac.root = mapped[idx(g.root)];
  return ac;
}

void IndicatorAssignment::set(int lit, double value) {
  auto v = idx(std::abs(lit));
  if (lit == 0 || v >= pos_.size()) {
    throw Error(ErrorKind::Semantic, "indicator literal " + std::to_string(lit) + " out of range");
  }
  (lit > 0 ? pos_ : neg_)[v] = value;
}

double evaluate(const ArithmeticCircuit& ac, const IndicatorAssignment& ind) {
  return upward(ac, ind)[idx(ac.root)];
}

double evaluate(const ArithmeticCircuit& ac) {
  return evaluate(ac, IndicatorAssignment(ac.num_vars));
}

double evaluate_log(const ArithmeticCircuit& ac, const IndicatorAssignment& ind) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto lin = leaf_values(ac, ind);
  std::vector<double> v(ac.nodes.size(), kNegInf);
  for (std::size_t i = 0; i < ac.nodes.size(); ++i) {
    const auto& n = ac.nodes[i];
    switch (n.kind) {
      case AcNode::Kind::Weight:
      case AcNode::Kind::Indicator:
        v[i] = lin[i] > 0.0 ? std::log(lin[i]) : kNegInf;
        break;
      case AcNode::Kind::Product: {
        double s = 0.0;
        for (int c : n.children) s += v[idx(c)];
        v[i] = std::isnan(s) ? kNegInf : s;
        break;
      }
      case AcNode::Kind::Sum: {
        double m = kNegInf;
        for (int c : n.children) m = std::max(m, v[idx(c)]);
        if (m == kNegInf) break;
        double s = 0.0;
        for (int c : n.children) s += std::exp(v[idx(c)] - m);
        v[i] = m + std::log(s);
        break;
      }
    }
  }
  return v[idx(ac.root)];
}

Marginals all_marginals(const ArithmeticCircuit& ac, const IndicatorAssignment& ind) {
  auto value = upward(ac, ind);
  std::vector<double> d(ac.nodes.size(), 0.0);
  d[idx(ac.root)] = 1.0;
  std::vector<double> prefix;
  for (std::size_t i = ac.nodes.size(); i-- > 0;) {
    const auto& n = ac.nodes[i];
    if (d[i] == 0.0) continue;
    if (n.kind == AcNode::Kind::Sum) {
      for (int c : n.children) d[idx(c)] += d[i];
    } else if (n.kind == AcNode::Kind::Product) {
      // d(child) = d(node) * product of the siblings, without dividing.
      const std::size_t k = n.children.size();
      prefix.assign(k + 1, 1.0);
      for (std::size_t j = 0; j < k; ++j) prefix[j + 1] = prefix[j] * value[idx(n.children[j])];
      double suffix = 1.0;
      for (std::size_t j = k; j-- > 0;) {
        d[idx(n.children[j])] += d[i] * prefix[j] * suffix;
        suffix *= value[idx(n.children[j])];
      }
    }
  }
  Marginals m;
  m.total = value[idx(ac.root)];
  const std::size_t slots = idx(ac.num_vars) + 1;
  m.pos.assign(slots, 0.0);
  m.neg.assign(slots, 0.0);
  m.present.assign(slots, false);
  for (std::size_t v = 1; v < slots; ++v) {
    int ip = ac.indicator_pos[v], in = ac.indicator_neg[v];
    if (ip >= 0) m.pos[v] = d[idx(ip)] * value[idx(ip)];
    if (in >= 0) m.neg[v] = d[idx(in)] * value[idx(in)];
    m.present[v] = ip >= 0 || in >= 0;
  }
  return m;
}

Marginals all_marginals(const ArithmeticCircuit& ac) {
  return all_marginals(ac, IndicatorAssignment(ac.num_vars));
}

MpeResult mpe(const ArithmeticCircuit& ac, const IndicatorAssignment& ind) {
  auto v = leaf_values(ac, ind);
  std::vector<int> best(ac.nodes.size(), -1);
  for (std::size_t i = 0; i < ac.nodes.size(); ++i) {
    const auto& n = ac.nodes[i];
    if (n.kind == AcNode::Kind::Product) {
      double p = 1.0;
      for (int c : n.children) p *= v[idx(c)];
      v[i] = p;
    } else if (n.kind == AcNode::Kind::Sum) {
      double m = -1.0;
      for (int c : n.children) {
        double x = v[idx(c)];
        if (x > m || (x == m && c < best[i])) {
          m = x;
          best[i] = c;
        }
      }
      v[i] = std::max(m, 0.0);
    }
  }
  MpeResult out;
  out.probability = v[idx(ac.root)];
  if (!(out.probability > 0.0)) {
    throw Error(ErrorKind::ZeroProbability, "evidence has probability zero");
  }
  out.assignment.assign(idx(ac.num_vars) + 1, 0);
  std::vector<bool> seen(ac.nodes.size(), false);
  std::vector<int> stack{ac.root};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    if (seen[idx(i)]) continue;
    seen[idx(i)] = true;
    const auto& n = ac.nodes[idx(i)];
    switch (n.kind) {
      case AcNode::Kind::Sum:
        if (best[idx(i)] >= 0) stack.push_back(best[idx(i)]);
        break;
      case AcNode::Kind::Product:
        stack.insert(stack.end(), n.children.begin(), n.children.end());
        break;
      case AcNode::Kind::Indicator:
        out.assignment[idx(std::abs(n.literal))] = n.literal > 0 ? 1 : -1;
        break;
      case AcNode::Kind::Weight:
        break;
    }
  }
  return out;
}

MpeResult mpe(const ArithmeticCircuit& ac) { return mpe(ac, IndicatorAssignment(ac.num_vars)); }

std::vector<double> evaluate_batch(const ArithmeticCircuit& ac,
                                   const std::vector<IndicatorAssignment>& inds, Execution exec) {
  std::vector<double> out(inds.size());
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < inds.size(); ++i) out[i] = evaluate(ac, inds[i]);
    return out;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(inds.size()); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = evaluate(ac, inds[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace plp
