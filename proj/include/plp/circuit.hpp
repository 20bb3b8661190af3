#pragma once

#include <cstddef>
#include <vector>

#include "plp/compiler.hpp"
#include "plp/logic2cnf.hpp"
#include "plp/parallel.hpp"

namespace plp {

struct AcNode {
  enum class Kind : unsigned char { Sum, Product, Weight, Indicator };

  Kind kind;
  int literal = 0;  // Weight and Indicator leaves
  double weight = 0.0;
  std::vector<int> children;
};

/// Sum/product DAG in topological order. Every literal leaf l of the source
/// graph became Product(Indicator(l), Weight(l)).
struct ArithmeticCircuit {
  std::vector<AcNode> nodes;
  int root = 0;
  int num_vars = 0;
  /// Node id of the indicator (resp. weight) leaf per literal, -1 if absent.
  std::vector<int> indicator_pos, indicator_neg;
  std::vector<int> weight_pos, weight_neg;

  int indicator_of(int lit) const;
  bool mentions(int var) const;
  /// Overwrites every weight leaf; structure is unchanged.
  void set_weights(const LiteralWeights& w);
};

/// Throws Error(Semantic) when a literal of g has no (or a NaN) weight.
ArithmeticCircuit to_arithmetic_circuit(const DdnnfGraph& g, const LiteralWeights& w);

/// lambda values per literal, 1 unless set.
class IndicatorAssignment {
 public:
  explicit IndicatorAssignment(int num_vars = 0)
      : pos_(static_cast<std::size_t>(num_vars) + 1, 1.0),
        neg_(static_cast<std::size_t>(num_vars) + 1, 1.0) {}

  double operator()(int lit) const {
    return lit > 0 ? pos_[static_cast<std::size_t>(lit)] : neg_[static_cast<std::size_t>(-lit)];
  }
  void set(int lit, double value);
  /// lambda[lit] = 1, lambda[-lit] = 0.
  void assert_literal(int lit) {
    set(lit, 1.0);
    set(-lit, 0.0);
  }
  int num_vars() const { return static_cast<int>(pos_.size()) - 1; }

 private:
  std::vector<double> pos_, neg_;
};

double evaluate(const ArithmeticCircuit& ac, const IndicatorAssignment& ind);
double evaluate(const ArithmeticCircuit& ac);
/// Natural log of evaluate(), computed with log-sum-exp at Sum nodes.
double evaluate_log(const ArithmeticCircuit& ac, const IndicatorAssignment& ind);

struct Marginals {
  double total = 0.0;
  /// Per variable: value of the circuit restricted to v (resp. -v), that is
  /// P(v and evidence). Entries for variables without leaves are 0 and
  /// `present` is false.
  std::vector<double> pos, neg;
  std::vector<bool> present;
};

/// Upward evaluation followed by a downward pass of partial derivatives.
Marginals all_marginals(const ArithmeticCircuit& ac, const IndicatorAssignment& ind);
Marginals all_marginals(const ArithmeticCircuit& ac);

struct MpeResult {
  /// Per variable: +1 true, -1 false, 0 not mentioned by the circuit.
  std::vector<signed char> assignment;
  double probability = 0.0;
};

/// Max-product pass and trace. Ties go to the child with the lowest node id.
/// Throws Error(ZeroProbability) when the circuit evaluates to 0.
MpeResult mpe(const ArithmeticCircuit& ac, const IndicatorAssignment& ind);
MpeResult mpe(const ArithmeticCircuit& ac);

/// One evaluation per indicator assignment.
std::vector<double> evaluate_batch(const ArithmeticCircuit& ac,
                                   const std::vector<IndicatorAssignment>& inds,
                                   Execution exec = Execution::Parallel);

}  // namespace plp
