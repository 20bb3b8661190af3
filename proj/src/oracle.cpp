#include "plp/oracle.hpp"

#include <exception>

#include "plp/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plp {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace oracle {

namespace {

// Least model of the program where \+b holds iff b is not in `assumed`.
class Reduct {
 public:
  Reduct(const std::vector<GroundRule>& rules, std::size_t num_atoms)
      : rules_(rules), watchers_(num_atoms) {
    for (std::size_t r = 0; r < rules.size(); ++r) {
      for (const auto& l : rules[r].body) {
        if (l.positive) watchers_[static_cast<std::size_t>(l.atom)].push_back(r);
      }
    }
  }

  std::vector<bool> least_model(const std::vector<bool>& facts, const std::vector<bool>& assumed) {
    std::vector<bool> model = facts;
    std::vector<int> missing(rules_.size());
    std::vector<AtomId> queue;
    for (std::size_t a = 0; a < facts.size(); ++a) {
      if (facts[a]) queue.push_back(static_cast<AtomId>(a));
    }
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      int count = 0;
      bool blocked = false;
      for (const auto& l : rules_[r].body) {
        if (l.positive) {
          ++count;
        } else if (assumed[static_cast<std::size_t>(l.atom)]) {
          blocked = true;
        }
      }
      missing[r] = blocked ? -1 : count;
      if (count == 0 && !blocked) derive(rules_[r].head, model, queue);
    }
    while (!queue.empty()) {
      AtomId a = queue.back();
      queue.pop_back();
      for (std::size_t r : watchers_[static_cast<std::size_t>(a)]) {
        if (missing[r] > 0 && --missing[r] == 0) derive(rules_[r].head, model, queue);
      }
    }
    return model;
  }

 private:
  static void derive(AtomId head, std::vector<bool>& model, std::vector<AtomId>& queue) {
    if (!model[static_cast<std::size_t>(head)]) {
      model[static_cast<std::size_t>(head)] = true;
      queue.push_back(head);
    }
  }

  const std::vector<GroundRule>& rules_;
  std::vector<std::vector<std::size_t>> watchers_;
};

// Returns the (true, possibly-true) pair of the well-founded model.
std::pair<std::vector<bool>, std::vector<bool>> alternating_fixpoint(
    Reduct& reduct, const std::vector<bool>& facts) {
  std::vector<bool> lower(facts.size(), false);
  std::vector<bool> upper = reduct.least_model(facts, lower);
  while (true) {
    auto next_lower = reduct.least_model(facts, upper);
    auto next_upper = reduct.least_model(facts, next_lower);
    bool done = next_lower == lower && next_upper == upper;
    lower = std::move(next_lower);
    upper = std::move(next_upper);
    if (done) break;
  }
  return {std::move(lower), std::move(upper)};
}

std::vector<bool> choice_of_row(std::size_t row, std::size_t n) {
  std::vector<bool> choice(n);
  for (std::size_t i = 0; i < n; ++i) choice[i] = ((row >> (n - 1 - i)) & 1U) == 0;
  return choice;
}

struct Evaluator {
  const GroundProgram& g;
  Reduct reduct;

  explicit Evaluator(const GroundProgram& program)
      : g(program), reduct(program.rules, program.atoms.size()) {}

  Row row(std::size_t index) {
    Row out;
    out.choice = choice_of_row(index, g.facts.size());
    out.probability = 1.0;
    std::vector<bool> chosen(g.atoms.size(), false);
    for (std::size_t i = 0; i < g.facts.size(); ++i) {
      double p = g.facts[i].probability;
      out.probability *= out.choice[i] ? p : 1.0 - p;
      chosen[static_cast<std::size_t>(g.facts[i].atom)] = out.choice[i];
    }
    auto [lower, upper] = alternating_fixpoint(reduct, chosen);
    for (std::size_t a = 0; a < lower.size(); ++a) {
      if (lower[a] != upper[a]) {
        throw Error(ErrorKind::Unsound, "program is not sound: total choice " +
                                            std::to_string(index) + " leaves " +
                                            g.atoms.name(static_cast<AtomId>(a)) + " undefined");
      }
    }
    out.world = std::move(lower);
    return out;
  }
};

void check_size(const GroundProgram& g) {
  for (const auto& f : g.facts) {
    if (f.probability != f.probability) {
      throw Error(ErrorKind::Semantic,
                  "oracle needs numeric probabilities; " + g.atoms.name(f.atom) + " has none");
    }
  }
  if (g.facts.size() > kMaxFacts) {
    throw Error(ErrorKind::ResourceLimit, "oracle enumeration is capped at " +
                                              std::to_string(kMaxFacts) + " probabilistic facts, got " +
                                              std::to_string(g.facts.size()));
  }
}

constexpr std::size_t kBlock = 256;

// Runs fn(row, partial) over every row, one partial per block of consecutive
// rows. Blocks are independent; the caller folds them in index order.
template <class Partial, class Fn>
std::vector<Partial> over_rows(const GroundProgram& g, Execution exec, const Partial& init,
                               Fn&& fn) {
  check_size(g);
  const std::size_t rows = std::size_t{1} << g.facts.size();
  const std::size_t blocks = (rows + kBlock - 1) / kBlock;
  std::vector<Partial> partials(blocks, init);
  std::vector<std::exception_ptr> errors(blocks);

  auto run_block = [&](std::size_t b, Evaluator& ev) {
    try {
      const std::size_t end = std::min(rows, (b + 1) * kBlock);
      for (std::size_t r = b * kBlock; r < end; ++r) fn(r, ev.row(r), partials[b]);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };

  if (exec == Execution::Serial) {
    Evaluator ev(g);
    for (std::size_t b = 0; b < blocks; ++b) run_block(b, ev);
  } else {
#pragma omp parallel
    {
      Evaluator ev(g);
#pragma omp for schedule(dynamic)
      for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        run_block(static_cast<std::size_t>(b), ev);
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return partials;
}

struct EvidenceMask {
  std::vector<std::pair<std::size_t, bool>> literals;

  bool consistent(const std::vector<bool>& world) const {
    for (const auto& [atom, value] : literals) {
      if (world[atom] != value) return false;
    }
    return true;
  }
};

EvidenceMask evidence_mask(const GroundProgram& g, const PartialInterpretation& e) {
  EvidenceMask mask;
  for (const auto& [key, entry] : e) {
    auto id = g.atoms.find(key);
    if (!id) throw Error(ErrorKind::Semantic, "evidence atom " + key + " is not in the program");
    mask.literals.emplace_back(static_cast<std::size_t>(*id), entry.value);
  }
  return mask;
}

}  // namespace

WfmResult wfm(const std::vector<GroundRule>& rules, std::size_t num_atoms,
              const std::vector<bool>& true_facts) {
  Reduct reduct(rules, num_atoms);
  auto [lower, upper] = alternating_fixpoint(reduct, true_facts);
  WfmResult out;
  out.value.resize(num_atoms);
  for (std::size_t a = 0; a < num_atoms; ++a) {
    if (lower[a]) {
      out.value[a] = Truth::True;
    } else if (upper[a]) {
      out.value[a] = Truth::Undefined;
      out.undefined.push_back(static_cast<AtomId>(a));
    } else {
      out.value[a] = Truth::False;
    }
  }
  return out;
}

std::vector<Row> enumerate(const GroundProgram& g, Execution exec) {
  check_size(g);
  const std::size_t rows = std::size_t{1} << g.facts.size();
  std::vector<Row> out(rows);
  over_rows(g, exec, 0, [&](std::size_t r, Row row, int&) { out[r] = std::move(row); });
  return out;
}

double evid(const GroundProgram& g, const PartialInterpretation& e, Execution exec) {
  auto mask = evidence_mask(g, e);
  auto partials = over_rows(g, exec, 0.0, [&](std::size_t, const Row& row, double& acc) {
    if (mask.consistent(row.world)) acc += row.probability;
  });
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

std::map<std::string, double> marg(const GroundProgram& g, const std::vector<Atom>& queries,
                                   const PartialInterpretation& e, Execution exec) {
  auto mask = evidence_mask(g, e);
  std::vector<long> ids;
  for (const auto& q : queries) {
    auto id = g.atoms.find(q);
    ids.push_back(id ? *id : -1);
  }
  std::vector<double> init(queries.size() + 1, 0.0);
  auto partials = over_rows(g, exec, init, [&](std::size_t, const Row& row, std::vector<double>& acc) {
    if (!mask.consistent(row.world)) return;
    acc[0] += row.probability;
    for (std::size_t q = 0; q < ids.size(); ++q) {
      if (ids[q] >= 0 && row.world[static_cast<std::size_t>(ids[q])]) acc[q + 1] += row.probability;
    }
  });
  std::vector<double> total(init.size(), 0.0);
  for (const auto& p : partials) {
    for (std::size_t i = 0; i < p.size(); ++i) total[i] += p[i];
  }
  if (total[0] <= 0.0) throw Error(ErrorKind::ZeroProbability, "evidence has probability zero");
  std::map<std::string, double> out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    out[queries[q].to_string()] = total[q + 1] / total[0];
  }
  return out;
}

MpeWorld mpe(const GroundProgram& g, const PartialInterpretation& e, Execution exec) {
  auto mask = evidence_mask(g, e);
  struct Best {
    double probability = -1.0;
    std::size_t row = 0;
  };
  auto partials = over_rows(g, exec, Best{}, [&](std::size_t r, const Row& row, Best& best) {
    if (mask.consistent(row.world) && row.probability > best.probability) {
      best = {row.probability, r};
    }
  });
  Best best;
  for (const auto& p : partials) {
    if (p.probability > best.probability) best = p;
  }
  if (best.probability <= 0.0) throw Error(ErrorKind::ZeroProbability, "evidence has probability zero");
  Evaluator ev(g);
  return MpeWorld{ev.row(best.row), best.row};
}

}  // namespace oracle
}  // namespace plp
