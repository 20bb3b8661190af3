#include "plp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "plp/compiler.hpp"
#include "plp/engine.hpp"
#include "plp/error.hpp"
#include "plp/learner.hpp"
#include "plp/logic2cnf.hpp"
#include "plp/metrics.hpp"
#include "plp/oracle.hpp"
#include "plp/parser.hpp"

namespace plp {

namespace {

using json = nlohmann::json;

constexpr double kOracleTolerance = 1e-9;

struct Options {
  std::string program, evidence, query, dataset, truth, learned;
  std::string format = "text";
  std::string task = "marg";
  std::uint64_t seed = 0;
  int max_iters = 100;
  double tol = 1e-6;
  int count = 1;
  double retain = 1.0;
  bool oracle_check = false;
  bool no_smooth = false;
  bool mln = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string real12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", x);
  return buf;
}

struct Inputs {
  Program program;
  PartialInterpretation evidence;
  std::vector<Atom> queries;
};

Inputs load(const Options& o) {
  if (o.program.empty()) throw Error(ErrorKind::Usage, "--program is required");
  Inputs in;
  in.program = parse_program(read_file(o.program));
  in.evidence = in.program.evidence;
  if (!o.evidence.empty()) {
    for (const auto& [key, entry] : parse_evidence(read_file(o.evidence))) {
      if (!in.evidence.assign(entry.atom, entry.value)) {
        throw Error(ErrorKind::Semantic, "conflicting evidence on " + key);
      }
    }
  }
  in.queries = in.program.queries;
  if (!o.query.empty()) {
    for (auto& q : parse_queries(read_file(o.query))) in.queries.push_back(std::move(q));
  }
  return in;
}

// One "name<TAB>value" line per result, or the JSON document.
void emit(std::ostream& out, const Options& o, const std::string& task,
          const std::vector<std::pair<std::string, double>>& results, json meta = json::object()) {
  if (o.format == "json") {
    json doc{{"task", task}, {"results", json::array()}, {"meta", std::move(meta)}};
    for (const auto& [name, p] : results) doc["results"].push_back({{"atom", name}, {"p", p}});
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [name, p] : results) out << name << '\t' << real12(p) << '\n';
}

bool close(double a, double b) { return std::abs(a - b) <= kOracleTolerance; }

void report_mismatch(std::ostream& err, const std::string& what, double engine, double reference) {
  err << "oracle mismatch: " << what << " engine " << real12(engine) << " oracle "
      << real12(reference) << '\n';
}

int cmd_ground(const Options& o, std::ostream& out) {
  auto in = load(o);
  out << dump(relevant_ground_program(in.program, in.queries, in.evidence));
  return 0;
}

WeightedCNF formula_of(const Inputs& in) {
  return assert_evidence(rules_to_formula(relevant_ground_program(in.program, in.queries, in.evidence)),
                         in.evidence);
}

int cmd_cnf(const Options& o, std::ostream& out) {
  auto cnf = formula_of(load(o));
  out << (o.mln ? export_mln(cnf) : export_dimacs(cnf));
  return 0;
}

int cmd_compile(const Options& o, std::ostream& out) {
  auto g = compile(formula_of(load(o)));
  out << export_nnf(o.no_smooth ? g : smooth(g));
  return 0;
}

int cmd_evid(const Options& o, std::ostream& out, std::ostream& err) {
  auto in = load(o);
  Engine engine(in.program);
  double p = engine.prob_evidence(in.evidence);
  const auto& cq = engine.compiled({}, in.evidence);
  emit(out, o, "evid", {{"p_evidence", p}},
       {{"circuit_nodes", cq.circuit.nodes.size()}, {"variables", cq.cnf.num_vars}});
  if (o.oracle_check) {
    double ref = oracle::evid(engine.full(), in.evidence);
    if (!close(p, ref)) {
      report_mismatch(err, "p_evidence", p, ref);
      return kOracleMismatchExit;
    }
  }
  return 0;
}

int cmd_marg(const Options& o, std::ostream& out, std::ostream& err) {
  auto in = load(o);
  if (in.queries.empty()) throw Error(ErrorKind::Usage, "marg needs at least one query");
  Engine engine(in.program);
  auto m = engine.marginals(in.queries, in.evidence);
  std::vector<std::pair<std::string, double>> rows(m.begin(), m.end());
  emit(out, o, "marg", rows, {{"queries", rows.size()}});
  if (o.oracle_check) {
    std::vector<Atom> ground;
    for (const auto& [key, p] : m) {
      auto id = engine.full().atoms.find(key);
      if (id) ground.push_back(engine.full().atoms.atom(*id));
    }
    auto ref = oracle::marg(engine.full(), ground, in.evidence);
    int code = 0;
    for (const auto& [key, p] : m) {
      double r = ref.count(key) ? ref.at(key) : 0.0;
      if (!close(p, r)) {
        report_mismatch(err, key, p, r);
        code = kOracleMismatchExit;
      }
    }
    return code;
  }
  return 0;
}

int cmd_mpe(const Options& o, std::ostream& out, std::ostream& err) {
  auto in = load(o);
  Engine engine(in.program);
  auto answer = engine.mpe(in.evidence);
  if (o.format == "json") {
    json doc{{"task", "mpe"}, {"results", json::array()}, {"meta", {{"p", answer.probability}}}};
    for (const auto& [key, entry] : answer.world) {
      doc["results"].push_back({{"atom", key}, {"p", entry.value ? 1.0 : 0.0}});
    }
    out << doc.dump(2) << '\n';
  } else {
    out << "p_mpe\t" << real12(answer.probability) << '\n';
    for (const auto& [key, entry] : answer.world) {
      out << key << '\t' << (entry.value ? "true" : "false") << '\n';
    }
  }
  if (o.oracle_check) {
    auto ref = oracle::mpe(engine.full(), in.evidence);
    if (!close(answer.probability, ref.row.probability)) {
      report_mismatch(err, "p_mpe", answer.probability, ref.row.probability);
      return kOracleMismatchExit;
    }
  }
  return 0;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  auto in = load(o);
  auto full = full_grounding(in.program);
  if (o.task == "evid") {
    emit(out, o, "oracle-evid", {{"p_evidence", oracle::evid(full, in.evidence)}});
  } else if (o.task == "mpe") {
    auto best = oracle::mpe(full, in.evidence);
    out << "p_mpe\t" << real12(best.row.probability) << '\n';
    for (std::size_t a = 0; a < full.atoms.size(); ++a) {
      const auto& name = full.atoms.name(static_cast<AtomId>(a));
      if (!in.evidence.contains(name)) {
        out << name << '\t' << (best.row.world[a] ? "true" : "false") << '\n';
      }
    }
  } else if (o.task == "marg") {
    std::vector<Atom> ground;
    for (const auto& q : in.queries) {
      if (q.is_ground()) {
        ground.push_back(q);
        continue;
      }
      for (std::size_t a = 0; a < full.atoms.size(); ++a) {
        const auto& atom = full.atoms.atom(static_cast<AtomId>(a));
        if (instance_of(atom, q)) ground.push_back(atom);
      }
    }
    auto m = oracle::marg(full, ground, in.evidence);
    emit(out, o, "oracle-marg", {m.begin(), m.end()});
  } else {
    throw Error(ErrorKind::Usage, "unknown oracle task " + o.task);
  }
  return 0;
}

int cmd_learn(const Options& o, std::ostream& out) {
  auto in = load(o);
  if (o.dataset.empty()) throw Error(ErrorKind::Usage, "learn needs --dataset");
  auto data = parse_dataset(read_file(o.dataset));
  EmOptions em;
  em.seed = o.seed;
  em.max_iters = o.max_iters;
  em.tolerance = o.tol;
  auto result = learn_em(in.program, data, em);
  Program learned = with_params(in.program, result.params);
  if (o.format == "json") {
    json doc{{"task", "learn"}, {"results", json::array()}};
    for (std::size_t s = 0; s < learned.prob_facts.size(); ++s) {
      if (!result.params.learnable[s]) continue;
      doc["results"].push_back({{"atom", learned.prob_facts[s].atom.to_string()},
                                {"p", result.params.p[s]},
                                {"estimated", static_cast<bool>(result.params.estimated[s])}});
    }
    doc["meta"] = {{"ll_trace", result.ll_trace},
                   {"iterations", result.iterations},
                   {"converged", result.converged}};
    out << doc.dump(2) << '\n';
    return 0;
  }
  out << pretty_print(learned);
  for (std::size_t i = 0; i < result.ll_trace.size(); ++i) {
    out << "% ll " << i << ' ' << real12(result.ll_trace[i]) << '\n';
  }
  for (std::size_t s = 0; s < learned.prob_facts.size(); ++s) {
    if (result.params.learnable[s] && !result.params.estimated[s]) {
      out << "% unestimated " << learned.prob_facts[s].atom.to_string() << '\n';
    }
  }
  return 0;
}

int cmd_sample(const Options& o, std::ostream& out) {
  auto in = load(o);
  if (o.count < 0) throw Error(ErrorKind::Usage, "--count must be non-negative");
  if (o.retain < 0.0 || o.retain > 1.0) throw Error(ErrorKind::Usage, "--retain must be in [0,1]");
  auto full = full_grounding(in.program);
  std::mt19937_64 rng(o.seed);
  Dataset data;
  for (int m = 0; m < o.count; ++m) {
    auto world = sample_world(full, rng());
    data.push_back(o.retain < 1.0 ? retain_fraction(world, o.retain, rng()) : world);
  }
  out << format_dataset(data);
  return 0;
}

int cmd_kl(const Options& o, std::ostream& out) {
  if (o.truth.empty() || o.learned.empty()) {
    throw Error(ErrorKind::Usage, "kl needs --truth and --learned");
  }
  Program truth = parse_program(read_file(o.truth));
  Program learned = parse_program(read_file(o.learned));
  double kl = kl_divergence(params_of(truth), params_of(learned), instance_counts(truth));
  if (o.format == "json") {
    emit(out, o, "kl", {{"kl", kl}});
  } else {
    out << real12(kl) << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic logic programs: grounding, compilation, inference, learning"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--program", o.program, "Program file");
    sub->add_option("--evidence", o.evidence, "Evidence file");
    sub->add_option("--query", o.query, "Query file");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--max-iters", o.max_iters, "EM iteration cap");
    sub->add_option("--tol", o.tol, "EM log-likelihood tolerance");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--oracle-check", o.oracle_check, "Recompute with the brute-force oracle");
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"ground", "Print the relevant ground program"},
           {"cnf", "Print the weighted CNF"},
           {"compile", "Print the compiled d-DNNF"},
           {"evid", "Probability of the evidence"},
           {"marg", "Marginals of the queries given the evidence"},
           {"mpe", "Most probable world given the evidence"},
           {"learn", "Learn fact probabilities from a dataset"},
           {"sample", "Sample a dataset from the program"},
           {"kl", "KL divergence between two parameterizations"},
           {"oracle", "Reference answers by enumeration"}}) {
    subs[name] = app.add_subcommand(name, help);
    add_common(subs[name]);
  }
  subs["cnf"]->add_flag("--mln", o.mln, "Emit the ground Markov logic network instead");
  subs["compile"]->add_flag("--no-smooth", o.no_smooth, "Skip smoothing");
  subs["learn"]->add_option("--dataset", o.dataset, "Dataset file")->required();
  subs["sample"]->add_option("--count", o.count, "Number of examples");
  subs["sample"]->add_option("--retain", o.retain, "Fraction of atoms kept per example");
  subs["kl"]->add_option("--truth", o.truth, "Program with the true probabilities");
  subs["kl"]->add_option("--learned", o.learned, "Program with the learned probabilities");
  subs["oracle"]
      ->add_option("--task", o.task, "evid, marg or mpe")
      ->check(CLI::IsMember({"evid", "marg", "mpe"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Usage);
  }

  try {
    if (subs["ground"]->parsed()) return cmd_ground(o, out);
    if (subs["cnf"]->parsed()) return cmd_cnf(o, out);
    if (subs["compile"]->parsed()) return cmd_compile(o, out);
    if (subs["evid"]->parsed()) return cmd_evid(o, out, err);
    if (subs["marg"]->parsed()) return cmd_marg(o, out, err);
    if (subs["mpe"]->parsed()) return cmd_mpe(o, out, err);
    if (subs["learn"]->parsed()) return cmd_learn(o, out);
    if (subs["sample"]->parsed()) return cmd_sample(o, out);
    if (subs["kl"]->parsed()) return cmd_kl(o, out);
    if (subs["oracle"]->parsed()) return cmd_oracle(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  }
  return static_cast<int>(ErrorKind::Usage);
}

}  // namespace plp
