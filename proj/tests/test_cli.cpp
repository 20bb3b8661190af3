#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "plp/cli.hpp"
#include "plp/learner.hpp"
#include "plp/parser.hpp"
#include "programs.hpp"

using namespace plp;
namespace fs = std::filesystem;

namespace {

const std::string kData = PLP_TEST_DATA;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return kData + "/" + name; }

// Alarm, calls(john) observed, query burglary.
std::vector<std::string> alarm(std::string task, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{std::move(task), "--program", data("alarm.pl"), "--evidence",
                                data("calls_john.pl"), "--query", data("burglary.pl")};
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::string scratch(const std::string& name, const std::string& content) {
  auto dir = fs::temp_directory_path() / "plp_cli_test";
  fs::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("evid prints the probability of the evidence") {
  auto r = run({"evid", "--program", data("alarm.pl"), "--evidence", data("calls_john.pl")});
  CHECK(r.code == 0);
  CHECK(r.out == "p_evidence\t0.196000000000\n");
}

TEST_CASE("marg with and without evidence") {
  auto r = run(alarm("marg"));
  CHECK(r.code == 0);
  CHECK(r.out == "burglary\t0.357142857143\n");
  auto q = scratch("q.pl", "query(burglary).\n");
  auto plain = run({"marg", "--program", data("alarm.pl"), "--query", q});
  CHECK(plain.out == "burglary\t0.100000000000\n");
}

TEST_CASE("json output carries the same numbers") {
  auto q = scratch("q2.pl", "query(burglary). query(calls(X)).\n");
  auto text = run({"marg", "--program", data("alarm.pl"), "--evidence", data("calls_john.pl"), "--query", q});
  auto js = run({"marg", "--program", data("alarm.pl"), "--evidence", data("calls_john.pl"), "--query", q,
                 "--format", "json"});
  REQUIRE(js.code == 0);
  auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["task"] == "marg");
  std::ostringstream rebuilt;
  for (const auto& row : doc["results"]) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.12g", row["p"].get<double>());
    rebuilt << row["atom"].get<std::string>() << '\t' << buf << '\n';
  }
  CHECK(rebuilt.str() == text.out);
  CHECK(doc["results"].size() == 3);
}

TEST_CASE("mpe lists the completed world") {
  auto r = run({"mpe", "--program", data("alarm.pl"), "--evidence", data("calls_john.pl"), "--oracle-check"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("p_mpe\t0.0882000000000\n", 0) == 0);
  CHECK(r.out.find("burglary\tfalse\n") != std::string::npos);
  CHECK(r.out.find("earthquake\ttrue\n") != std::string::npos);
  CHECK(r.out.find("calls(mary)\ttrue\n") != std::string::npos);
  CHECK(r.out.find("calls(john)") == std::string::npos);
}

TEST_CASE("oracle-check passes on agreement") {
  for (const char* task : {"evid", "marg", "mpe"}) {
    auto r = run(alarm(task, {"--oracle-check"}));
    CHECK(r.code == 0);
    CHECK(r.err.empty());
  }
}

TEST_CASE("oracle subcommand matches the engine") {
  auto engine = run(alarm("marg"));
  auto reference = run(alarm("oracle"));
  CHECK(engine.out == reference.out);
  auto evid = run({"oracle", "--task", "evid", "--program", data("alarm.pl"), "--evidence", data("calls_john.pl")});
  CHECK(evid.out == "p_evidence\t0.196000000000\n");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"evid"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"evid", "--program", data("missing.pl")}).code == 1);
  auto parse = run({"evid", "--program", data("broken.pl")});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("1:") != std::string::npos);
  CHECK(run({"marg", "--program", data("unsound.pl")}).code == 3);
  auto zero = scratch("zero.pl", "evidence(alarm,false). evidence(calls(john),true).\n");
  CHECK(run({"evid", "--program", data("alarm.pl"), "--evidence", zero}).code == 0);
  auto z = run({"marg", "--program", data("alarm.pl"), "--query", data("burglary.pl"), "--evidence", zero});
  CHECK(z.code == 4);
  CHECK(z.err.find("evidence(alarm,false)") != std::string::npos);
  CHECK(run({"marg", "--program", data("alarm.pl")}).code == 1);
}

TEST_CASE("cnf, compile and ground subcommands") {
  auto cnf = run(alarm("cnf"));
  CHECK(cnf.code == 0);
  CHECK(cnf.out.find("p cnf 5 ") != std::string::npos);
  auto mln = run(alarm("cnf", {"--mln"}));
  CHECK(mln.code == 0);
  auto nnf = run(alarm("compile"));
  CHECK(nnf.out.rfind("nnf ", 0) == 0);
  auto raw = run(alarm("compile", {"--no-smooth"}));
  CHECK(raw.out != nnf.out);
  auto ground = run(alarm("ground"));
  CHECK(ground.code == 0);
  CHECK(ground.out.find("calls(mary)") == std::string::npos);
}

TEST_CASE("sample, learn and kl end to end") {
  auto truth = scratch("truth.pl", testing::smokers(false));
  auto model = scratch("model.pl", testing::smokers(true));
  auto sampled = run({"sample", "--program", truth, "--count", "200", "--seed", "4", "--retain", "0.4"});
  REQUIRE(sampled.code == 0);
  auto dataset = scratch("data.txt", sampled.out);
  CHECK(parse_dataset(sampled.out).size() == 200);
  CHECK(run({"sample", "--program", truth, "--count", "200", "--seed", "4", "--retain", "0.4"}).out == sampled.out);

  auto learned = run({"learn", "--program", model, "--dataset", dataset, "--seed", "1", "--max-iters", "50"});
  REQUIRE(learned.code == 0);
  CHECK(learned.out.find("% ll 0 ") != std::string::npos);
  auto learned_path = scratch("learned.pl", learned.out);
  auto program = parse_program(learned.out);
  CHECK(program.num_parameters() == 0);

  auto kl = run({"kl", "--truth", truth, "--learned", learned_path});
  REQUIRE(kl.code == 0);
  double value = std::stod(kl.out);
  CHECK(value >= 0.0);
  CHECK(value < 1.0);
  CHECK(run({"kl", "--truth", truth, "--learned", truth}).out == "0.00000000000\n");
  CHECK(run({"kl", "--truth", truth}).code == 1);

  auto js = run({"learn", "--program", model, "--dataset", dataset, "--seed", "1", "--max-iters", "50",
                 "--format", "json"});
  auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["results"].size() == 4);
  CHECK(doc["meta"]["ll_trace"].size() >= 2);
}

TEST_CASE("oracle-check finds no difference on the corpus") {
  int checked = 0;
  for (const auto& c : testing::corpus(40, 7000)) {
    auto program = scratch("corpus.pl", pretty_print(c.program));
    auto evidence = scratch("corpus_e.pl", c.evidence.to_string());
    std::string queries;
    for (const auto& q : c.queries) queries += "query(" + q.to_string() + ").\n";
    auto query = scratch("corpus_q.pl", queries);
    auto evid = run({"evid", "--program", program, "--evidence", evidence, "--oracle-check"});
    CHECK(evid.code == 0);
    if (evid.out == "p_evidence\t0.00000000000\n") continue;
    for (const char* task : {"marg", "mpe"}) {
      auto r = run({task, "--program", program, "--evidence", evidence, "--query", query, "--oracle-check"});
      CHECK(r.code == 0);
      CHECK(r.err.empty());
    }
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("learn requires a dataset") {
  CHECK(run({"learn", "--program", data("alarm.pl")}).code == 1);
}
