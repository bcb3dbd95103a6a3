#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include <nlohmann/json.hpp>

#include "pantslab/cli.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = pantslab::cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/" + name;
  std::ofstream f(path);
  f << body;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("qseq lists the frontier complexity") {
  const auto grid = run({"qseq", "--family", "grid", "--n", "5"});
  CHECK(grid.code == 0);
  CHECK(grid.out == "4,8,12,16,20\n");
  const auto cantor = run({"qseq", "--family", "cantor", "--n", "5"});
  CHECK(cantor.code == 0);
  CHECK(cantor.out == "4,8,16,32,64\n");
  const auto csv = run({"qseq", "--family", "grid", "--n", "3", "--format",
                        "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out == "n,q\n1,4\n2,8\n3,12\n");
  const auto j = run({"qseq", "--family", "grid", "--n", "5", "--format",
                      "json"});
  CHECK(j.code == 0);
  const json parsed = json::parse(j.out);
  CHECK(parsed["family"] == "grid_z2_cover");
  CHECK(parsed["q"] == json::array({4, 8, 12, 16, 20}));
  CHECK(run({"qseq", "--family", "grid"}).code == 2);
}

TEST_CASE("classify emits validated verdicts") {
  const auto decay =
      run({"classify", "--family", "cantor", "--rule", "linear_over_exp"});
  CHECK(decay.code == 0);
  const json j = json::parse(decay.out);
  CHECK(j["kind"] == "Parabolic");
  CHECK(j["rule"] == "cuff-decay");
  CHECK(j["evidence"].is_object());

  const auto text = run({"classify", "--family", "cantor", "--rule",
                         "power_over_exp", "--r", "3", "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("kind: NonParabolic") != std::string::npos);
  CHECK(text.out.find("rule: slow-decay") != std::string::npos);

  CHECK(run({"classify", "--family", "cantor", "--format", "csv"}).code == 2);
  CHECK(run({"classify", "--family", "cantor", "--depth", "5"}).code == 2);
  CHECK(run({"classify", "--family", "cantor", "--rule", "power_over_exp"})
            .code == 2);
  CHECK(run({"classify", "--family", "klein"}).code == 2);
  CHECK(run({"classify"}).code == 2);  // no family and no spec
}

TEST_CASE("classify strict equality flag") {
  const auto loose = run({"classify", "--family", "cantor", "--rule",
                          "constant", "--c", "2"});
  CHECK(json::parse(loose.out)["rule"] == "slow-decay");
  const auto strict = run({"classify", "--family", "cantor", "--rule",
                           "constant", "--c", "2", "--strict-equality"});
  CHECK(json::parse(strict.out)["rule"] == "thick-cuffs");
}

TEST_CASE("energy series output modes") {
  const auto csv = run({"energy", "--r", "3", "--n", "50"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("n,term,partial_sum,tail_bound\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv.out) lines += ch == '\n';
  CHECK(lines == 50);  // header + levels 2..50

  const auto text = run({"energy", "--r", "1.5", "--n", "100", "--format",
                         "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("verdict: diverges") != std::string::npos);
  CHECK(text.out.find("witness_n: 54") != std::string::npos);

  const auto exact = run({"energy", "--r", "3", "--n", "55", "--mode",
                          "exact", "--format", "json"});
  CHECK(exact.code == 0);
  const json j = json::parse(exact.out);
  CHECK(j["mode"] == "exact");
  CHECK(j["first_admissible"].get<int>() == 9);
  CHECK(j["tail_empirical"] == true);

  CHECK(run({"energy", "--n", "50"}).code == 2);
  CHECK(run({"energy", "--r", "3", "--mode", "magic"}).code == 2);
  CHECK(run({"energy", "--r", "-1"}).code == 2);
}

TEST_CASE("trig solves the hexagon") {
  const auto text = run({"trig", "--l-in", "2", "--l-out", "1"});
  CHECK(text.code == 0);
  CHECK(text.out.find("o12 = 2.2254196317613575") != std::string::npos);
  CHECK(text.out.find("collar connecting modulus = ") != std::string::npos);
  const auto j = run({"trig", "--l-in", "2", "--l-out", "1", "--format",
                      "json"});
  CHECK(j.code == 0);
  const json parsed = json::parse(j.out);
  CHECK(parsed["o12"].get<double>() ==
        doctest::Approx(2.2254196317613576).epsilon(1e-14));
  CHECK(parsed["gap"].get<double>() ==
        doctest::Approx(1.1127098158806788).epsilon(1e-14));
  CHECK(parsed["max_residual"].get<double>() < 1e-10);
  CHECK(parsed.contains("collar_annulus_modulus"));
  CHECK(run({"trig", "--l-in", "2"}).code == 2);
  CHECK(run({"trig", "--l-in", "200", "--l-out", "1"}).code == 2);
}

TEST_CASE("series analyzes complexity reciprocals") {
  const auto j = run({"series", "--family", "grid", "--depth", "20"});
  CHECK(j.code == 0);
  const json parsed = json::parse(j.out);
  CHECK(parsed["verdict"] == "divergent");
  CHECK(parsed["certificate"]["side"] == "lower");
  const auto text = run({"series", "--family", "cantor", "--depth", "20",
                         "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("verdict: convergent") != std::string::npos);
  CHECK(text.out.find("certificate: ") != std::string::npos);
  const auto csv = run({"series", "--family", "ladder", "--depth", "15",
                        "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("n,term,partial_sum\n", 0) == 0);
  CHECK(run({"series", "--family", "grid", "--depth", "5"}).code == 2);
}

TEST_CASE("extremal calculators") {
  const double r2 = std::exp(2.0 * std::acos(-1.0));
  std::ostringstream r2s;
  r2s.precision(17);
  r2s << r2;
  const auto ann = run({"extremal", "--x1", "1", "--x2", r2s.str(),
                        "--format", "json"});
  CHECK(ann.code == 0);
  CHECK(json::parse(ann.out)["annulus_modulus"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto text = run({"extremal", "--x1", "1", "--x2", "2"});
  CHECK(text.code == 0);
  CHECK(text.out.rfind("annulus_modulus = ", 0) == 0);
  const auto ker = run({"extremal", "--pairs",
                        "1:7.3890560989306495,2:2", "--format", "json"});
  CHECK(ker.code == 0);
  CHECK(json::parse(ker.out)["kerckhoff_lower_bound"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(run({"extremal"}).code == 2);
  CHECK(run({"extremal", "--pairs", "1;2"}).code == 2);
  CHECK(run({"extremal", "--x1", "2", "--x2", "1"}).code == 2);
}

TEST_CASE("probe runs the walk") {
  const auto csv = run({"probe", "--family", "ladder", "--steps", "200",
                        "--trials", "30", "--seed", "1", "--format", "csv"});
  CHECK(csv.code == 0);
  std::size_t lines = 0;
  for (char ch : csv.out) lines += ch == '\n';
  CHECK(lines == 31);
  const auto j = run({"probe", "--family", "ladder", "--steps", "200",
                      "--trials", "30", "--seed", "1"});
  CHECK(j.code == 0);
  const json parsed = json::parse(j.out);
  CHECK(parsed["note"] == "heuristic");
  CHECK(parsed["return_fraction"].get<double>() > 0.0);
  const auto text = run({"probe", "--family", "ladder", "--steps", "100",
                         "--trials", "10", "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("heuristic") != std::string::npos);
  CHECK(run({"probe", "--family", "ladder", "--steps", "0"}).code == 2);
}

TEST_CASE("spec files feed every verb") {
  const auto path = write_temp(
      "pantslab_cli_grid.json",
      R"({"family": "grid", "rule": {"kind": "constant", "c": 1.0}})");
  const auto v = run({"classify", "--spec", path});
  CHECK(v.code == 0);
  CHECK(json::parse(v.out)["rule"] == "divergent-complexity");
  const auto q = run({"qseq", "--spec", path, "--n", "3"});
  CHECK(q.out == "4,8,12\n");
  std::remove(path.c_str());
  CHECK(run({"classify", "--spec", "/tmp/pantslab_cli_gone.json"}).code == 2);
}

TEST_CASE("resource exhaustion maps to exit 1") {
  const auto path = write_temp("pantslab_cli_z2.json", R"({
    "family": "custom",
    "rule": {"kind": "constant", "c": 1.0},
    "graph": {"node_count": 1, "dim": 2, "base_node": 0,
              "edges": [{"from": 0, "to": 0, "shift": [1, 0]},
                        {"from": 0, "to": 0, "shift": [0, 1]}]}
  })");
  const auto r = run({"qseq", "--spec", path, "--n", "1500"});
  CHECK(r.code == 1);
  CHECK(r.err.find("resource error") != std::string::npos);
  // Small depths stay healthy on the same spec.
  const auto ok = run({"qseq", "--spec", path, "--n", "4"});
  CHECK(ok.code == 0);
  CHECK(ok.out == "4,12,20,28\n");
  std::remove(path.c_str());
}

TEST_CASE("output redirection") {
  const std::string target = "/tmp/pantslab_cli_out.txt";
  const auto r = run({"qseq", "--family", "grid", "--n", "5", "--out",
                      target});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(target);
  std::string content((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "4,8,12,16,20\n");
  std::remove(target.c_str());
  CHECK(run({"qseq", "--family", "grid", "--n", "5", "--out",
             "/pantslab_no_such_dir/x.txt"})
            .code == 2);
}

TEST_CASE("parser edges") {
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Usage") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"dance"}).code == 2);
  CHECK(run({"qseq", "--family", "grid", "--n", "5", "--format", "yaml"})
            .code == 2);
}

}  // TEST_SUITE
