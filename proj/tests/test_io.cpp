#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "pantslab/criteria.hpp"
#include "pantslab/errors.hpp"
#include "pantslab/foliation.hpp"
#include "pantslab/io.hpp"
#include "pantslab/probe.hpp"
#include "pantslab/series.hpp"
#include "pantslab/surface.hpp"

using namespace pantslab;
using nlohmann::json;
using series::TermRule;
using surface::CuffRule;
using surface::Family;
using surface::SurfaceSpec;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/" + name;
  std::ofstream f(path);
  f << body;
  return path;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("fmt17 round trips doubles exactly") {
  for (double v : {1.0 / 3.0, 0.1, std::acos(-1.0), 1e-300, 6.02214076e23,
                   -2.5, 0.0}) {
    CHECK(std::stod(io::fmt17(v)) == v);
  }
  CHECK(io::fmt17(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::fmt17(1.0) == "1");
}

TEST_CASE("energy csv carries running certified tails") {
  const auto s =
      foliation::cantor_energy_series(3.0, 20, foliation::SeriesMode::Asymptotic);
  const auto rows = parse_csv(io::energy_series_csv(s));
  REQUIRE(rows.size() == 20);  // header + levels 2..20
  CHECK(rows[0] == std::vector<std::string>{"n", "term", "partial_sum",
                                            "tail_bound"});
  CHECK(rows[1][0] == "2");
  CHECK(rows.back()[0] == "20");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 4);
    CHECK(std::stod(rows[i][1]) == s.terms[i - 1]);
    CHECK(std::stod(rows[i][2]) == s.partial_sums[i - 1]);
  }
  // Row tails shrink and the last one is the reported bound.
  CHECK(std::stod(rows[1][3]) > std::stod(rows.back()[3]));
  CHECK(std::stod(rows.back()[3]) == s.tail_bound);
}

TEST_CASE("divergent energy rows have infinite tails") {
  const auto s = foliation::cantor_energy_series(
      1.5, 60, foliation::SeriesMode::Asymptotic);
  const auto rows = parse_csv(io::energy_series_csv(s));
  CHECK(rows[1][3] == "inf");
  const json j = io::energy_series_json(s);
  CHECK(j["verdict"] == "diverges");
  CHECK_FALSE(j.contains("tail_bound"));
  CHECK(j["witness_n"].get<std::int64_t>() == 54);
}

TEST_CASE("exact energy json reports the admissibility window") {
  const auto s =
      foliation::cantor_energy_series(3.0, 55, foliation::SeriesMode::Exact);
  const json j = io::energy_series_json(s);
  CHECK(j["mode"] == "exact");
  CHECK(j["verdict"] == "converges");
  CHECK(j["tail_empirical"] == true);
  CHECK(j["first_admissible"].get<std::int64_t>() == 9);
  CHECK(j["skipped_levels"].size() == 7);
  CHECK(j.contains("tail_bound"));
  CHECK(j.contains("certificate"));
  CHECK(j["certificate"].contains("statement"));
  // Exact-mode csv rows scale the certified tail by the measured bracket,
  // so the last row again matches the reported bound.
  const auto rows = parse_csv(io::energy_series_csv(s));
  CHECK(std::stod(rows.back()[3]) == doctest::Approx(s.tail_bound).epsilon(1e-12));
}

TEST_CASE("walk emission") {
  probe::WalkConfig cfg;
  cfg.spec = SurfaceSpec::make(Family::LadderZCover, CuffRule::constant(1.0));
  cfg.steps = 300;
  cfg.trials = 20;
  cfg.seed = 3;
  const auto rep = probe::run_walk(cfg);
  const auto rows = parse_csv(io::walk_csv(rep));
  REQUIRE(rows.size() == 21);
  CHECK(rows[0] == std::vector<std::string>{"trial", "returned", "max_level"});
  CHECK(rows[1][0] == "0");
  CHECK(rows.back()[0] == "19");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK((rows[i][1] == "0" || rows[i][1] == "1"));
    CHECK(std::stoll(rows[i][2]) >= 1);
  }
  const json j = io::walk_json(rep);
  CHECK(j["note"] == "heuristic");
  CHECK(j["steps"].get<std::int64_t>() == 300);
  CHECK(j["trials"].get<std::int64_t>() == 20);
  CHECK(j["seed"].get<std::uint64_t>() == 3);
  CHECK(j["escape_quantiles"].contains("0.5"));
  CHECK(j["escape_quantiles"].contains("0.9"));
  CHECK(j["escape_quantiles"].contains("0.99"));
  CHECK(j["return_fraction"].get<double>() == rep.return_fraction);
}

TEST_CASE("verdict json round trip") {
  const auto v = criteria::classify(
      SurfaceSpec::make(Family::CantorTree, CuffRule::power_over_exp(3.0)),
      50);
  const json j = io::verdict_json(v);
  CHECK_NOTHROW(io::validate_verdict_json(j));
  const auto back = io::verdict_from_json(j);
  CHECK(back.kind == v.kind);
  CHECK(back.rule == v.rule);
  CHECK(back.evidence == v.evidence);
}

TEST_CASE("verdict schema violations") {
  json good;
  good["kind"] = "Parabolic";
  good["rule"] = "cuff-decay";
  good["evidence"] = {{"depth", 50}};
  CHECK_NOTHROW(io::validate_verdict_json(good));

  json j = good;
  j["kind"] = "Mystery";
  CHECK_THROWS_AS(io::validate_verdict_json(j), ValidationError);
  j = good;
  j.erase("rule");
  CHECK_THROWS_AS(io::validate_verdict_json(j), ValidationError);
  j = good;
  j["rule"] = "none";  // decided verdicts need a named rule
  CHECK_THROWS_AS(io::validate_verdict_json(j), ValidationError);
  j = good;
  j["evidence"] = json::object();
  CHECK_THROWS_AS(io::validate_verdict_json(j), ValidationError);
  j = good;
  j["evidence"] = "lots";
  CHECK_THROWS_AS(io::validate_verdict_json(j), ValidationError);
  // Unknown verdicts may stay bare.
  json unknown;
  unknown["kind"] = "Unknown";
  unknown["rule"] = "none";
  unknown["evidence"] = json::object();
  CHECK_NOTHROW(io::validate_verdict_json(unknown));
  CHECK_THROWS_AS(io::validate_verdict_json(json::array()), ValidationError);
}

TEST_CASE("spec json round trips") {
  const auto specs = {
      SurfaceSpec::make(Family::CantorTree, CuffRule::power_over_exp(3.0),
                        "deep"),
      SurfaceSpec::make(Family::GridZ2Cover, CuffRule::constant(2.5)),
      SurfaceSpec::make(Family::CantorTree,
                        CuffRule::from_table({0.5, 1.0, 1.5}, {{0.5, 1.5}})),
      SurfaceSpec::make(Family::FiniteTable, CuffRule::from_table({1.0, 2.0})),
  };
  for (const auto& spec : specs) {
    const json j = io::spec_to_json(spec);
    const auto back = io::spec_from_json(j);
    CHECK(io::spec_to_json(back) == j);
    CHECK(back.family == spec.family);
    CHECK(back.cuff_rule.kind == spec.cuff_rule.kind);
    CHECK(back.label == spec.label);
  }
  // Custom periodic specs round trip their graph too.
  surface::VoltageGraph g;
  g.node_count = 2;
  g.dim = 1;
  g.base_node = 0;
  g.edges.push_back({0, 1, {0, 0, 0, 0}});
  g.edges.push_back({1, 0, {1, 0, 0, 0}});
  const auto custom = SurfaceSpec::make(Family::CustomPeriodic,
                                        CuffRule::constant(1.0), "chain", g);
  const json cj = io::spec_to_json(custom);
  const auto cback = io::spec_from_json(cj);
  CHECK(io::spec_to_json(cback) == cj);
  REQUIRE(cback.graph.has_value());
  CHECK(cback.graph->edges.size() == 2);
  CHECK(cback.graph->edges[1].shift[0] == 1);
}

TEST_CASE("expression rules do not serialize") {
  const auto spec = SurfaceSpec::make(
      Family::CantorTree, CuffRule::from_expression([](std::int64_t,
                                                       std::int64_t) {
        return 1.0;
      }));
  CHECK_THROWS_AS(io::spec_to_json(spec), ValidationError);
}

TEST_CASE("spec json rejections") {
  CHECK_THROWS_AS(io::spec_from_json(json::array()), ValidationError);
  CHECK_THROWS_AS(io::spec_from_json(json::object()), ValidationError);
  json j;
  j["family"] = "cantor";
  CHECK_THROWS_AS(io::spec_from_json(j), ValidationError);
  j["rule"] = {{"kind", "mystery"}};
  CHECK_THROWS_AS(io::spec_from_json(j), ValidationError);
  j["rule"] = {{"kind", "constant"}};
  CHECK_THROWS_AS(io::spec_from_json(j), ValidationError);  // missing c
  j["rule"] = {{"kind", "constant"}, {"c", "not-a-number"}};
  CHECK_THROWS_AS(io::spec_from_json(j), ValidationError);
  j["rule"] = {{"kind", "table"}, {"lengths", {1.0}},
               {"declared_bounds", {1.0, 2.0, 3.0}}};
  CHECK_THROWS_AS(io::spec_from_json(j), ValidationError);
}

TEST_CASE("spec files load with validation") {
  const auto good = write_temp(
      "pantslab_io_good.json",
      R"({"family": "cantor", "rule": {"kind": "power_over_exp", "r": 3.0}})");
  const auto spec = io::load_spec_file(good);
  CHECK(spec.family == Family::CantorTree);
  CHECK(spec.cuff_rule.kind == CuffRule::Kind::PowerOverExp);
  CHECK(spec.cuff_rule.r == 3.0);
  CHECK_THROWS_AS(io::load_spec_file("/tmp/pantslab_io_missing.json"),
                  ValidationError);
  const auto broken = write_temp("pantslab_io_broken.json", "{not json");
  CHECK_THROWS_AS(io::load_spec_file(broken), ValidationError);
  std::remove(good.c_str());
  std::remove(broken.c_str());
}

TEST_CASE("analysis emission") {
  const auto rule = TermRule::bertrand_reciprocal(1, 2);
  const auto an = series::analyze(rule, 30);
  const auto rows = parse_csv(io::analysis_csv(rule, an));
  REQUIRE(rows.size() == 30);  // header + levels 2..30
  CHECK(rows[0] == std::vector<std::string>{"n", "term", "partial_sum"});
  CHECK(rows[1][0] == "2");
  CHECK(std::stod(rows[1][1]) == rule.eval(2));
  const json j = io::analysis_json(rule, an);
  CHECK(j["verdict"] == "convergent");
  CHECK(j["depth"].get<std::int64_t>() == 30);
  CHECK(j.contains("tail_bound"));
  CHECK(j["certificate"]["side"] == "upper");
  const auto div = series::analyze(TermRule::constant(1.0), 15);
  const json dj = io::analysis_json(TermRule::constant(1.0), div);
  CHECK(dj["verdict"] == "divergent");
  CHECK_FALSE(dj.contains("tail_bound"));
  CHECK(dj["certificate"]["side"] == "lower");
}

TEST_CASE("condition emission") {
  criteria::IntersectionData data;
  data.spec = SurfaceSpec::make(Family::CantorTree, CuffRule::constant(1.0));
  data.i_alpha = TermRule::power_shifted(1, 1);
  const auto sat = criteria::necessary_condition_bounded(data, 100);
  const json js = io::condition_json(sat);
  CHECK(js["status"] == "Satisfied");
  CHECK(js["note"] == "terms i(n)^2 per component");
  CHECK(js.contains("tail_bound"));
  CHECK(js["components"].size() == 1);
  CHECK(js["components"][0]["verdict"] == "convergent");

  data.i_alpha = TermRule::constant(1.0);
  const auto vio = criteria::necessary_condition_bounded(data, 100);
  const json jv = io::condition_json(vio);
  CHECK(jv["status"] == "Violated");
  CHECK_FALSE(jv.contains("tail_bound"));
}

}  // TEST_SUITE
