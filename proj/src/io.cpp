#include "pantslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pantslab/errors.hpp"

namespace pantslab::io {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json certificate_json(const series::Certificate& cert) {
  json j;
  j["statement"] = cert.describe();
  j["onset"] = cert.onset;
  j["side"] =
      cert.side == series::Certificate::Side::Lower ? "lower" : "upper";
  return j;
}

const char* verdict_kind_name(foliation::SeriesVerdictKind v) {
  switch (v) {
    case foliation::SeriesVerdictKind::Converges:
      return "converges";
    case foliation::SeriesVerdictKind::Diverges:
      return "diverges";
    case foliation::SeriesVerdictKind::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

// Running certified tail after a given level of the asymptotic rule, scaled
// by the measured bracket constant in exact mode.
double running_tail(const foliation::EnergySeries& s, std::int64_t level) {
  if (s.verdict != foliation::SeriesVerdictKind::Converges) {
    return std::numeric_limits<double>::infinity();
  }
  const auto rule = series::TermRule::cantor_energy_asym(s.r);
  double factor = 1.0;
  if (s.mode == foliation::SeriesMode::Exact && !s.levels.empty()) {
    const double base = series::tail_bound_after(rule, s.levels.back());
    factor = base > 0 ? s.tail_bound / base : 1.0;
  }
  return factor * series::tail_bound_after(rule, level);
}

}  // namespace

std::string energy_series_csv(const foliation::EnergySeries& s) {
  std::ostringstream os;
  os << "n,term,partial_sum,tail_bound\n";
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    os << s.levels[i] << ',' << fmt17(s.terms[i]) << ','
       << fmt17(s.partial_sums[i]) << ','
       << fmt17(running_tail(s, s.levels[i])) << '\n';
  }
  return os.str();
}

json energy_series_json(const foliation::EnergySeries& s) {
  json j;
  j["mode"] =
      s.mode == foliation::SeriesMode::Asymptotic ? "asymptotic" : "exact";
  j["r"] = s.r;
  j["verdict"] = verdict_kind_name(s.verdict);
  j["levels"] = s.levels;
  j["terms"] = s.terms;
  j["partial_sums"] = s.partial_sums;
  j["partial_sum"] = s.partial_sums.empty() ? 0.0 : s.partial_sums.back();
  if (std::isfinite(s.tail_bound)) j["tail_bound"] = s.tail_bound;
  j["tail_empirical"] = s.tail_empirical;
  if (s.witness_n) j["witness_n"] = *s.witness_n;
  if (!s.skipped_levels.empty()) j["skipped_levels"] = s.skipped_levels;
  if (s.first_admissible) j["first_admissible"] = *s.first_admissible;
  if (s.certificate) j["certificate"] = certificate_json(*s.certificate);
  return j;
}

std::string walk_csv(const probe::WalkReport& r) {
  std::ostringstream os;
  os << "trial,returned,max_level\n";
  for (std::size_t t = 0; t < r.returned.size(); ++t) {
    os << t << ',' << static_cast<int>(r.returned[t]) << ',' << r.max_levels[t]
       << '\n';
  }
  return os.str();
}

json walk_json(const probe::WalkReport& r) {
  json j;
  j["note"] = r.note;
  j["steps"] = r.steps;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["return_fraction"] = r.return_fraction;
  j["mean_max_level"] = r.mean_max_level;
  json q = json::object();
  for (const auto& [p, v] : r.escape_quantiles) {
    std::ostringstream key;
    key << p;
    q[key.str()] = v;
  }
  j["escape_quantiles"] = q;
  return j;
}

json verdict_json(const criteria::Verdict& v) {
  json j;
  j["kind"] = criteria::to_string(v.kind);
  j["rule"] = v.rule;
  j["evidence"] = v.evidence.is_null() ? json::object() : v.evidence;
  return j;
}

void validate_verdict_json(const json& j) {
  if (!j.is_object()) throw ValidationError("verdict must be a JSON object");
  for (const char* field : {"kind", "rule", "evidence"}) {
    if (!j.contains(field)) {
      throw ValidationError(std::string("verdict is missing field '") +
                            field + "'");
    }
  }
  if (!j["kind"].is_string() || !j["rule"].is_string()) {
    throw ValidationError("verdict kind and rule must be strings");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind != "Parabolic" && kind != "NonParabolic" && kind != "Unknown") {
    throw ValidationError("verdict kind '" + kind + "' is not recognized");
  }
  if (!j["evidence"].is_object()) {
    throw ValidationError("verdict evidence must be an object");
  }
  if (kind != "Unknown") {
    if (j["rule"].get<std::string>() == "none" || j["evidence"].empty()) {
      throw ValidationError(
          "a decided verdict needs a named rule and nonempty evidence");
    }
  }
}

criteria::Verdict verdict_from_json(const json& j) {
  validate_verdict_json(j);
  criteria::Verdict v;
  const std::string kind = j["kind"].get<std::string>();
  v.kind = kind == "Parabolic"      ? criteria::VerdictKind::Parabolic
           : kind == "NonParabolic" ? criteria::VerdictKind::NonParabolic
                                    : criteria::VerdictKind::Unknown;
  v.rule = j["rule"].get<std::string>();
  v.evidence = j["evidence"];
  return v;
}

namespace {

surface::CuffRule rule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("rule needs a string field 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "constant") {
      if (!j.contains("c")) throw ValidationError("constant rule needs 'c'");
      return surface::CuffRule::constant(j["c"].get<double>());
    }
    if (kind == "linear_over_exp") return surface::CuffRule::linear_over_exp();
    if (kind == "power_over_exp") {
      if (!j.contains("r")) {
        throw ValidationError("power_over_exp rule needs 'r'");
      }
      return surface::CuffRule::power_over_exp(j["r"].get<double>());
    }
    if (kind == "table") {
      if (!j.contains("lengths") || !j["lengths"].is_array()) {
        throw ValidationError("table rule needs a 'lengths' array");
      }
      std::optional<std::pair<double, double>> bounds;
      if (j.contains("declared_bounds")) {
        const auto& b = j["declared_bounds"];
        if (!b.is_array() || b.size() != 2) {
          throw ValidationError("declared_bounds must be [lo, hi]");
        }
        bounds = {b[0].get<double>(), b[1].get<double>()};
      }
      return surface::CuffRule::from_table(
          j["lengths"].get<std::vector<double>>(), bounds);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed rule parameters: ") +
                          e.what());
  }
  throw ValidationError("unknown rule kind '" + kind + "'");
}

json rule_to_json(const surface::CuffRule& rule) {
  json j;
  switch (rule.kind) {
    case surface::CuffRule::Kind::Constant:
      j["kind"] = "constant";
      j["c"] = rule.c;
      break;
    case surface::CuffRule::Kind::LinearOverExp:
      j["kind"] = "linear_over_exp";
      break;
    case surface::CuffRule::Kind::PowerOverExp:
      j["kind"] = "power_over_exp";
      j["r"] = rule.r;
      break;
    case surface::CuffRule::Kind::Table:
      j["kind"] = "table";
      j["lengths"] = rule.table;
      if (rule.declared_bounds) {
        j["declared_bounds"] = {rule.declared_bounds->first,
                                rule.declared_bounds->second};
      }
      break;
    case surface::CuffRule::Kind::Expression:
      throw ValidationError("expression rules do not serialize");
  }
  return j;
}

surface::VoltageGraph graph_from_json(const json& j) {
  surface::VoltageGraph g;
  try {
    g.node_count = j.at("node_count").get<std::int32_t>();
    g.dim = j.at("dim").get<std::int32_t>();
    g.base_node = j.value("base_node", 0);
    for (const auto& e : j.at("edges")) {
      surface::VoltageGraph::Edge edge;
      edge.from = e.at("from").get<std::int32_t>();
      edge.to = e.at("to").get<std::int32_t>();
      if (e.contains("shift")) {
        const auto& s = e["shift"];
        if (!s.is_array() || s.size() > 4) {
          throw ValidationError("edge shift must be an array of <= 4 ints");
        }
        for (std::size_t k = 0; k < s.size(); ++k) {
          edge.shift[k] = s[k].get<std::int32_t>();
        }
      }
      g.edges.push_back(edge);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed graph: ") + e.what());
  }
  return g;
}

json graph_to_json(const surface::VoltageGraph& g) {
  json j;
  j["node_count"] = g.node_count;
  j["dim"] = g.dim;
  j["base_node"] = g.base_node;
  json edges = json::array();
  for (const auto& e : g.edges) {
    json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["shift"] = e.shift;
    edges.push_back(je);
  }
  j["edges"] = edges;
  return j;
}

}  // namespace

surface::SurfaceSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("spec must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ValidationError("spec needs a string field 'family'");
  }
  if (!j.contains("rule")) throw ValidationError("spec needs a 'rule'");
  const auto family = surface::family_from_string(j["family"].get<std::string>());
  auto rule = rule_from_json(j["rule"]);
  std::string label = j.value("label", std::string{});
  std::optional<surface::VoltageGraph> graph;
  if (j.contains("graph")) graph = graph_from_json(j["graph"]);
  return surface::SurfaceSpec::make(family, std::move(rule), std::move(label),
                                    std::move(graph));
}

json spec_to_json(const surface::SurfaceSpec& spec) {
  json j;
  j["family"] = surface::to_string(spec.family);
  j["rule"] = rule_to_json(spec.cuff_rule);
  if (!spec.label.empty()) j["label"] = spec.label;
  if (spec.graph) j["graph"] = graph_to_json(*spec.graph);
  return j;
}

surface::SurfaceSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("spec file '" + path + "' is not valid JSON: " +
                          e.what());
  }
  return spec_from_json(j);
}

std::string analysis_csv(const series::TermRule& rule,
                         const series::Analysis& an) {
  std::ostringstream os;
  os << "n,term,partial_sum\n";
  std::int64_t n = rule.first_level();
  for (std::size_t i = 0; i < an.terms.size(); ++i, ++n) {
    os << n << ',' << fmt17(an.terms[i]) << ',' << fmt17(an.partial_sums[i])
       << '\n';
  }
  return os.str();
}

json analysis_json(const series::TermRule& rule, const series::Analysis& an) {
  json j;
  j["rule"] = rule.describe();
  j["verdict"] = series::to_string(an.verdict);
  j["depth"] = an.depth;
  j["partial_sum"] = an.partial_sum;
  if (std::isfinite(an.tail_bound)) j["tail_bound"] = an.tail_bound;
  if (an.certificate) j["certificate"] = certificate_json(*an.certificate);
  return j;
}

json condition_json(const criteria::ConditionReport& rep) {
  json j;
  j["status"] = criteria::to_string(rep.status);
  j["note"] = rep.note;
  j["partial_sum"] = rep.partial_sum;
  if (std::isfinite(rep.tail_bound)) j["tail_bound"] = rep.tail_bound;
  json comps = json::array();
  for (std::size_t i = 0; i < rep.analyses.size(); ++i) {
    comps.push_back(analysis_json(rep.component_rules[i], rep.analyses[i]));
  }
  j["components"] = comps;
  return j;
}

}  // namespace pantslab::io
