#include "pantslab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pantslab/criteria.hpp"
#include "pantslab/errors.hpp"
#include "pantslab/extremal.hpp"
#include "pantslab/foliation.hpp"
#include "pantslab/hyptrig.hpp"
#include "pantslab/io.hpp"
#include "pantslab/probe.hpp"
#include "pantslab/series.hpp"
#include "pantslab/surface.hpp"

namespace pantslab::cli {

namespace {

using io::fmt17;
using nlohmann::json;

struct Options {
  std::string spec_path;
  std::string family;
  std::string rule;
  double r = 0;
  bool has_r = false;
  double c = 0;
  bool has_c = false;
  std::int64_t depth = 50;
  std::int64_t n = 0;
  bool has_n = false;
  std::int64_t steps = 10000;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string format;
  std::string out_path;
  bool strict_equality = false;
  std::string mode = "asymptotic";
  double l_in = 0, l_out = 0;
  double x1 = 0, x2 = 0;
  bool has_x1 = false, has_x2 = false;
  std::string pairs;
};

surface::SurfaceSpec build_spec(const Options& opt) {
  if (!opt.spec_path.empty()) return io::load_spec_file(opt.spec_path);
  if (opt.family.empty()) {
    throw ValidationError("missing --family (or --spec <file>)");
  }
  const auto family = surface::family_from_string(opt.family);
  surface::CuffRule rule = surface::CuffRule::constant(1.0);
  const std::string name = opt.rule.empty() ? "constant" : opt.rule;
  if (name == "constant") {
    rule = surface::CuffRule::constant(opt.has_c ? opt.c : 1.0);
  } else if (name == "linear_over_exp") {
    rule = surface::CuffRule::linear_over_exp();
  } else if (name == "power_over_exp") {
    if (!opt.has_r) throw ValidationError("rule power_over_exp needs --r");
    rule = surface::CuffRule::power_over_exp(opt.r);
  } else {
    throw ValidationError("unknown --rule '" + name +
                          "' (flag rules: constant, linear_over_exp, "
                          "power_over_exp; tables come from --spec files)");
  }
  return surface::SurfaceSpec::make(family, std::move(rule));
}

std::string pick_format(const Options& opt, const char* fallback) {
  const std::string f = opt.format.empty() ? fallback : opt.format;
  if (f != "json" && f != "csv" && f != "text") {
    throw ValidationError("--format must be json, csv, or text");
  }
  return f;
}

void emit(const Options& opt, std::ostream& out, const std::string& payload) {
  if (opt.out_path.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(opt.out_path);
  if (!f) {
    throw ValidationError("cannot open output file '" + opt.out_path + "'");
  }
  f << payload;
}

int cmd_classify(const Options& opt, std::ostream& out) {
  const auto spec = build_spec(opt);
  const auto verdict = criteria::classify(spec, opt.depth, opt.strict_equality);
  const json j = io::verdict_json(verdict);
  io::validate_verdict_json(j);
  const std::string format = pick_format(opt, "json");
  if (format == "csv") {
    throw ValidationError("classify emits json or text, not csv");
  }
  std::ostringstream os;
  if (format == "json") {
    os << j.dump(2) << '\n';
  } else {
    os << "kind: " << criteria::to_string(verdict.kind) << '\n'
       << "rule: " << verdict.rule << '\n'
       << "evidence: " << verdict.evidence.dump() << '\n';
  }
  emit(opt, out, os.str());
  return 0;
}

int cmd_energy(const Options& opt, std::ostream& out) {
  if (!opt.has_r) throw ValidationError("energy needs --r");
  const std::string mode_name = opt.mode;
  foliation::SeriesMode mode;
  if (mode_name == "asymptotic") {
    mode = foliation::SeriesMode::Asymptotic;
  } else if (mode_name == "exact") {
    mode = foliation::SeriesMode::Exact;
  } else {
    throw ValidationError("--mode must be asymptotic or exact");
  }
  const std::int64_t n_max = opt.has_n ? opt.n : 200;
  const auto s = foliation::cantor_energy_series(opt.r, n_max, mode);
  const std::string format = pick_format(opt, "csv");
  std::ostringstream os;
  if (format == "csv") {
    os << io::energy_series_csv(s);
  } else if (format == "json") {
    os << io::energy_series_json(s).dump(2) << '\n';
  } else {
    const json j = io::energy_series_json(s);
    os << "mode: " << j["mode"].get<std::string>() << '\n'
       << "verdict: " << j["verdict"].get<std::string>() << '\n'
       << "partial_sum: " << fmt17(j["partial_sum"].get<double>()) << '\n';
    if (j.contains("tail_bound")) {
      os << "tail_bound: " << fmt17(j["tail_bound"].get<double>()) << '\n';
    }
    if (j.contains("witness_n")) {
      os << "witness_n: " << j["witness_n"].get<std::int64_t>() << '\n';
    }
  }
  emit(opt, out, os.str());
  return 0;
}

int cmd_trig(const Options& opt, std::ostream& out) {
  if (!(opt.l_in > 0) || !(opt.l_out > 0)) {
    throw ValidationError("trig needs --l-in and --l-out (both > 0)");
  }
  const auto g = hyptrig::hexagon_geometry(opt.l_in, opt.l_out);
  const auto col = hyptrig::collar(opt.l_out);
  const std::string format = pick_format(opt, "text");
  std::ostringstream os;
  if (format == "json") {
    json j;
    j["l_in"] = g.l_in;
    j["l_out"] = g.l_out;
    j["o12"] = g.o12;
    j["o23"] = g.o23;
    j["a"] = g.a;
    j["t"] = g.t;
    j["b"] = g.b;
    j["gap"] = g.gap;
    j["max_residual"] = g.max_residual;
    j["collar_half_width"] = col.half_width;
    j["collar_annulus_modulus"] = col.annulus_modulus;
    j["collar_connecting_family_modulus"] = col.connecting_family_modulus;
    os << j.dump(2) << '\n';
  } else if (format == "csv") {
    os << "l_in,l_out,o12,o23,a,t,b,gap,max_residual\n"
       << fmt17(g.l_in) << ',' << fmt17(g.l_out) << ',' << fmt17(g.o12) << ','
       << fmt17(g.o23) << ',' << fmt17(g.a) << ',' << fmt17(g.t) << ','
       << fmt17(g.b) << ',' << fmt17(g.gap) << ',' << fmt17(g.max_residual)
       << '\n';
  } else {
    os << "o12 = " << fmt17(g.o12) << '\n'
       << "o23 = " << fmt17(g.o23) << '\n'
       << "a = " << fmt17(g.a) << '\n'
       << "t = " << fmt17(g.t) << '\n'
       << "b = " << fmt17(g.b) << '\n'
       << "gap = " << fmt17(g.gap) << '\n'
       << "max_residual = " << fmt17(g.max_residual) << '\n'
       << "collar half width (outer cuff) = " << fmt17(col.half_width) << '\n'
       << "collar connecting modulus = "
       << fmt17(col.connecting_family_modulus) << '\n';
  }
  emit(opt, out, os.str());
  return 0;
}

int cmd_qseq(const Options& opt, std::ostream& out) {
  if (!opt.has_n || opt.n < 1) throw ValidationError("qseq needs --n >= 1");
  const auto spec = build_spec(opt);
  const auto levels = surface::exhaustion(spec, opt.n);
  const std::string format = pick_format(opt, "text");
  std::ostringstream os;
  if (format == "json") {
    json arr = json::array();
    for (const auto& l : levels) arr.push_back(l.q_n);
    json j;
    j["family"] = surface::to_string(spec.family);
    j["q"] = arr;
    os << j.dump(2) << '\n';
  } else if (format == "csv") {
    os << "n,q\n";
    for (const auto& l : levels) os << l.n << ',' << l.q_n << '\n';
  } else {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      os << (i ? "," : "") << levels[i].q_n;
    }
    os << '\n';
  }
  emit(opt, out, os.str());
  return 0;
}

int cmd_series(const Options& opt, std::ostream& out) {
  const auto spec = build_spec(opt);
  const auto rule = surface::complexity_reciprocal_rule(spec, opt.depth);
  const auto an = criteria::series_divergence(rule, opt.depth);
  const std::string format = pick_format(opt, "json");
  std::ostringstream os;
  if (format == "json") {
    os << io::analysis_json(rule, an).dump(2) << '\n';
  } else if (format == "csv") {
    os << io::analysis_csv(rule, an);
  } else {
    os << "rule: " << rule.describe() << '\n'
       << "verdict: " << series::to_string(an.verdict) << '\n'
       << "partial_sum: " << fmt17(an.partial_sum) << '\n';
    if (an.certificate) {
      os << "certificate: " << an.certificate->describe() << '\n';
    }
  }
  emit(opt, out, os.str());
  return 0;
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& text) {
  std::vector<std::pair<double, double>> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("--pairs wants a:b,c:d,... got '" + item + "'");
    }
    try {
      pairs.emplace_back(std::stod(item.substr(0, colon)),
                         std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ValidationError("--pairs entry '" + item + "' is not numeric");
    }
  }
  return pairs;
}

int cmd_extremal(const Options& opt, std::ostream& out) {
  const std::string format = pick_format(opt, "text");
  json j;
  if (!opt.pairs.empty()) {
    extremal::ExtSample sample{parse_pairs(opt.pairs)};
    j["kerckhoff_lower_bound"] = extremal::kerckhoff_lower_bound(sample);
  } else if (opt.has_x1 && opt.has_x2) {
    j["annulus_modulus"] =
        extremal::annulus_modulus(extremal::Annulus(opt.x1, opt.x2));
  } else {
    throw ValidationError(
        "extremal needs --x1/--x2 (annulus radii) or --pairs (ext samples)");
  }
  std::ostringstream os;
  if (format == "json") {
    os << j.dump(2) << '\n';
  } else {
    for (const auto& [key, value] : j.items()) {
      os << key << " = " << fmt17(value.get<double>()) << '\n';
    }
  }
  emit(opt, out, os.str());
  return 0;
}

int cmd_probe(const Options& opt, std::ostream& out) {
  probe::WalkConfig cfg;
  cfg.spec = build_spec(opt);
  cfg.steps = opt.steps;
  cfg.trials = opt.trials;
  cfg.seed = opt.seed;
  const auto rep = probe::run_walk(cfg);
  const std::string format = pick_format(opt, "json");
  std::ostringstream os;
  if (format == "csv") {
    os << io::walk_csv(rep);
  } else if (format == "json") {
    os << io::walk_json(rep).dump(2) << '\n';
  } else {
    os << "heuristic walk probe (graph recurrence, not a verdict)\n"
       << "return_fraction = " << fmt17(rep.return_fraction) << '\n'
       << "mean_max_level = " << fmt17(rep.mean_max_level) << '\n';
  }
  emit(opt, out, os.str());
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"pants-decomposition toolkit for infinite hyperbolic surfaces"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", opt.spec_path, "surface spec JSON file");
    sub->add_option("--family", opt.family,
                    "cantor | ladder | grid | custom | finite_table");
    sub->add_option("--rule", opt.rule,
                    "constant | linear_over_exp | power_over_exp");
    sub->add_option("--r", opt.r, "rule exponent")
        ->each([&](const std::string&) { opt.has_r = true; });
    sub->add_option("--c", opt.c, "constant rule length")
        ->each([&](const std::string&) { opt.has_c = true; });
    sub->add_option("--format", opt.format, "json | csv | text");
    sub->add_option("--out", opt.out_path, "write output to a file");
  };

  CLI::App* classify = app.add_subcommand("classify", "run the classifier");
  add_common(classify);
  classify->add_option("--depth", opt.depth, "evidence depth (>= 10)");
  classify->add_flag("--strict-equality", opt.strict_equality,
                     "only the exact power rule fires slow-decay");

  CLI::App* energy = app.add_subcommand(
      "energy", "escaping-foliation energy series on the cantor family");
  add_common(energy);
  energy->add_option("--n", opt.n, "levels to sum")
      ->each([&](const std::string&) { opt.has_n = true; });
  energy->add_option("--mode", opt.mode, "asymptotic | exact");

  CLI::App* trig = app.add_subcommand(
      "trig", "right-angled hexagon geometry and collar data");
  add_common(trig);
  trig->add_option("--l-in", opt.l_in, "inner cuff length");
  trig->add_option("--l-out", opt.l_out, "outer cuff length");

  CLI::App* qseq =
      app.add_subcommand("qseq", "frontier complexity sequence q(n)");
  add_common(qseq);
  qseq->add_option("--n", opt.n, "levels to list")
      ->each([&](const std::string&) { opt.has_n = true; });

  CLI::App* seriescmd = app.add_subcommand(
      "series", "convergence analysis of sum 1/q(n) with certificate");
  add_common(seriescmd);
  seriescmd->add_option("--depth", opt.depth, "evidence depth (>= 10)");

  CLI::App* extremalcmd =
      app.add_subcommand("extremal", "modulus and distance calculators");
  add_common(extremalcmd);
  extremalcmd->add_option("--x1", opt.x1, "inner annulus radius")
      ->each([&](const std::string&) { opt.has_x1 = true; });
  extremalcmd->add_option("--x2", opt.x2, "outer annulus radius")
      ->each([&](const std::string&) { opt.has_x2 = true; });
  extremalcmd->add_option("--pairs", opt.pairs,
                          "extremal-length samples a:b,c:d,...");

  CLI::App* probecmd =
      app.add_subcommand("probe", "heuristic random-walk recurrence probe");
  add_common(probecmd);
  probecmd->add_option("--steps", opt.steps, "steps per trial");
  probecmd->add_option("--trials", opt.trials, "independent trials");
  probecmd->add_option("--seed", opt.seed, "base RNG seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (classify->parsed()) return cmd_classify(opt, out);
    if (energy->parsed()) return cmd_energy(opt, out);
    if (trig->parsed()) return cmd_trig(opt, out);
    if (qseq->parsed()) return cmd_qseq(opt, out);
    if (seriescmd->parsed()) return cmd_series(opt, out);
    if (extremalcmd->parsed()) return cmd_extremal(opt, out);
    if (probecmd->parsed()) return cmd_probe(opt, out);
    err << "error: no command given\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 1;
  } catch (const AdmissibilityError& e) {
    err << "admissibility error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace pantslab::cli
