#include "pantslab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pantslab/errors.hpp"

namespace pantslab::criteria {

using surface::CuffRule;
using surface::Family;
using surface::SurfaceSpec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// max_n (n+1)^r / 2^(n+1): the least constant dominating the power-decay
// sequence.  The term ratio falls below 1 permanently once
// (1 + 1/(n+1))^r < 2, so the scan stops there.
double power_sequence_max(double r) {
  double best = 0;
  for (std::int64_t n = 1; n <= 1000000; ++n) {
    best = std::max(best, series::cantor_cuff_length(n, r));
    const double ratio =
        std::pow(1.0 + 1.0 / (static_cast<double>(n) + 1.0), r) / 2.0;
    if (ratio < 1.0) break;
  }
  return best;
}

nlohmann::json analysis_json(const series::TermRule& rule,
                             const series::Analysis& an) {
  nlohmann::json j;
  j["rule"] = rule.describe();
  j["verdict"] = series::to_string(an.verdict);
  j["depth"] = an.depth;
  j["partial_sum"] = an.partial_sum;
  if (std::isfinite(an.tail_bound)) j["tail_bound"] = an.tail_bound;
  if (an.certificate) {
    j["certificate"] = an.certificate->describe();
    j["certificate_onset"] = an.certificate->onset;
  }
  return j;
}

nlohmann::json sample_lengths(const SurfaceSpec& spec, std::int64_t depth) {
  nlohmann::json arr = nlohmann::json::array();
  const std::int64_t upto = std::min<std::int64_t>(depth, 20);
  for (std::int64_t n = 1; n <= upto; ++n) {
    try {
      arr.push_back(surface::cuff_length(spec, n, 0));
    } catch (const Error&) {
      break;
    }
  }
  return arr;
}

}  // namespace

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Parabolic:
      return "Parabolic";
    case VerdictKind::NonParabolic:
      return "NonParabolic";
    case VerdictKind::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::Satisfied:
      return "Satisfied";
    case ConditionStatus::Violated:
      return "Violated";
    case ConditionStatus::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict classify(const SurfaceSpec& spec, std::int64_t depth,
                 bool strict_equality) {
  if (depth < 10) throw DomainError("classification depth must be >= 10");
  if (spec.family == Family::FiniteTable) {
    throw UnsupportedSurface("finite_table surfaces are not classified");
  }

  Verdict v;
  nlohmann::json& ev = v.evidence;
  ev["depth"] = depth;
  ev["family"] = surface::to_string(spec.family);
  ev["cuff_rule"] = spec.cuff_rule.describe();
  ev["strict_equality"] = strict_equality;
  ev["sample_lengths"] = sample_lengths(spec, depth);

  // 1. divergent-complexity: bounded cuffs and divergent sum 1/q(n).
  const auto rep = surface::is_bounded_pants(spec, depth);
  {
    nlohmann::json b;
    b["bounded"] = rep.bounded;
    b["proved"] = rep.proved;
    b["min_length"] = rep.min_length;
    b["max_length"] = rep.max_length;
    if (rep.violation_level) b["violation_level"] = *rep.violation_level;
    ev["bounded_pants"] = b;
  }
  if (rep.bounded && rep.proved) {
    const auto rule = surface::complexity_reciprocal_rule(spec, depth);
    const auto an = series::analyze(rule, depth);
    ev["complexity_series"] = analysis_json(rule, an);
    if (an.verdict == series::SeriesVerdict::Divergent) {
      v.kind = VerdictKind::Parabolic;
      v.rule = "divergent-complexity";
      return v;
    }
  }

  // 2. cuff-decay: the n/2^(n+1) cantor rule.
  if (spec.family == Family::CantorTree &&
      spec.cuff_rule.kind == CuffRule::Kind::LinearOverExp) {
    v.kind = VerdictKind::Parabolic;
    v.rule = "cuff-decay";
    return v;
  }

  if (spec.family == Family::CantorTree) {
    // 3. slow-decay: cuffs at least (n+1)^r/2^(n+1) for some r > 2.
    if (spec.cuff_rule.kind == CuffRule::Kind::PowerOverExp &&
        spec.cuff_rule.r > 2) {
      ev["r"] = spec.cuff_rule.r;
      v.kind = VerdictKind::NonParabolic;
      v.rule = "slow-decay";
      return v;
    }
    if (!strict_equality && spec.cuff_rule.kind == CuffRule::Kind::Constant) {
      // A constant c dominates the whole power sequence iff c >= its max.
      static const double kGrid[] = {2.0625, 2.125, 2.25, 2.5,
                                     3.0,    4.0,   6.0,  8.0};
      for (double r : kGrid) {
        const double m = power_sequence_max(r);
        if (spec.cuff_rule.c >= m * (1 - 1e-12)) {
          ev["r"] = r;
          ev["dominated_sequence_max"] = m;
          v.kind = VerdictKind::NonParabolic;
          v.rule = "slow-decay";
          return v;
        }
      }
    }

    // 4. thick-cuffs: constant cuff lengths.
    if (spec.cuff_rule.kind == CuffRule::Kind::Constant &&
        spec.cuff_rule.c > 0) {
      ev["c"] = spec.cuff_rule.c;
      v.kind = VerdictKind::NonParabolic;
      v.rule = "thick-cuffs";
      return v;
    }
  }

  v.kind = VerdictKind::Unknown;
  v.rule = "none";
  if (spec.family == Family::CantorTree &&
      spec.cuff_rule.kind == CuffRule::Kind::PowerOverExp) {
    // Advisory only: the escaping-foliation energy verdict never upgrades
    // an Unknown.
    const auto rule = series::TermRule::cantor_energy_asym(spec.cuff_rule.r);
    const auto an = series::analyze(rule, std::max<std::int64_t>(depth, 2));
    ev["energy_series"] = analysis_json(rule, an);
    if (an.verdict == series::SeriesVerdict::Convergent) {
      ev["advisory"] =
          "heuristic: finite Dirichlet energy of the canonical escaping "
          "foliation suggests non-parabolic (not a verdict)";
    }
  }
  return v;
}

series::Analysis series_divergence(const series::TermRule& rule,
                                   std::int64_t depth) {
  if (depth < 10) throw DomainError("series depth must be >= 10");
  return series::analyze(rule, depth);
}

namespace {

ConditionReport combine(std::vector<series::TermRule> comps,
                        std::int64_t depth, std::string note) {
  ConditionReport rep;
  rep.note = std::move(note);
  bool any_divergent = false;
  bool all_convergent = true;
  double tail = 0;
  for (const auto& rule : comps) {
    // Probed tables may be shorter than the requested evidence depth; they
    // are Inconclusive either way.
    std::int64_t d = depth;
    if (rule.kind == series::RuleKind::Table) {
      d = std::min<std::int64_t>(
          d, static_cast<std::int64_t>(rule.table.size()));
    }
    auto an = series::analyze(rule, d);
    any_divergent |= an.verdict == series::SeriesVerdict::Divergent;
    all_convergent &= an.verdict == series::SeriesVerdict::Convergent;
    rep.partial_sum += an.partial_sum;
    tail += an.tail_bound;
    rep.analyses.push_back(std::move(an));
  }
  rep.component_rules = std::move(comps);
  if (any_divergent) {
    rep.status = ConditionStatus::Violated;
    rep.tail_bound = kInf;
  } else if (all_convergent) {
    rep.status = ConditionStatus::Satisfied;
    rep.tail_bound = tail;
  } else {
    rep.status = ConditionStatus::Inconclusive;
    rep.tail_bound = kInf;
  }
  return rep;
}

}  // namespace

ConditionReport necessary_condition_bounded(const IntersectionData& data,
                                            std::int64_t depth) {
  if (depth < 10) throw DomainError("condition depth must be >= 10");
  const auto rep = surface::is_bounded_pants(data.spec, depth);
  if (!(rep.bounded && rep.proved)) {
    throw PreconditionError(
        "no proved bounded-pants certificate for this surface");
  }
  const bool uniform = data.mode == MassMode::UniformEscapingMass;
  std::optional<series::TermRule> frecip;
  if (uniform) frecip = surface::frontier_reciprocal_rule(data.spec, depth);

  std::vector<series::TermRule> comps;
  auto add = [&](const series::TermRule& i_rule) {
    series::TermRule t = series::square(i_rule);
    if (frecip) t = series::multiply(t, *frecip);
    comps.push_back(std::move(t));
  };
  add(data.i_alpha);
  if (data.i_beta) add(*data.i_beta);
  return combine(std::move(comps), depth,
                 uniform ? "terms i(n)^2 / F(n) per component"
                         : "terms i(n)^2 per component");
}

ConditionReport necessary_condition_weighted(const IntersectionData& data,
                                             std::int64_t depth) {
  if (depth < 10) throw DomainError("condition depth must be >= 10");
  const auto bound = surface::certified_upper_length_bound(data.spec);
  if (!bound) {
    throw PreconditionError(
        "no certified upper bound on cuff lengths for this surface");
  }
  const bool uniform = data.mode == MassMode::UniformEscapingMass;
  const auto rlen =
      surface::reciprocal_length_rule(data.spec.cuff_rule, depth);
  std::optional<series::TermRule> frecip;
  if (uniform) frecip = surface::frontier_reciprocal_rule(data.spec, depth);

  std::vector<series::TermRule> comps;
  auto add = [&](const series::TermRule& i_rule) {
    series::TermRule t = series::square(i_rule);
    if (frecip) t = series::multiply(t, *frecip);
    t = series::multiply(t, rlen);
    comps.push_back(std::move(t));
  };
  add(data.i_alpha);
  if (data.i_beta) add(*data.i_beta);
  return combine(std::move(comps), depth,
                 uniform ? "terms i(n)^2 / (F(n) l(n)) per component"
                         : "terms i(n)^2 / l(n) per component");
}

}  // namespace pantslab::criteria
