#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pantslab/series.hpp"
#include "pantslab/surface.hpp"

namespace pantslab::criteria {

enum class VerdictKind { Parabolic, NonParabolic, Unknown };

std::string to_string(VerdictKind k);

// Classifier outcome.  `rule` names the criterion that fired
// (divergent-complexity, cuff-decay, slow-decay, thick-cuffs, or "none");
// `evidence` carries the numeric payload backing it.
struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::string rule = "none";
  nlohmann::json evidence;
};

// Fixed-order rule application; depth >= 10 controls how many levels of
// numeric evidence the verdict records (certificates are symbolic, so the
// verdict kind never depends on depth).
//   1. divergent-complexity: bounded cuffs proved and sum 1/q(n) certified
//      divergent -> Parabolic.
//   2. cuff-decay: cantor tree with the n/2^(n+1) rule -> Parabolic.
//   3. slow-decay: cantor tree with cuffs >= (n+1)^r/2^(n+1) for some
//      r > 2 -> NonParabolic.  With strict_equality the rule fires only on
//      the exact power form; the default also accepts constant rules that
//      dominate such a power sequence.
//   4. thick-cuffs: cantor tree with constant cuffs c > 0 -> NonParabolic.
// Anything else is Unknown with diagnostics (the escaping-foliation energy
// verdict appears there as labeled heuristic evidence only, never a verdict).
Verdict classify(const surface::SurfaceSpec& spec, std::int64_t depth,
                 bool strict_equality = false);

// Certificate-backed convergence decision for a term rule; depth >= 10 rows
// of numeric evidence.  Thin wrapper so callers get the precondition check.
series::Analysis series_divergence(const series::TermRule& rule,
                                   std::int64_t depth);

// How a per-level intersection rule is read.
//   PerLevel: i(n) is the intersection number of the single escaping curve
//     at level n; terms are i(n)^2 (bounded) or i(n)^2 / l(n) (weighted).
//   UniformEscapingMass: i(n) is the total transverse mass crossing level n,
//     split evenly over the F(n) frontier cuffs; Cauchy-Schwarz gives the
//     per-level lower bounds i(n)^2/F(n) and i(n)^2/(F(n) l(n)).
enum class MassMode { PerLevel, UniformEscapingMass };

struct IntersectionData {
  surface::SurfaceSpec spec;  // supplies cuff lengths and frontier counts
  series::TermRule i_alpha;
  std::optional<series::TermRule> i_beta;
  MassMode mode = MassMode::PerLevel;
};

enum class ConditionStatus { Satisfied, Violated, Inconclusive };

std::string to_string(ConditionStatus s);

// One necessary-condition evaluation.  `analyses` has one entry per summed
// component (two when i_beta is present); partial_sum and tail_bound are the
// totals across components.
struct ConditionReport {
  ConditionStatus status = ConditionStatus::Inconclusive;
  std::vector<series::TermRule> component_rules;
  std::vector<series::Analysis> analyses;
  double partial_sum = 0;
  double tail_bound = 0;
  std::string note;
};

// Sum of squared intersection numbers must converge for any integrable
// holomorphic differential; requires a proved bounded-pants certificate.
ConditionReport necessary_condition_bounded(const IntersectionData& data,
                                            std::int64_t depth);

// Length-weighted form: sum of i^2 / l must converge; requires a certified
// upper bound on cuff lengths.
ConditionReport necessary_condition_weighted(const IntersectionData& data,
                                             std::int64_t depth);

}  // namespace pantslab::criteria
