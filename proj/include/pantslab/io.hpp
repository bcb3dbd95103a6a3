#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pantslab/criteria.hpp"
#include "pantslab/foliation.hpp"
#include "pantslab/probe.hpp"
#include "pantslab/surface.hpp"

namespace pantslab::io {

// 17 significant digits: enough to reproduce any double exactly.
std::string fmt17(double v);

// Energy series table: n,term,partial_sum,tail_bound (running tail per row
// where a certified bound exists, inf otherwise).
std::string energy_series_csv(const foliation::EnergySeries& s);
nlohmann::json energy_series_json(const foliation::EnergySeries& s);

// Walk rows: trial,returned,max_level.  The JSON summary carries the
// aggregate statistics and is always labeled heuristic.
std::string walk_csv(const probe::WalkReport& r);
nlohmann::json walk_json(const probe::WalkReport& r);

// Verdict wire format {kind, rule, evidence}.  validate_verdict_json throws
// ValidationError on any schema violation; from_json validates first.
nlohmann::json verdict_json(const criteria::Verdict& v);
void validate_verdict_json(const nlohmann::json& j);
criteria::Verdict verdict_from_json(const nlohmann::json& j);

// Surface spec files:
//   {"family": "...", "rule": {"kind": "...", ...}, "label"?, "graph"?}
// Rule params: constant {c}, power_over_exp {r}, table {lengths,
// declared_bounds?}; linear_over_exp takes none.  Expression rules exist
// only in the API and do not serialize.
surface::SurfaceSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const surface::SurfaceSpec& spec);
surface::SurfaceSpec load_spec_file(const std::string& path);

// Series analysis table: n,term,partial_sum rows (verdict and certificate
// live in the JSON form).
std::string analysis_csv(const series::TermRule& rule,
                         const series::Analysis& an);
nlohmann::json analysis_json(const series::TermRule& rule,
                             const series::Analysis& an);

nlohmann::json condition_json(const criteria::ConditionReport& rep);

}  // namespace pantslab::io
