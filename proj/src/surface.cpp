#include "pantslab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "pantslab/errors.hpp"

namespace pantslab::surface {

namespace {

void require_level(std::int64_t level) {
  if (level < 1) {
    throw DomainError("level must be >= 1, got " + std::to_string(level));
  }
}

double checked_length(double v, std::int64_t level) {
  if (!std::isfinite(v) || !(v > 0)) {
    std::ostringstream os;
    os << "cuff rule produced a non-positive length " << v << " at level "
       << level;
    throw GeneratorError(os.str());
  }
  return v;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::CantorTree:
      return "cantor_tree";
    case Family::LadderZCover:
      return "ladder_z_cover";
    case Family::GridZ2Cover:
      return "grid_z2_cover";
    case Family::CustomPeriodic:
      return "custom_periodic";
    case Family::FiniteTable:
      return "finite_table";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "cantor" || name == "cantor_tree") return Family::CantorTree;
  if (name == "ladder" || name == "ladder_z_cover")
    return Family::LadderZCover;
  if (name == "grid" || name == "grid_z2_cover") return Family::GridZ2Cover;
  if (name == "custom" || name == "custom_periodic")
    return Family::CustomPeriodic;
  if (name == "finite_table") return Family::FiniteTable;
  throw ValidationError("unknown family '" + name + "'");
}

CuffRule CuffRule::constant(double c) {
  if (!std::isfinite(c) || !(c > 0)) {
    throw DomainError("constant cuff rule needs c > 0");
  }
  CuffRule r;
  r.kind = Kind::Constant;
  r.c = c;
  return r;
}

CuffRule CuffRule::linear_over_exp() {
  CuffRule r;
  r.kind = Kind::LinearOverExp;
  return r;
}

CuffRule CuffRule::power_over_exp(double rr) {
  if (!std::isfinite(rr) || !(rr > 0)) {
    throw DomainError("power_over_exp needs r > 0");
  }
  CuffRule r;
  r.kind = Kind::PowerOverExp;
  r.r = rr;
  return r;
}

CuffRule CuffRule::from_table(
    std::vector<double> lengths,
    std::optional<std::pair<double, double>> declared_bounds) {
  if (lengths.empty()) throw DomainError("table cuff rule needs entries");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    checked_length(lengths[i], static_cast<std::int64_t>(i) + 1);
  }
  if (declared_bounds) {
    const auto [lo, hi] = *declared_bounds;
    if (!(0 < lo && lo <= hi) || !std::isfinite(hi)) {
      throw DomainError("declared bounds need 0 < lo <= hi");
    }
    for (double v : lengths) {
      if (v < lo || v > hi) {
        throw DomainError("table entry outside its declared bounds");
      }
    }
  }
  CuffRule r;
  r.kind = Kind::Table;
  r.table = std::move(lengths);
  r.declared_bounds = declared_bounds;
  return r;
}

CuffRule CuffRule::from_expression(
    std::function<double(std::int64_t, std::int64_t)> fn) {
  if (!fn) throw DomainError("expression cuff rule needs a callable");
  CuffRule r;
  r.kind = Kind::Expression;
  r.expression = std::move(fn);
  return r;
}

std::string CuffRule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant:
      os << "constant(" << c << ")";
      break;
    case Kind::LinearOverExp:
      os << "linear_over_exp";
      break;
    case Kind::PowerOverExp:
      os << "power_over_exp(r=" << r << ")";
      break;
    case Kind::Table:
      os << "table[" << table.size() << "]";
      break;
    case Kind::Expression:
      os << "expression";
      break;
  }
  return os.str();
}

SurfaceSpec SurfaceSpec::make(Family family, CuffRule rule, std::string label,
                              std::optional<VoltageGraph> graph) {
  if (family == Family::FiniteTable && rule.kind != CuffRule::Kind::Table) {
    throw ValidationError("finite_table requires an explicit table rule");
  }
  if (family == Family::CustomPeriodic) {
    if (!graph) {
      throw ValidationError("custom_periodic requires a declared graph");
    }
    const VoltageGraph& g = *graph;
    if (g.node_count < 1) throw GeneratorError("graph needs >= 1 node");
    if (g.dim < 0 || g.dim > 4) {
      throw GeneratorError("graph shift dimension must be in 0..4");
    }
    if (g.base_node < 0 || g.base_node >= g.node_count) {
      throw GeneratorError("graph base node out of range");
    }
    if (g.edges.empty()) {
      throw GeneratorError("graph needs at least one edge");
    }
    for (const auto& e : g.edges) {
      if (e.from < 0 || e.from >= g.node_count || e.to < 0 ||
          e.to >= g.node_count) {
        throw GeneratorError("graph edge endpoint out of range");
      }
      for (int k = g.dim; k < 4; ++k) {
        if (e.shift[static_cast<std::size_t>(k)] != 0) {
          throw GeneratorError("graph edge shift exceeds declared dimension");
        }
      }
    }
  } else if (graph) {
    throw ValidationError("only custom_periodic takes a graph");
  }
  SurfaceSpec s;
  s.family = family;
  s.cuff_rule = std::move(rule);
  s.label = std::move(label);
  s.graph = std::move(graph);
  return s;
}

std::int64_t grid_axis_layer(std::int64_t i, std::int64_t j) {
  const std::int64_t ai = std::abs(i), aj = std::abs(j);
  // Equivalent closed form of the axis-first recursion: origin 1, +-x axis
  // 2i, +-y axis 2j+1, off-axis one past both toward-origin neighbors.
  return std::max(2 * ai, 2 * aj + 1) + std::min(ai, aj);
}

std::size_t CoverVertexHash::operator()(const CoverVertex& v) const {
  std::uint64_t h = static_cast<std::uint64_t>(v.node) + 0x9E3779B97F4A7C15ULL;
  for (int k = 0; k < 4; ++k) {
    h ^= static_cast<std::uint64_t>(
             static_cast<std::uint32_t>(v.off[static_cast<std::size_t>(k)])) +
         0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

namespace {

template <typename Fn>
void for_each_neighbor(const VoltageGraph& g, const CoverVertex& v, Fn&& fn) {
  for (const auto& e : g.edges) {
    if (e.from == v.node) {
      CoverVertex w{e.to, v.off};
      for (int k = 0; k < 4; ++k) {
        w.off[static_cast<std::size_t>(k)] += e.shift[static_cast<std::size_t>(k)];
      }
      fn(w);
    }
    if (e.to == v.node) {
      CoverVertex w{e.from, v.off};
      for (int k = 0; k < 4; ++k) {
        w.off[static_cast<std::size_t>(k)] -= e.shift[static_cast<std::size_t>(k)];
      }
      fn(w);
    }
  }
}

// BFS distances (levels = dist + 1) out to max_level, capped.
std::unordered_map<CoverVertex, std::int64_t, CoverVertexHash> bfs_levels(
    const VoltageGraph& g, std::int64_t max_level, std::int64_t node_cap) {
  std::unordered_map<CoverVertex, std::int64_t, CoverVertexHash> level;
  std::queue<CoverVertex> frontier;
  const CoverVertex base{g.base_node, {0, 0, 0, 0}};
  level[base] = 1;
  frontier.push(base);
  while (!frontier.empty()) {
    const CoverVertex v = frontier.front();
    frontier.pop();
    const std::int64_t lv = level[v];
    if (lv >= max_level) continue;
    for_each_neighbor(g, v, [&](const CoverVertex& w) {
      if (level.emplace(w, lv + 1).second) {
        if (static_cast<std::int64_t>(level.size()) > node_cap) {
          throw ResourceError("frontier enumeration exceeded its node cap");
        }
        frontier.push(w);
      }
    });
  }
  return level;
}

}  // namespace

std::int64_t frontier_cut(
    const VoltageGraph& g,
    const std::function<std::int64_t(const std::array<std::int32_t, 4>&,
                                     std::int32_t)>& level_of,
    std::int64_t n, std::int64_t node_cap) {
  // Restricted BFS over the sublevel set {level <= n}; the level functions
  // used here decrease along toward-base edges, so the set is connected.
  std::unordered_map<CoverVertex, bool, CoverVertexHash> seen;
  std::queue<CoverVertex> todo;
  const CoverVertex base{g.base_node, {0, 0, 0, 0}};
  if (level_of(base.off, base.node) > n) return 0;
  seen[base] = true;
  todo.push(base);
  std::int64_t cut = 0;
  while (!todo.empty()) {
    const CoverVertex v = todo.front();
    todo.pop();
    for_each_neighbor(g, v, [&](const CoverVertex& w) {
      if (level_of(w.off, w.node) > n) {
        ++cut;
        return;
      }
      if (seen.emplace(w, true).second) {
        if (static_cast<std::int64_t>(seen.size()) > node_cap) {
          throw ResourceError("frontier enumeration exceeded its node cap");
        }
        todo.push(w);
      }
    });
  }
  return cut;
}

CoverAtlas::CoverAtlas(VoltageGraph graph, std::int64_t node_cap)
    : graph_(std::move(graph)), node_cap_(node_cap) {
  if (graph_.node_count < 1 || graph_.edges.empty()) {
    throw GeneratorError("cover atlas needs a nonempty graph");
  }
  const CoverVertex b = base();
  level_[b] = 1;
  pending_.push_back(b);
}

CoverVertex CoverAtlas::base() const {
  return CoverVertex{graph_.base_node, {0, 0, 0, 0}};
}

std::vector<CoverVertex> CoverAtlas::neighbors(const CoverVertex& v) const {
  std::vector<CoverVertex> out;
  out.reserve(2 * graph_.edges.size());
  for_each_neighbor(graph_, v, [&](const CoverVertex& w) { out.push_back(w); });
  return out;
}

void CoverAtlas::expand_one() {
  const CoverVertex v = pending_.front();
  pending_.pop_front();
  const std::int64_t lv = level_[v];
  for_each_neighbor(graph_, v, [&](const CoverVertex& w) {
    if (level_.emplace(w, lv + 1).second) {
      if (static_cast<std::int64_t>(level_.size()) > node_cap_) {
        throw ResourceError("cover atlas exceeded its node cap");
      }
      pending_.push_back(w);
    }
  });
}

std::int64_t CoverAtlas::level_of(const CoverVertex& v) {
  for (;;) {
    const auto it = level_.find(v);
    if (it != level_.end()) return it->second;
    if (pending_.empty()) {
      throw GeneratorError("vertex is not reachable in the declared cover");
    }
    expand_one();
  }
}

namespace {

std::vector<std::int64_t> custom_frontier_counts(const VoltageGraph& g,
                                                 std::int64_t n_max,
                                                 std::int64_t node_cap) {
  const auto level = bfs_levels(g, n_max + 1, node_cap);
  std::vector<std::int64_t> cut(static_cast<std::size_t>(n_max) + 1, 0);
  // A crossing edge joins consecutive levels; count it at its lower end.
  for (const auto& [v, lv] : level) {
    if (lv > n_max) continue;
    for_each_neighbor(g, v, [&](const CoverVertex& w) {
      const auto it = level.find(w);
      // Unvisited neighbors sit past max_level, hence above every counted n.
      const std::int64_t lw =
          it == level.end() ? n_max + 2 : it->second;
      if (lw > lv) cut[static_cast<std::size_t>(lv)] += 1;
    });
  }
  // An edge from level a to level a+1 leaves exactly the set X_a, so
  // cut[a] is already the answer; no shell accumulation needed.
  return cut;
}

double eval_rule(const CuffRule& rule, std::int64_t level,
                 std::int64_t index) {
  switch (rule.kind) {
    case CuffRule::Kind::Constant:
      return rule.c;
    case CuffRule::Kind::LinearOverExp:
      if (level > 1000) {
        throw DomainError("linear_over_exp level too deep for doubles");
      }
      return std::ldexp(static_cast<double>(level),
                        static_cast<int>(-(level + 1)));
    case CuffRule::Kind::PowerOverExp:
      return series::cantor_cuff_length(level, rule.r);
    case CuffRule::Kind::Table:
      if (level > static_cast<std::int64_t>(rule.table.size())) {
        throw IndexError("table rule has no level " + std::to_string(level));
      }
      return rule.table[static_cast<std::size_t>(level - 1)];
    case CuffRule::Kind::Expression:
      return checked_length(rule.expression(level, index), level);
  }
  throw DomainError("unknown cuff rule kind");
}

std::int64_t closed_frontier(Family family, std::int64_t n) {
  switch (family) {
    case Family::CantorTree:
      if (n + 1 >= 62) return std::numeric_limits<std::int64_t>::max();
      return std::int64_t{1} << (n + 1);
    case Family::GridZ2Cover:
      return 4 * n;
    case Family::LadderZCover:
      return 2;
    default:
      throw DomainError("no closed-form frontier for this family");
  }
}

}  // namespace

std::vector<ExhaustionLevel> exhaustion(const SurfaceSpec& spec,
                                        std::int64_t n_max) {
  if (n_max < 1) throw DomainError("exhaustion needs n_max >= 1");
  if (spec.family == Family::FiniteTable) {
    throw UnsupportedSurface(
        "finite_table surfaces have no infinite exhaustion");
  }

  std::vector<std::int64_t> custom_cuts;
  if (spec.family == Family::CustomPeriodic) {
    custom_cuts = custom_frontier_counts(*spec.graph, n_max, 2000000);
  }

  // Window heuristic anchored at level 1 for the bounded_pants flag.
  double c0 = 2.0;
  bool have_window = false;
  bool window_ok = true;
  try {
    const double l1 = eval_rule(spec.cuff_rule, 1, 0);
    c0 = std::max({2.0, l1, 1.0 / l1});
    have_window = true;
  } catch (const Error&) {
    have_window = false;
  }

  std::vector<ExhaustionLevel> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    ExhaustionLevel lvl;
    lvl.n = n;
    if (spec.family == Family::CustomPeriodic) {
      lvl.frontier_cuffs = custom_cuts[static_cast<std::size_t>(n)];
      if (lvl.frontier_cuffs == 0) {
        throw GeneratorError(
            "declared graph exhausted at level " + std::to_string(n) +
            "; finite graphs are out of scope");
      }
    } else {
      lvl.frontier_cuffs = closed_frontier(spec.family, n);
    }
    // Every shipped family declares all ends non-simple.
    lvl.q_n = lvl.frontier_cuffs;
    if (have_window && window_ok) {
      try {
        const double l = eval_rule(spec.cuff_rule, n, 0);
        if (!(l >= 1.0 / c0 && l <= c0)) window_ok = false;
      } catch (const IndexError&) {
        // Table ran out: the flag keeps its last value.
      }
    }
    lvl.bounded_pants = have_window && window_ok;
    out.push_back(lvl);
  }
  return out;
}

double cuff_length(const SurfaceSpec& spec, std::int64_t level,
                   std::int64_t index) {
  require_level(level);
  if (index < 0) throw IndexError("cuff index must be >= 0");
  const std::int64_t count = level_cuff_count(spec, level);
  if (index >= count) {
    std::ostringstream os;
    os << "cuff index " << index << " out of range at level " << level
       << " (count " << count << ")";
    throw IndexError(os.str());
  }
  return eval_rule(spec.cuff_rule, level, index);
}

std::int64_t level_cuff_count(const SurfaceSpec& spec, std::int64_t level) {
  require_level(level);
  switch (spec.family) {
    case Family::CantorTree:
    case Family::GridZ2Cover:
    case Family::LadderZCover:
      return closed_frontier(spec.family, level);
    case Family::CustomPeriodic: {
      const auto cuts = custom_frontier_counts(*spec.graph, level, 2000000);
      return cuts[static_cast<std::size_t>(level)];
    }
    case Family::FiniteTable:
      return 1;
  }
  throw DomainError("unknown family");
}

BoundedPantsReport is_bounded_pants(const SurfaceSpec& spec,
                                    std::int64_t probe_depth) {
  if (probe_depth < 1) throw DomainError("probe_depth must be >= 1");
  const CuffRule& rule = spec.cuff_rule;
  BoundedPantsReport rep;
  switch (rule.kind) {
    case CuffRule::Kind::Constant:
      rep.bounded = true;
      rep.proved = true;
      rep.min_length = rep.max_length = rule.c;
      return rep;
    case CuffRule::Kind::Table: {
      const auto [mn, mx] = std::minmax_element(rule.table.begin(),
                                                rule.table.end());
      rep.bounded = true;
      rep.proved = rule.declared_bounds.has_value();
      rep.min_length = rule.declared_bounds ? rule.declared_bounds->first : *mn;
      rep.max_length =
          rule.declared_bounds ? rule.declared_bounds->second : *mx;
      return rep;
    }
    case CuffRule::Kind::LinearOverExp:
    case CuffRule::Kind::PowerOverExp: {
      // l(n) -> 0, so no window survives; witness the first escape from the
      // window anchored at level 1.
      rep.bounded = false;
      rep.proved = true;
      const double l1 = eval_rule(rule, 1, 0);
      const double c0 = std::max({2.0, l1, 1.0 / l1});
      double mn = l1, mx = l1;
      for (std::int64_t n = 1; n <= 1000; ++n) {
        const double l = eval_rule(rule, n, 0);
        mn = std::min(mn, l);
        mx = std::max(mx, l);
        if (!(l >= 1.0 / c0 && l <= c0)) {
          rep.violation_level = n;
          break;
        }
      }
      rep.min_length = mn;
      rep.max_length = mx;
      return rep;
    }
    case CuffRule::Kind::Expression: {
      double mn = std::numeric_limits<double>::infinity(), mx = 0;
      for (std::int64_t n = 1; n <= probe_depth; ++n) {
        const double l = eval_rule(rule, n, 0);
        mn = std::min(mn, l);
        mx = std::max(mx, l);
      }
      rep.bounded = true;  // within the sampled window only
      rep.proved = false;
      rep.min_length = mn;
      rep.max_length = mx;
      return rep;
    }
  }
  throw DomainError("unknown cuff rule kind");
}

std::optional<double> certified_upper_length_bound(const SurfaceSpec& spec) {
  const CuffRule& rule = spec.cuff_rule;
  switch (rule.kind) {
    case CuffRule::Kind::Constant:
      return rule.c;
    case CuffRule::Kind::LinearOverExp:
      return 0.25;  // max n/2^(n+1), attained at n = 1 and 2
    case CuffRule::Kind::PowerOverExp: {
      // (n+1)^r/2^(n+1) peaks once the ratio (1+1/(n+1))^r / 2 drops
      // below 1 and never recovers; scan past that point.
      double best = 0;
      for (std::int64_t n = 1; n <= 2000000; ++n) {
        const double l = eval_rule(rule, n, 0);
        best = std::max(best, l);
        const double ratio =
            std::pow(1.0 + 1.0 / (static_cast<double>(n) + 1.0), rule.r) / 2.0;
        if (ratio < 1.0) return best;
      }
      return std::nullopt;
    }
    case CuffRule::Kind::Table:
      if (rule.declared_bounds) return rule.declared_bounds->second;
      return std::nullopt;
    case CuffRule::Kind::Expression:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

series::TermRule reciprocal_frontier_rule_impl(const SurfaceSpec& spec,
                                               std::int64_t probe_depth) {
  switch (spec.family) {
    case Family::CantorTree:
      // 1/2^(n+1) = (1/2) * (1/2)^n.
      return series::TermRule::poly_geometric(0.5, 0.0, 0.5);
    case Family::GridZ2Cover:
      return series::TermRule::power_shifted(0.25, 1.0);
    case Family::LadderZCover:
      return series::TermRule::constant(0.5);
    case Family::CustomPeriodic: {
      const auto cuts =
          custom_frontier_counts(*spec.graph, probe_depth, 2000000);
      std::vector<double> recip;
      recip.reserve(static_cast<std::size_t>(probe_depth));
      for (std::int64_t n = 1; n <= probe_depth; ++n) {
        const std::int64_t c = cuts[static_cast<std::size_t>(n)];
        if (c == 0) {
          throw GeneratorError("declared graph exhausted at level " +
                               std::to_string(n));
        }
        recip.push_back(1.0 / static_cast<double>(c));
      }
      return series::TermRule::from_table(std::move(recip));
    }
    case Family::FiniteTable:
      throw UnsupportedSurface("finite_table has no complexity sequence");
  }
  throw DomainError("unknown family");
}

}  // namespace

series::TermRule complexity_reciprocal_rule(const SurfaceSpec& spec,
                                            std::int64_t probe_depth) {
  // q(n) = frontier_cuffs(n) for every shipped family (all ends declared
  // non-simple), so the two reciprocal rules coincide.
  return reciprocal_frontier_rule_impl(spec, probe_depth);
}

series::TermRule frontier_reciprocal_rule(const SurfaceSpec& spec,
                                          std::int64_t probe_depth) {
  return reciprocal_frontier_rule_impl(spec, probe_depth);
}

series::TermRule reciprocal_length_rule(const CuffRule& rule,
                                        std::int64_t probe_depth) {
  switch (rule.kind) {
    case CuffRule::Kind::Constant:
      return series::TermRule::constant(1.0 / rule.c);
    case CuffRule::Kind::LinearOverExp:
      // 2^(n+1)/n = 2 * n^(-1) * 2^n.
      return series::TermRule::poly_geometric(2.0, -1.0, 2.0);
    case CuffRule::Kind::PowerOverExp:
      // 2^(n+1)/(n+1)^r = 2 * (n+1)^(-r) * 2^n.
      return series::TermRule::poly_geometric(2.0, -rule.r, 2.0, 1.0);
    case CuffRule::Kind::Table: {
      std::vector<double> recip;
      const std::int64_t depth = std::min<std::int64_t>(
          probe_depth, static_cast<std::int64_t>(rule.table.size()));
      recip.reserve(static_cast<std::size_t>(depth));
      for (std::int64_t n = 1; n <= depth; ++n) {
        recip.push_back(1.0 / rule.table[static_cast<std::size_t>(n - 1)]);
      }
      return series::TermRule::from_table(std::move(recip));
    }
    case CuffRule::Kind::Expression:
      throw DomainError("expression rules have no symbolic reciprocal");
  }
  throw DomainError("unknown cuff rule kind");
}

}  // namespace pantslab::surface
