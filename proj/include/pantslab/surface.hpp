#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pantslab/series.hpp"

namespace pantslab::surface {

enum class Family {
  CantorTree,
  LadderZCover,
  GridZ2Cover,
  CustomPeriodic,
  FiniteTable,
};

std::string to_string(Family f);
Family family_from_string(const std::string& name);  // ValidationError

// Per-level cuff length law.  Levels are 1-based; power_over_exp gives
// (n+1)^r / 2^(n+1) and linear_over_exp gives n / 2^(n+1).
struct CuffRule {
  enum class Kind { Constant, LinearOverExp, PowerOverExp, Table, Expression };

  Kind kind = Kind::Constant;
  double c = 0;
  double r = 0;
  std::vector<double> table;
  std::optional<std::pair<double, double>> declared_bounds;  // Table only
  std::function<double(std::int64_t level, std::int64_t index)> expression;

  static CuffRule constant(double c);
  static CuffRule linear_over_exp();
  static CuffRule power_over_exp(double r);
  static CuffRule from_table(
      std::vector<double> lengths,
      std::optional<std::pair<double, double>> declared_bounds = std::nullopt);
  static CuffRule from_expression(
      std::function<double(std::int64_t, std::int64_t)> fn);

  std::string describe() const;
};

// Finite quotient graph with Z^d edge shifts (d <= 4); the infinite pants
// graph is its cover.  Models custom periodic families: the base node at
// offset 0 is the walk/exhaustion origin.
struct VoltageGraph {
  struct Edge {
    std::int32_t from = 0;
    std::int32_t to = 0;
    std::array<std::int32_t, 4> shift{0, 0, 0, 0};
  };
  std::int32_t node_count = 1;
  std::int32_t dim = 0;
  std::int32_t base_node = 0;
  std::vector<Edge> edges;
};

struct SurfaceSpec {
  Family family = Family::CantorTree;
  CuffRule cuff_rule;
  std::string label;
  std::optional<VoltageGraph> graph;  // CustomPeriodic only

  // Validates family/rule consistency (GeneratorError / ValidationError).
  static SurfaceSpec make(Family family, CuffRule rule, std::string label = "",
                          std::optional<VoltageGraph> graph = std::nullopt);
};

struct ExhaustionLevel {
  std::int64_t n = 0;
  std::int64_t frontier_cuffs = 0;
  std::int64_t q_n = 0;       // frontier cuffs facing non-simple ends
  bool bounded_pants = true;  // window heuristic held through this level
};

// Levels 1..n_max.  Closed forms: cantor 2^(n+1), grid 4n (axis-first
// exhaustion), ladder 2; custom_periodic runs the generic frontier
// enumerator on the declared graph.  All shipped families declare every
// end non-simple, so q_n = frontier_cuffs.
std::vector<ExhaustionLevel> exhaustion(const SurfaceSpec& spec,
                                        std::int64_t n_max);

// Generic frontier enumerator: cut size between {level <= n} and the rest
// of the cover of `g` under `level_of` (1-based).  Exposed so the grid
// closed form can be replayed through the generic path.
std::int64_t frontier_cut(
    const VoltageGraph& g,
    const std::function<std::int64_t(const std::array<std::int32_t, 4>&,
                                     std::int32_t)>& level_of,
    std::int64_t n, std::int64_t node_cap = 2000000);

// The axis-first exhaustion layer of lattice site (i, j): 1 at the origin,
// 2i on the +-x axis, 2j+1 on the +-y axis, and one step after both
// toward-origin neighbors off-axis.  Realizes a 4n cut on the grid family.
std::int64_t grid_axis_layer(std::int64_t i, std::int64_t j);

// Vertex of the periodic cover: quotient node plus Z^d offset.
struct CoverVertex {
  std::int32_t node = 0;
  std::array<std::int32_t, 4> off{0, 0, 0, 0};
  bool operator==(const CoverVertex& o) const {
    return node == o.node && off == o.off;
  }
};

struct CoverVertexHash {
  std::size_t operator()(const CoverVertex& v) const;
};

// Lazy breadth-first atlas of a voltage-graph cover: exposes neighbor lists
// and exhaustion levels (base = 1), expanding shell by shell on demand.
// Exceeding the node cap throws ResourceError.
class CoverAtlas {
 public:
  explicit CoverAtlas(VoltageGraph graph, std::int64_t node_cap = 2000000);

  CoverVertex base() const;
  std::vector<CoverVertex> neighbors(const CoverVertex& v) const;
  std::int64_t level_of(const CoverVertex& v);

 private:
  void expand_one();

  VoltageGraph graph_;
  std::int64_t node_cap_;
  std::unordered_map<CoverVertex, std::int64_t, CoverVertexHash> level_;
  std::deque<CoverVertex> pending_;  // discovered, neighbors not yet expanded
};

double cuff_length(const SurfaceSpec& spec, std::int64_t level,
                   std::int64_t index);

// Cuffs at one level (index bound for cuff_length); custom_periodic counts
// via the enumerator, so keep n modest there.
std::int64_t level_cuff_count(const SurfaceSpec& spec, std::int64_t level);

struct BoundedPantsReport {
  bool bounded = false;
  bool proved = false;  // false = sampled evidence only
  double min_length = 0;
  double max_length = 0;
  std::optional<std::int64_t> violation_level;
};

// Certifies 1/C <= l <= C where the rule's algebra allows it (constant,
// table with declared bounds); decaying rules are disproved with the first
// level leaving the window anchored at level 1; opaque rules are sampled.
BoundedPantsReport is_bounded_pants(const SurfaceSpec& spec,
                                    std::int64_t probe_depth);

// Certifies l(n) <= bound for all n >= 1 where possible (upper-bound
// hypothesis of the weighted necessary condition).
std::optional<double> certified_upper_length_bound(const SurfaceSpec& spec);

// 1/q(n) as a symbolic rule: cantor (1/2)(1/2)^n, grid (1/4)/n, ladder 1/2;
// custom_periodic returns a probed table (inconclusive by construction).
series::TermRule complexity_reciprocal_rule(const SurfaceSpec& spec,
                                            std::int64_t probe_depth);

// 1/frontier_cuffs(n) as a symbolic rule (same shapes as above).
series::TermRule frontier_reciprocal_rule(const SurfaceSpec& spec,
                                          std::int64_t probe_depth);

// 1/l(n) as a symbolic rule where representable (DomainError otherwise).
series::TermRule reciprocal_length_rule(const CuffRule& rule,
                                        std::int64_t probe_depth);

}  // namespace pantslab::surface
