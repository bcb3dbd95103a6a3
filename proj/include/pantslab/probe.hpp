#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pantslab/surface.hpp"

namespace pantslab::probe {

// Random walk on the pants adjacency graph.  Heuristic only: graph
// recurrence tracks surface parabolicity just under bounded geometry, and
// decaying cuffs can flip the true answer relative to graph intuition.
struct WalkConfig {
  surface::SurfaceSpec spec;
  std::int64_t steps = 1;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  // Edge conductance by the deeper endpoint's exhaustion level; empty means
  // uniform.  Experimentation hook with no theoretical claim attached.
  std::function<double(std::int64_t level)> conductance;
};

struct WalkReport {
  std::int64_t steps = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double return_fraction = 0;  // trials that revisited the base pants
  double mean_max_level = 0;
  // (probability, nearest-rank value) over per-trial max levels.
  std::vector<std::pair<double, double>> escape_quantiles;
  // Per-trial rows for CSV emission, indexed by trial.
  std::vector<std::uint8_t> returned;
  std::vector<std::int64_t> max_levels;
  std::string note = "heuristic";
};

// Deterministic for a fixed config: per-trial substreams are derived from
// (seed, trial), and aggregation is integer-exact, so the report is
// byte-identical regardless of thread count.  PANTSLAB_THREADS caps the
// worker count; custom_periodic walks run single-threaded (the lazy cover
// atlas is shared state).
WalkReport run_walk(const WalkConfig& config);

}  // namespace pantslab::probe
