#include "pantslab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <thread>

#include "pantslab/errors.hpp"

namespace pantslab::probe {

using surface::Family;

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// splitmix64 stream; trial substreams are seeded through two avalanche
// rounds of (seed, trial) rather than additive offsets, which would make
// consecutive trials share most of their stream.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
  }
  // Unbiased draw in [0, k) by rejection.
  std::uint64_t below(std::uint64_t k) {
    const std::uint64_t limit = k * (UINT64_MAX / k);
    for (;;) {
      const std::uint64_t x = next();
      if (x < limit) return x % k;
    }
  }
  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial) {
  const std::uint64_t a = mix64(seed ^ 0xA0761D6478BD642FULL);
  return mix64(a ^ (static_cast<std::uint64_t>(trial) + 1) *
                       0xE7037ED1A0B428DBULL);
}

double edge_weight(const std::function<double(std::int64_t)>& conductance,
                   std::int64_t deeper_level) {
  if (!conductance) return 1.0;
  const double w = conductance(deeper_level);
  if (!std::isfinite(w) || !(w > 0)) {
    throw GeneratorError("conductance rule must return positive finite values");
  }
  return w;
}

struct TrialResult {
  bool returned = false;
  std::int64_t max_level = 1;
};

// Depth process of the walk on the 3-regular tree: the base has three
// deeper neighbors; every other vertex has one shallower and two deeper.
TrialResult walk_cantor(const WalkConfig& cfg, SplitMix64& rng) {
  TrialResult res;
  std::int64_t depth = 0;
  for (std::int64_t s = 0; s < cfg.steps; ++s) {
    if (depth == 0) {
      depth = 1;
    } else {
      const double up = edge_weight(cfg.conductance, depth);
      const double down = 2.0 * edge_weight(cfg.conductance, depth + 1);
      depth += rng.unit() * (up + down) < up ? -1 : 1;
    }
    res.max_level = std::max(res.max_level, depth + 1);
    if (depth == 0) res.returned = true;
  }
  return res;
}

TrialResult walk_ladder(const WalkConfig& cfg, SplitMix64& rng) {
  TrialResult res;
  std::int64_t x = 0;
  for (std::int64_t s = 0; s < cfg.steps; ++s) {
    const double left = edge_weight(
        cfg.conductance, std::max(std::abs(x - 1), std::abs(x)) + 1);
    const double right = edge_weight(
        cfg.conductance, std::max(std::abs(x + 1), std::abs(x)) + 1);
    x += rng.unit() * (left + right) < left ? -1 : 1;
    res.max_level = std::max(res.max_level, std::abs(x) + 1);
    if (x == 0) res.returned = true;
  }
  return res;
}

TrialResult walk_grid(const WalkConfig& cfg, SplitMix64& rng) {
  TrialResult res;
  std::int64_t i = 0, j = 0;
  const std::int64_t di[4] = {1, -1, 0, 0};
  const std::int64_t dj[4] = {0, 0, 1, -1};
  std::int64_t level_here = 1;
  for (std::int64_t s = 0; s < cfg.steps; ++s) {
    int pick = 0;
    if (!cfg.conductance) {
      pick = static_cast<int>(rng.below(4));
    } else {
      double w[4], total = 0;
      for (int k = 0; k < 4; ++k) {
        const std::int64_t lw = surface::grid_axis_layer(i + di[k], j + dj[k]);
        w[k] = edge_weight(cfg.conductance, std::max(level_here, lw));
        total += w[k];
      }
      double u = rng.unit() * total;
      while (pick < 3 && u >= w[pick]) u -= w[pick], ++pick;
    }
    i += di[pick];
    j += dj[pick];
    level_here = surface::grid_axis_layer(i, j);
    res.max_level = std::max(res.max_level, level_here);
    if (i == 0 && j == 0) res.returned = true;
  }
  return res;
}

TrialResult walk_custom(const WalkConfig& cfg, surface::CoverAtlas& atlas,
                        SplitMix64& rng) {
  TrialResult res;
  surface::CoverVertex v = atlas.base();
  const surface::CoverVertex base = v;
  std::int64_t level_v = 1;
  for (std::int64_t s = 0; s < cfg.steps; ++s) {
    const auto nbrs = atlas.neighbors(v);
    if (nbrs.empty()) {
      throw GeneratorError("walk reached a vertex with no neighbors");
    }
    std::size_t pick = 0;
    if (!cfg.conductance) {
      pick = static_cast<std::size_t>(rng.below(nbrs.size()));
    } else {
      std::vector<double> w(nbrs.size());
      double total = 0;
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        w[k] = edge_weight(cfg.conductance,
                           std::max(level_v, atlas.level_of(nbrs[k])));
        total += w[k];
      }
      double u = rng.unit() * total;
      while (pick + 1 < nbrs.size() && u >= w[pick]) u -= w[pick], ++pick;
    }
    v = nbrs[pick];
    level_v = atlas.level_of(v);
    res.max_level = std::max(res.max_level, level_v);
    if (v == base) res.returned = true;
  }
  return res;
}

int thread_budget(std::int64_t trials) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  // An explicit PANTSLAB_THREADS wins over the hardware guess (results are
  // byte-identical either way; only wall time changes).
  if (const char* env = std::getenv("PANTSLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) budget = cap;
  }
  return static_cast<int>(
      std::min<std::int64_t>(budget, std::max<std::int64_t>(trials, 1)));
}

}  // namespace

WalkReport run_walk(const WalkConfig& config) {
  if (config.steps < 1) throw ValidationError("walk needs steps >= 1");
  if (config.trials < 1) throw ValidationError("walk needs trials >= 1");
  if (config.spec.family == Family::FiniteTable) {
    throw UnsupportedSurface("finite_table surfaces have no walk model");
  }

  WalkReport rep;
  rep.steps = config.steps;
  rep.trials = config.trials;
  rep.seed = config.seed;
  rep.returned.assign(static_cast<std::size_t>(config.trials), 0);
  rep.max_levels.assign(static_cast<std::size_t>(config.trials), 1);

  const bool custom = config.spec.family == Family::CustomPeriodic;
  std::optional<surface::CoverAtlas> atlas;
  if (custom) atlas.emplace(*config.spec.graph);

  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t) {
      SplitMix64 rng(trial_seed(config.seed, t));
      TrialResult r;
      switch (config.spec.family) {
        case Family::CantorTree:
          r = walk_cantor(config, rng);
          break;
        case Family::LadderZCover:
          r = walk_ladder(config, rng);
          break;
        case Family::GridZ2Cover:
          r = walk_grid(config, rng);
          break;
        case Family::CustomPeriodic:
          r = walk_custom(config, *atlas, rng);
          break;
        case Family::FiniteTable:
          break;
      }
      rep.returned[static_cast<std::size_t>(t)] = r.returned ? 1 : 0;
      rep.max_levels[static_cast<std::size_t>(t)] = r.max_level;
    }
  };

  // The lazy atlas mutates shared state, so custom walks stay on one thread.
  const int threads = custom ? 1 : thread_budget(config.trials);
  if (threads <= 1) {
    run_range(0, config.trials);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::int64_t chunk = (config.trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min<std::int64_t>(lo + chunk,
                                                     config.trials);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        try {
          run_range(lo, hi);
        } catch (...) {
          const std::lock_guard<std::mutex> g(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::int64_t hits = 0, level_sum = 0;
  for (std::size_t t = 0; t < rep.returned.size(); ++t) {
    hits += rep.returned[t];
    level_sum += rep.max_levels[t];
  }
  rep.return_fraction =
      static_cast<double>(hits) / static_cast<double>(config.trials);
  rep.mean_max_level =
      static_cast<double>(level_sum) / static_cast<double>(config.trials);

  std::vector<std::int64_t> sorted = rep.max_levels;
  std::sort(sorted.begin(), sorted.end());
  for (double p : {0.5, 0.9, 0.99}) {
    // Nearest-rank quantile.
    const auto rank = static_cast<std::size_t>(std::min<double>(
        std::ceil(p * static_cast<double>(sorted.size())),
        static_cast<double>(sorted.size())));
    rep.escape_quantiles.emplace_back(
        p, static_cast<double>(sorted[rank == 0 ? 0 : rank - 1]));
  }
  return rep;
}

}  // namespace pantslab::probe
