#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pantslab/series.hpp"

namespace pantslab::foliation {

// Euclidean trapezoid {0 <= x <= h, 0 <= y <= g(x)} with g(x) = a + (b-a)x/h,
// carrying the leaf function v(x,y) = a*y/g(x).  The shape constant C pins
// the gradient bound: 1 <= b/a <= C and h/b >= C.
struct TrapezoidPatch {
  double a = 0;
  double b = 0;
  double h = 0;
  double C = 1;

  TrapezoidPatch(double a, double b, double h, double C);
  // Tightest admissible C = max(1, b/a); throws when no C fits (h < C*b).
  static TrapezoidPatch with_min_shape(double a, double b, double h);
};

// Rectangle [0,width] x [0,height] with leaf function v(x,y) = y.
struct RectanglePatch {
  double width = 0;
  double height = 0;
  RectanglePatch(double width, double height);
};

// v(x,y) = a*y/g(x); constant along the straight leaves y = s*g(x).
double trapezoid_leaf_value(const TrapezoidPatch& p, double x, double y);

// Pointwise bound M1(C) = (C-1)^2/C^2 + 1 on |grad v|^2 over the patch.
double trapezoid_gradient_sq_sup(const TrapezoidPatch& p);

// Dirichlet integral of v: closed form
//   a^2 (1 + (b-a)^2/(3h^2)) (h/(b-a)) ln(b/a),   a*h when a = b,
// written via log1p for stability when b ~ a.
double trapezoid_energy_closed(const TrapezoidPatch& p);

// Same integral by adaptive 2D quadrature (leaf-aligned change of variables,
// nested Gauss rules, worst-cell refinement).  Throws NumericalError when
// the subdivision cap is hit before reaching rel_tol.
double trapezoid_energy_quadrature(const TrapezoidPatch& p,
                                   double rel_tol = 1e-10);

// Primary value: the closed form, cross-checked against the quadrature to
// 1e-9 relative (NumericalError on disagreement).
double trapezoid_energy(const TrapezoidPatch& p);

// width * height exactly (|grad v|^2 == 1).
double rectangle_energy(const RectanglePatch& p);

// Energy bookkeeping for one symmetric pair of pants, assembled from four
// pentagon strips: rectangle [0,t] x [0, l_in/4] plus trapezoid with bases
// l_in/4, l_out/2 and height o12 - t, per strip.
struct PantsEnergy {
  std::int64_t level = 0;  // 0 when built outside a series context
  double l_in = 0;
  double l_out = 0;
  double raw_energy = 0;   // unscaled Dirichlet energy, all four strips
  double measure_in = 0;   // transverse measure on the interior cuff
  double measure_out = 0;  // on each outer cuff; in/2 before scaling
  double scale = 1.0;
  double scaled_energy = 0;  // scale^2 * raw_energy
};

// Builds the pants foliation energy.  Admissibility: foot gap >= l_out/2
// and the trapezoid shape window must be nonempty (l_in/4 <= l_out/2 and
// gap >= C * l_out/2 for C = max(1, 2*l_out/l_in)); AdmissibilityError
// otherwise.  Hexagon guard errors propagate.
PantsEnergy pants_energy(double l_in, double l_out);

// Applies the foliation scaling: multiplies measures by s and the energy
// by s^2 (composes with any scaling already applied).
PantsEnergy scale_pants(const PantsEnergy& pe, double s);

enum class SeriesMode { Asymptotic, Exact };
enum class SeriesVerdictKind { Converges, Diverges, Inconclusive };

// A divergent series is witnessed by the first level whose partial sum
// clears this threshold.
inline constexpr double kDivergenceWitnessThreshold = 10.0;

struct EnergySeries {
  SeriesMode mode = SeriesMode::Asymptotic;
  double r = 0;
  std::vector<std::int64_t> levels;  // computed rows only
  std::vector<double> terms;
  std::vector<double> partial_sums;
  double tail_bound = 0;        // +inf unless Converges
  bool tail_empirical = false;  // exact mode: bracket constant is measured
  SeriesVerdictKind verdict = SeriesVerdictKind::Inconclusive;
  std::optional<std::int64_t> witness_n;  // Diverges: partial sum > threshold
  std::vector<std::int64_t> skipped_levels;  // exact mode: inadmissible
  std::optional<std::int64_t> first_admissible;
  std::optional<series::Certificate> certificate;
};

// Per-level energy series of the Cantor-tree foliation with cuff lengths
// l_n = (n+1)^r / 2^(n+1), summed from level 2.
//   Asymptotic mode: t_n = (1/(2^n l_n)) log(1/l_n), clamped at 0 while
//     l_n >= 1; certified verdict and tail from the series module.
//   Exact mode: t_n = 2^n * (1/(2^n l_{n-1}))^2 * pants raw energy at level
//     n; inadmissible levels are skipped and reported; the verdict carries
//     over from the asymptotic rule and the tail is the measured
//     exact/asymptotic ratio times the certified asymptotic tail.
EnergySeries cantor_energy_series(double r, std::int64_t n_max,
                                  SeriesMode mode);

}  // namespace pantslab::foliation
