#pragma once

namespace pantslab::hyptrig {

// Hyperbolic arguments l_in/4 and l_out/2 must sit strictly inside this
// range; outside it the double-precision identities degrade past repair.
inline constexpr double kMinArg = 1e-12;
inline constexpr double kMaxArg = 50.0;

// Worst permitted relative residual over the defining identities.
inline constexpr double kResidualTol = 1e-10;

// Geometry of (half of) a symmetric pair of pants: one interior cuff of
// length l_in and two outer cuffs of length l_out, split along the
// orthogeodesics of its right-angled hexagon.
//
//   o12  interior-to-outer orthogeodesic:  cosh o12 = coth(l_in/4) coth(l_out/2)
//   a    interior-to-o23 orthogeodesic:    cosh a   = sinh(o12) sinh(l_in/4)
//   o23  outer-to-outer orthogeodesic:     cosh(o23/2) = coth(a) coth(l_out/2)
//   t    foot along o12 of the common perpendicular from the interior side:
//          cosh t = tanh(b) coth(l_in/4),  cosh(o12 - t) = tanh(b) coth(l_out/2)
//   b    length of that perpendicular
//   gap  o12 - t, the stretch of o12 on the outer-cuff side of the foot
struct HexagonGeometry {
  double l_in = 0;
  double l_out = 0;
  double o12 = 0;
  double o23 = 0;
  double a = 0;
  double t = 0;
  double b = 0;
  double gap = 0;
  double max_residual = 0;  // worst relative residual among the identities
};

// Solves the hexagon system.  Throws DomainError when an argument leaves
// (kMinArg, kMaxArg) and NumericalError when a residual exceeds kResidualTol
// or a configuration degenerates in double precision.
HexagonGeometry hexagon_geometry(double l_in, double l_out);

// The gap o12 - t alone, by its own closed form (stable when t ~ o12).
double foot_gap(double l_in, double l_out);

struct CollarData {
  double cuff_length = 0;
  double half_width = 0;       // arcsinh(1 / sinh(l/2))
  double annulus_modulus = 0;  // (2/l) arctan(sinh(half_width))
  double connecting_family_modulus = 0;  // reciprocal of annulus_modulus
};

// Standard collar of an l-cuff.  Valid for l in (kMinArg, kMaxArg]; the
// closed endpoint keeps the documented global slope constant computable.
CollarData collar(double cuff_length);

// connecting_family_modulus <= slope * l on (0, l_max]; the small-cuff
// constant 0.35 is valid up to l = 0.25, and collar_slope_bound gives the
// tight value for any l_max <= 50 (l -> connecting_family_modulus / l grows).
inline constexpr double kCollarSlopeSmall = 0.35;
inline constexpr double kCollarSlopeSmallMaxLength = 0.25;
double collar_slope_bound(double l_max);

}  // namespace pantslab::hyptrig
