#include "pantslab/hyptrig.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pantslab/errors.hpp"

namespace pantslab::hyptrig {

namespace {

void check_arg(double v, const char* what) {
  if (!(v > kMinArg && v < kMaxArg)) {  // also rejects NaN
    std::ostringstream os;
    os << what << " = " << v << " outside (" << kMinArg << ", " << kMaxArg
       << ")";
    throw DomainError(os.str());
  }
}

// acosh(1 + y) for y >= 0 without the cancellation of forming 1 + y first.
double acosh1p(double y) { return std::log1p(y + std::sqrt(y * (y + 2.0))); }

// coth(u) coth(v) - 1 = cosh(u - v) / (sinh u sinh v): every factor is
// positive, so the excess over 1 survives even when both coths round to 1.
double coth_product_excess(double u, double v) {
  return std::cosh(u - v) / (std::sinh(u) * std::sinh(v));
}

double rel_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

}  // namespace

HexagonGeometry hexagon_geometry(double l_in, double l_out) {
  const double q = l_in / 4.0;   // quarter of the interior cuff
  const double h = l_out / 2.0;  // half of an outer cuff
  check_arg(q, "l_in/4");
  check_arg(h, "l_out/2");

  HexagonGeometry g;
  g.l_in = l_in;
  g.l_out = l_out;

  // cosh o12 = coth q coth h, kept as 1 + y with y computed cancellation-free.
  const double y = coth_product_excess(q, h);
  g.o12 = acosh1p(y);
  const double sinh_o12 = std::sqrt(y * (y + 2.0));
  const double cosh_o12 = 1.0 + y;

  // cosh a = sinh o12 sinh q.
  const double cosh_a = sinh_o12 * std::sinh(q);
  if (cosh_a < 1.0) {
    throw NumericalError("hexagon side a degenerated below its domain");
  }
  g.a = acosh1p(cosh_a - 1.0);

  // cosh(o23/2) = coth a coth h.
  g.o23 = 2.0 * acosh1p(coth_product_excess(g.a, h));

  // Foot of the perpendicular along o12.  With K = tanh h / tanh q the two
  // quadrilateral identities combine to tanh t = N / D where
  //   N = K cosh o12 - 1 = coth(q)^2 - 1 = 1 / sinh(q)^2,
  //   D = K sinh o12,
  // and t = (1/2) log((D + N)/(D - N)).  D - N = 1 - K e^{-o12} is rewritten
  // as (E tanh q - tanh h) / (E tanh q), E = cosh o12 + sinh o12, whose
  // numerator stays near 2 coth h - tanh h >= 1, so no cancellation.
  const double tanh_q = std::tanh(q);
  const double tanh_h = std::tanh(h);
  const double K = tanh_h / tanh_q;
  const double E = cosh_o12 + sinh_o12;
  const double N_t = 1.0 / (std::sinh(q) * std::sinh(q));
  const double D_t = K * sinh_o12;
  const double DmN_t = (E * tanh_q - tanh_h) / (E * tanh_q);
  g.t = 0.5 * std::log((D_t + N_t) / DmN_t);

  // Mirrored form for the gap o12 - t (swap the cuff roles).
  const double N_g = 1.0 / (std::sinh(h) * std::sinh(h));
  const double D_g = sinh_o12 / K;
  const double DmN_g = (E * tanh_h - tanh_q) / (E * tanh_h);
  g.gap = 0.5 * std::log((D_g + N_g) / DmN_g);

  // One Newton step on F(t) = cosh t - K cosh(o12 - t) polishes t.
  {
    const double F = std::cosh(g.t) - K * std::cosh(g.o12 - g.t);
    const double dF = std::sinh(g.t) + K * std::sinh(g.o12 - g.t);
    if (dF > 0) g.t -= F / dF;
  }

  // b from whichever quadrilateral identity sits farther from tanh b = 1.
  const double x1 = std::cosh(g.t) * tanh_q;
  const double x2 = std::cosh(g.gap) * tanh_h;
  const double x = std::min(x1, x2);
  if (!(x < 1.0)) {
    throw NumericalError("perpendicular foot degenerated (tanh b >= 1)");
  }
  g.b = std::atanh(x);

  const double tanh_b = std::tanh(g.b);
  const double coth_q = 1.0 / tanh_q;
  const double coth_h = 1.0 / tanh_h;
  const double coth_a = 1.0 / std::tanh(g.a);
  double worst = rel_residual(std::cosh(g.o12), coth_q * coth_h);
  worst = std::max(worst, rel_residual(std::cosh(g.a),
                                       std::sinh(g.o12) * std::sinh(q)));
  worst = std::max(worst,
                   rel_residual(std::cosh(g.o23 / 2.0), coth_a * coth_h));
  worst = std::max(worst, rel_residual(std::cosh(g.t), tanh_b * coth_q));
  worst = std::max(worst, rel_residual(std::cosh(g.gap), tanh_b * coth_h));
  // t and gap come from independent closed forms; they must reassemble o12.
  worst = std::max(worst, rel_residual(g.t + g.gap, g.o12));
  g.max_residual = worst;
  if (!(worst < kResidualTol)) {
    std::ostringstream os;
    os << "hexagon residual " << worst << " exceeds " << kResidualTol;
    throw NumericalError(os.str());
  }
  return g;
}

double foot_gap(double l_in, double l_out) {
  return hexagon_geometry(l_in, l_out).gap;
}

CollarData collar(double cuff_length) {
  if (!(cuff_length > kMinArg && cuff_length <= kMaxArg)) {
    std::ostringstream os;
    os << "cuff length " << cuff_length << " outside (" << kMinArg << ", "
       << kMaxArg << "]";
    throw DomainError(os.str());
  }
  CollarData c;
  c.cuff_length = cuff_length;
  const double s = std::sinh(cuff_length / 2.0);
  c.half_width = std::asinh(1.0 / s);
  // sinh(half_width) = 1/s exactly, so the arctan takes 1/s directly.
  c.annulus_modulus = (2.0 / cuff_length) * std::atan(1.0 / s);
  c.connecting_family_modulus = 1.0 / c.annulus_modulus;
  return c;
}

double collar_slope_bound(double l_max) {
  if (!(l_max > kMinArg && l_max <= kMaxArg)) {
    throw DomainError("slope bound is provided for l_max in (1e-12, 50]");
  }
  // l -> connecting_family_modulus(l) / l is increasing, so the right
  // endpoint gives the slope constant for the whole interval.
  const CollarData c = collar(l_max);
  return c.connecting_family_modulus / l_max;
}

}  // namespace pantslab::hyptrig
