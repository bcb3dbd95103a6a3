#pragma once

#include <utility>
#include <vector>

namespace pantslab::extremal {

// Round annulus {z : r1 <= |z| < r2}, 0 <= r1 < r2 <= +inf.
struct Annulus {
  double r1 = 0;
  double r2 = 0;
  Annulus(double r1_, double r2_);
};

// Conformal modulus (1/2pi) log(r2/r1); +inf when r1 = 0 or r2 = inf.
double annulus_modulus(const Annulus& a);

// Flat cylinder of the given height and circumference: mod = h/l.
double cylinder_modulus(double height, double circumference);

// Extremal length scales quadratically under curve weighting.
double ext_scale(double r, double ext);

// Modulus bounds under a K-quasiconformal map: [mod/K, K*mod].
std::pair<double, double> qc_modulus_bounds(double K, double mod);

// Finite sample of extremal lengths of matched curves on two surfaces.
struct ExtSample {
  // (ext on Y, ext on Z) per sampled curve.
  std::vector<std::pair<double, double>> pairs;
};

// (1/2) log max over pairs of max(ratio, 1/ratio).  A certified lower bound
// for the Teichmuller distance: the true distance is a supremum over all
// simple closed curves, which no finite sample exhausts.  Symmetrizing each
// pair keeps the bound a metric quantity (and nonnegative).
double kerckhoff_lower_bound(const ExtSample& sample);

}  // namespace pantslab::extremal
