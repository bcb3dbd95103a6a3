#include "pantslab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pantslab/errors.hpp"

namespace pantslab::extremal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

Annulus::Annulus(double r1_, double r2_) : r1(r1_), r2(r2_) {
  if (std::isnan(r1) || std::isnan(r2) || r1 < 0 || !(r1 < r2)) {
    throw DomainError("annulus needs radii 0 <= r1 < r2");
  }
}

double annulus_modulus(const Annulus& a) {
  if (a.r1 == 0 || a.r2 == kInf) return kInf;
  return std::log(a.r2 / a.r1) / kTwoPi;
}

double cylinder_modulus(double height, double circumference) {
  if (!(height > 0) || !(circumference > 0) || !std::isfinite(height) ||
      !std::isfinite(circumference)) {
    throw DomainError("cylinder needs positive finite height and length");
  }
  return height / circumference;
}

double ext_scale(double r, double ext) {
  if (!(r > 0) || !(ext > 0) || !std::isfinite(r) || !std::isfinite(ext)) {
    throw DomainError("ext_scale needs positive finite arguments");
  }
  return r * r * ext;
}

std::pair<double, double> qc_modulus_bounds(double K, double mod) {
  if (!(K >= 1) || !std::isfinite(K)) {
    throw DomainError("quasiconformal constant must satisfy K >= 1");
  }
  if (!(mod > 0) || !std::isfinite(mod)) {
    throw DomainError("modulus must be positive and finite");
  }
  return {mod / K, K * mod};
}

double kerckhoff_lower_bound(const ExtSample& sample) {
  if (sample.pairs.empty()) {
    throw ValidationError("empty extremal-length sample");
  }
  double best = 1.0;
  for (const auto& [ey, ez] : sample.pairs) {
    if (!(ey > 0) || !(ez > 0) || !std::isfinite(ey) || !std::isfinite(ez)) {
      throw DomainError("extremal-length entries must be positive finite");
    }
    const double ratio = ez / ey;
    best = std::max({best, ratio, 1.0 / ratio});
  }
  return 0.5 * std::log(best);
}

}  // namespace pantslab::extremal
