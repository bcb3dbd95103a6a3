#include "pantslab/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "pantslab/errors.hpp"
#include "pantslab/hyptrig.hpp"

namespace pantslab::foliation {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " = " << v << " must be positive and finite";
    throw DomainError(os.str());
  }
}

}  // namespace

TrapezoidPatch::TrapezoidPatch(double a_, double b_, double h_, double C_)
    : a(a_), b(b_), h(h_), C(C_) {
  require_positive(a, "base a");
  require_positive(b, "base b");
  require_positive(h, "height h");
  if (!(C >= 1.0) || !std::isfinite(C)) {
    throw DomainError("shape constant C must be >= 1 and finite");
  }
  // One part in 1e12 of slack so a C computed as b/a is not lost to rounding.
  const double tol = 1.0 + 1e-12;
  if (!(a <= b * tol)) throw DomainError("trapezoid needs a <= b");
  if (!(b <= C * a * tol)) throw DomainError("trapezoid needs b <= C*a");
  if (!(h * tol >= C * b)) throw DomainError("trapezoid needs h >= C*b");
}

TrapezoidPatch TrapezoidPatch::with_min_shape(double a, double b, double h) {
  require_positive(a, "base a");
  require_positive(b, "base b");
  return TrapezoidPatch(a, b, h, std::max(1.0, b / a));
}

RectanglePatch::RectanglePatch(double width_, double height_)
    : width(width_), height(height_) {
  require_positive(width, "width");
  require_positive(height, "height");
}

double trapezoid_leaf_value(const TrapezoidPatch& p, double x, double y) {
  if (!(x >= 0 && x <= p.h)) {
    throw DomainError("x outside [0, h]");
  }
  const double g = p.a + (p.b - p.a) * x / p.h;
  // g > 0 on [0,h]; tolerate rounding at the slanted edge.
  if (!(y >= 0 && y <= g * (1.0 + 1e-12))) {
    throw DomainError("point above the slanted edge of the trapezoid");
  }
  return p.a * y / g;
}

double trapezoid_gradient_sq_sup(const TrapezoidPatch& p) {
  const double C = p.C;
  const double u = (C - 1.0) / C;
  return u * u + 1.0;
}

double trapezoid_energy_closed(const TrapezoidPatch& p) {
  const double d = (p.b - p.a) / p.a;
  const double ratio = d == 0 ? 1.0 : std::log1p(d) / d;
  const double ad = p.a * d;  // = b - a
  const double shape = 1.0 + ad * ad / (3.0 * p.h * p.h);
  return p.a * p.h * shape * ratio;
}

namespace {

// Tensor Gauss-Legendre values over one cell, coarse 3x3 against fine 5x5.
struct CellEstimate {
  double value;  // 5x5
  double error;  // |5x5 - 3x3|
};

template <typename F>
CellEstimate gauss_cell(F&& f, double x0, double x1, double u0, double u1) {
  static const double n3[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static const double w3[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  static const double n5[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double w5[] = {0.2369268850561891, 0.4786286704993665,
                              0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
  const double cu = 0.5 * (u0 + u1), hu = 0.5 * (u1 - u0);
  double i3 = 0, i5 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      i3 += w3[i] * w3[j] * f(cx + hx * n3[i], cu + hu * n3[j]);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      i5 += w5[i] * w5[j] * f(cx + hx * n5[i], cu + hu * n5[j]);
  const double jac = hx * hu;
  return {i5 * jac, std::abs(i5 - i3) * jac};
}

}  // namespace

double trapezoid_energy_quadrature(const TrapezoidPatch& p, double rel_tol) {
  // Leaf-aligned substitution y = u*g(x) maps the trapezoid to
  // [0,h] x [0,1]; with the Jacobian g the integrand becomes
  //   a^2/g(x) + a^2 u^2 (b-a)^2 / (h^2 g(x)).
  const double a = p.a, b = p.b, h = p.h;
  const double slope_sq = (b - a) * (b - a) / (h * h);
  auto f = [&](double x, double u) {
    const double g = a + (b - a) * x / h;
    return a * a / g * (1.0 + u * u * slope_sq);
  };

  struct Cell {
    double x0, x1, u0, u1, value, error;
    std::uint64_t stamp;  // insertion order breaks ties deterministically
    bool operator<(const Cell& o) const {
      return error != o.error ? error < o.error : stamp > o.stamp;
    }
  };
  std::priority_queue<Cell> heap;
  std::uint64_t stamp = 0;
  double total = 0, err_total = 0;
  auto push = [&](double x0, double x1, double u0, double u1) {
    const CellEstimate e = gauss_cell(f, x0, x1, u0, u1);
    heap.push(Cell{x0, x1, u0, u1, e.value, e.error, stamp++});
    total += e.value;
    err_total += e.error;
  };
  push(0, h, 0, 1);
  constexpr int kMaxCells = 20000;
  while (err_total > rel_tol * std::abs(total)) {
    if (static_cast<int>(heap.size()) >= kMaxCells) {
      throw NumericalError("trapezoid quadrature hit its subdivision cap");
    }
    const Cell c = heap.top();
    heap.pop();
    total -= c.value;
    err_total -= c.error;
    const double xm = 0.5 * (c.x0 + c.x1), um = 0.5 * (c.u0 + c.u1);
    push(c.x0, xm, c.u0, um);
    push(xm, c.x1, c.u0, um);
    push(c.x0, xm, um, c.u1);
    push(xm, c.x1, um, c.u1);
  }
  return total;
}

double trapezoid_energy(const TrapezoidPatch& p) {
  const double closed = trapezoid_energy_closed(p);
  const double quad = trapezoid_energy_quadrature(p);
  const double rel = std::abs(quad - closed) / std::abs(closed);
  if (!(rel < 1e-9)) {
    std::ostringstream os;
    os << "quadrature disagrees with the closed form by " << rel;
    throw NumericalError(os.str());
  }
  return closed;
}

double rectangle_energy(const RectanglePatch& p) { return p.width * p.height; }

PantsEnergy pants_energy(double l_in, double l_out) {
  const auto geo = hyptrig::hexagon_geometry(l_in, l_out);
  const double a = l_in / 4.0;
  const double b = l_out / 2.0;
  if (!(geo.gap >= b)) {
    std::ostringstream os;
    os << "foot gap " << geo.gap << " < l_out/2 = " << b
       << "; pants foliation needs gap >= l_out/2";
    throw AdmissibilityError(os.str());
  }
  if (!(a <= b * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "trapezoid bases inverted (l_in/4 = " << a << " > l_out/2 = " << b
       << ")";
    throw AdmissibilityError(os.str());
  }
  const double C = std::max(1.0, b / a);
  if (!(geo.gap * (1.0 + 1e-12) >= C * b)) {
    std::ostringstream os;
    os << "shape window empty: gap " << geo.gap << " < C*b = " << C * b;
    throw AdmissibilityError(os.str());
  }
  const TrapezoidPatch trap(a, b, geo.gap, C);
  const RectanglePatch rect(geo.t, a);
  PantsEnergy pe;
  pe.l_in = l_in;
  pe.l_out = l_out;
  // Four pentagon strips per pants; each outer cuff receives two of them.
  pe.raw_energy =
      4.0 * (rectangle_energy(rect) + trapezoid_energy_closed(trap));
  pe.measure_in = l_in;
  pe.measure_out = l_in / 2.0;
  pe.scale = 1.0;
  pe.scaled_energy = pe.raw_energy;
  return pe;
}

PantsEnergy scale_pants(const PantsEnergy& pe, double s) {
  require_positive(s, "scale factor");
  PantsEnergy out = pe;
  out.scale = pe.scale * s;
  out.measure_in = pe.measure_in * s;
  out.measure_out = pe.measure_out * s;
  out.scaled_energy = out.scale * out.scale * out.raw_energy;
  return out;
}

EnergySeries cantor_energy_series(double r, std::int64_t n_max,
                                  SeriesMode mode) {
  if (!(r > 0) || !std::isfinite(r)) {
    throw DomainError("cantor series needs r > 0");
  }
  if (n_max < 3) throw DomainError("cantor series needs n_max >= 3");

  const auto rule = series::TermRule::cantor_energy_asym(r);
  EnergySeries out;
  out.mode = mode;
  out.r = r;

  if (mode == SeriesMode::Asymptotic) {
    double sum = 0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
      const double t = series::cantor_asym_term(n, r);
      sum += t;
      out.levels.push_back(n);
      out.terms.push_back(t);
      out.partial_sums.push_back(sum);
    }
  } else {
    double sum = 0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
      const double li = series::cantor_cuff_length(n - 1, r);
      const double lo = series::cantor_cuff_length(n, r);
      try {
        const PantsEnergy pe = pants_energy(li, lo);
        // 2^n pants at level n, each scaled by 1/(2^n l_{n-1}):
        // 2^n (2^-n / l)^2 raw = 2^-n raw / l^2.
        const double term = std::ldexp(pe.raw_energy / (li * li),
                                       static_cast<int>(-n));
        sum += term;
        out.levels.push_back(n);
        out.terms.push_back(term);
        out.partial_sums.push_back(sum);
        if (!out.first_admissible) out.first_admissible = n;
      } catch (const AdmissibilityError&) {
        out.skipped_levels.push_back(n);
      } catch (const DomainError&) {
        out.skipped_levels.push_back(n);
        if (lo / 2.0 <= hyptrig::kMinArg * 2.0) break;  // only shrinks further
      }
    }
  }

  const auto analysis = series::analyze(rule, 2);
  out.certificate = analysis.certificate;
  if (analysis.verdict == series::SeriesVerdict::Convergent) {
    out.verdict = SeriesVerdictKind::Converges;
    if (mode == SeriesMode::Asymptotic) {
      out.tail_bound = series::tail_bound_after(rule, n_max);
    } else if (!out.levels.empty()) {
      // Measured comparability constant over levels where the asymptotic
      // stand-in is meaningful (l_n < 1/2), times its certified tail.
      double c_emp = 0;
      for (std::size_t i = 0; i < out.levels.size(); ++i) {
        const std::int64_t n = out.levels[i];
        if (series::cantor_cuff_length(n, r) < 0.5) {
          c_emp = std::max(c_emp,
                           out.terms[i] / series::cantor_asym_term(n, r));
        }
      }
      if (c_emp > 0) {
        out.tail_bound =
            c_emp * series::tail_bound_after(rule, out.levels.back());
        out.tail_empirical = true;
      } else {
        out.verdict = SeriesVerdictKind::Inconclusive;
        out.tail_bound = kInf;
      }
    } else {
      out.verdict = SeriesVerdictKind::Inconclusive;
      out.tail_bound = kInf;
    }
  } else {
    out.verdict = SeriesVerdictKind::Diverges;
    out.tail_bound = kInf;
    // Witness level: first partial sum above the threshold, continuing past
    // n_max if the computed rows stop short.
    double sum = 0;
    std::int64_t n = 2;
    bool found = false;
    if (mode == SeriesMode::Exact) {
      for (std::size_t i = 0; i < out.levels.size(); ++i) {
        if (out.partial_sums[i] > kDivergenceWitnessThreshold) {
          out.witness_n = out.levels[i];
          found = true;
          break;
        }
      }
    } else {
      for (; n <= 2000000; ++n) {
        sum += series::cantor_asym_term(n, r);
        if (sum > kDivergenceWitnessThreshold) {
          out.witness_n = n;
          found = true;
          break;
        }
      }
    }
    (void)found;
  }
  return out;
}

}  // namespace pantslab::foliation
