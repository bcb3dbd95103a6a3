#include "pantslab/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pantslab/errors.hpp"

namespace pantslab::series {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

TermRule TermRule::constant(double v) {
  require_finite(v, "constant value");
  if (v < 0) throw DomainError("constant rule needs a nonnegative value");
  TermRule t;
  t.kind = RuleKind::Constant;
  t.c = v;
  return t;
}

TermRule TermRule::power_shifted(double c, double p, double shift) {
  require_finite(c, "coefficient");
  require_finite(p, "exponent");
  require_finite(shift, "shift");
  if (c < 0) throw DomainError("power rule needs a nonnegative coefficient");
  if (shift <= -1) throw DomainError("power rule needs shift > -1");
  TermRule t;
  t.kind = RuleKind::PowerShifted;
  t.c = c;
  t.p = p;
  t.shift = shift;
  return t;
}

TermRule TermRule::linear_reciprocal(double a, double b) {
  require_finite(a, "slope");
  require_finite(b, "offset");
  if (a <= 0 || b < 0) {
    throw DomainError("linear reciprocal rule needs a > 0 and b >= 0");
  }
  TermRule t;
  t.kind = RuleKind::LinearReciprocal;
  t.a = a;
  t.b = b;
  return t;
}

TermRule TermRule::poly_geometric(double a, double d, double rho,
                                  double shift) {
  require_finite(a, "coefficient");
  require_finite(d, "degree");
  require_finite(rho, "ratio");
  require_finite(shift, "shift");
  if (a < 0) throw DomainError("geometric rule needs a nonnegative coefficient");
  if (rho <= 0) throw DomainError("geometric rule needs rho > 0");
  if (shift <= -1) throw DomainError("geometric rule needs shift > -1");
  TermRule t;
  t.kind = RuleKind::PolyGeometric;
  t.a = a;
  t.d = d;
  t.rho = rho;
  t.shift = shift;
  return t;
}

TermRule TermRule::bertrand_reciprocal(double a, double p) {
  require_finite(a, "coefficient");
  require_finite(p, "exponent");
  if (a <= 0) throw DomainError("bertrand rule needs a > 0");
  TermRule t;
  t.kind = RuleKind::BertrandReciprocal;
  t.a = a;
  t.p = p;
  return t;
}

TermRule TermRule::cantor_energy_asym(double r) {
  require_finite(r, "decay exponent");
  TermRule t;
  t.kind = RuleKind::CantorEnergyAsym;
  t.r = r;
  return t;
}

TermRule TermRule::from_table(std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0) {
      throw DomainError("table rule needs finite nonnegative entries");
    }
  }
  TermRule t;
  t.kind = RuleKind::Table;
  t.table = std::move(values);
  return t;
}

std::int64_t TermRule::first_level() const {
  return kind == RuleKind::BertrandReciprocal ? 2 : 1;
}

double cantor_cuff_length(std::int64_t n, double r) {
  if (n < 0) throw DomainError("cantor level must be nonnegative");
  // (n+1)^r / 2^(n+1), in logs to dodge overflow at large n.
  const double m = static_cast<double>(n + 1);
  return std::exp(r * std::log(m) - m * kLn2);
}

double cantor_asym_term(std::int64_t n, double r) {
  if (n < 1) throw DomainError("cantor level must be >= 1");
  const double m = static_cast<double>(n + 1);
  const double v = 2.0 * std::pow(m, -r) * (m * kLn2 - r * std::log(m));
  // l_n >= 1 is exactly where the bracket is <= 0; clamp keeps the
  // sequence nonnegative and the estimate meaningful only for short cuffs.
  return v > 0 ? v : 0.0;
}

std::int64_t cantor_asym_monotone_onset(double r) {
  require_finite(r, "decay exponent");
  // f(x) = 2(x^(1-r) ln2 - r x^(-r) ln x) is the term at n = x-1.  It is
  // nonincreasing where s(x) = (1-r) x ln2 + r^2 ln x - r <= 0, and s is
  // itself decreasing past x* = r^2 / ((r-1) ln2).  The onset also demands
  // the clamp inactive (l_n < 1) from there on.
  const double xs = r > 1 ? r * r / ((r - 1) * kLn2) : 1.0;
  for (std::int64_t n = 1; n < 100000; ++n) {
    const double m = static_cast<double>(n + 1);
    const bool past_peak = m >= xs && m >= r / kLn2;
    const double s = (1 - r) * m * kLn2 + r * r * std::log(m) - r;
    const bool unclamped = r * std::log(m) < m * kLn2;
    if (past_peak && s <= 0 && unclamped) return n;
  }
  throw NumericalError("no monotone onset found within 1e5 levels");
}

double TermRule::eval(std::int64_t n) const {
  switch (kind) {
    case RuleKind::Constant:
      return c;
    case RuleKind::PowerShifted:
      return c * std::pow(static_cast<double>(n) + shift, -p);
    case RuleKind::LinearReciprocal:
      return 1.0 / (a * static_cast<double>(n) + b);
    case RuleKind::PolyGeometric:
      return a * std::pow(static_cast<double>(n) + shift, d) *
             std::pow(rho, static_cast<double>(n));
    case RuleKind::BertrandReciprocal: {
      if (n < 2) throw DomainError("bertrand rule is defined from n = 2");
      const double ln = std::log(static_cast<double>(n));
      return 1.0 / (a * static_cast<double>(n) * std::pow(ln, p));
    }
    case RuleKind::CantorEnergyAsym:
      return cantor_asym_term(n, r);
    case RuleKind::Table: {
      if (n < 1 || n > static_cast<std::int64_t>(table.size())) {
        throw IndexError("table rule has no term at level " +
                         std::to_string(n));
      }
      return table[static_cast<std::size_t>(n - 1)];
    }
  }
  throw DomainError("unknown rule kind");
}

std::string TermRule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case RuleKind::Constant:
      os << "constant(" << num(c) << ")";
      break;
    case RuleKind::PowerShifted:
      os << num(c) << "*(n+" << num(shift) << ")^(-" << num(p) << ")";
      break;
    case RuleKind::LinearReciprocal:
      os << "1/(" << num(a) << "*n+" << num(b) << ")";
      break;
    case RuleKind::PolyGeometric:
      os << num(a) << "*(n+" << num(shift) << ")^" << num(d) << " * "
         << num(rho) << "^n";
      break;
    case RuleKind::BertrandReciprocal:
      os << "1/(" << num(a) << "*n*ln(n)^" << num(p) << ")";
      break;
    case RuleKind::CantorEnergyAsym:
      os << "2*(n+1)^(-" << num(r) << ")*((n+1)*ln2-" << num(r)
         << "*ln(n+1)), clamped at 0";
      break;
    case RuleKind::Table:
      os << "table[" << table.size() << "]";
      break;
  }
  return os.str();
}

namespace {

// LinearReciprocal is the one redundant catalog entry: rewrite it exactly
// as (1/a) * (n + b/a)^(-1) so products only juggle two symbolic kinds.
TermRule normalize(const TermRule& rule) {
  if (rule.kind == RuleKind::LinearReciprocal) {
    return TermRule::power_shifted(1.0 / rule.a, 1.0, rule.b / rule.a);
  }
  return rule;
}

TermRule as_poly_geometric(const TermRule& rule) {
  if (rule.kind == RuleKind::PolyGeometric) return rule;
  if (rule.kind == RuleKind::PowerShifted) {
    return TermRule::poly_geometric(rule.c, -rule.p, 1.0, rule.shift);
  }
  throw DomainError("rule '" + rule.describe() +
                    "' has no exact product form");
}

}  // namespace

TermRule scale(const TermRule& rule, double factor) {
  require_finite(factor, "scale factor");
  if (factor < 0) throw DomainError("scale factor must be nonnegative");
  if (factor == 0) return TermRule::constant(0);
  switch (rule.kind) {
    case RuleKind::Constant:
      return TermRule::constant(factor * rule.c);
    case RuleKind::PowerShifted:
      return TermRule::power_shifted(factor * rule.c, rule.p, rule.shift);
    case RuleKind::LinearReciprocal:
      return TermRule::power_shifted(factor / rule.a, 1.0, rule.b / rule.a);
    case RuleKind::PolyGeometric:
      return TermRule::poly_geometric(factor * rule.a, rule.d, rule.rho,
                                      rule.shift);
    case RuleKind::BertrandReciprocal:
      return TermRule::bertrand_reciprocal(rule.a / factor, rule.p);
    case RuleKind::CantorEnergyAsym:
      if (factor == 1.0) return rule;
      throw DomainError("cantor asymptotic terms only scale by 1");
    case RuleKind::Table: {
      std::vector<double> scaled = rule.table;
      for (double& v : scaled) v *= factor;
      return TermRule::from_table(std::move(scaled));
    }
  }
  throw DomainError("unknown rule kind");
}

TermRule square(const TermRule& rule) {
  switch (rule.kind) {
    case RuleKind::Constant:
      return TermRule::constant(rule.c * rule.c);
    case RuleKind::PowerShifted:
      return TermRule::power_shifted(rule.c * rule.c, 2.0 * rule.p,
                                     rule.shift);
    case RuleKind::LinearReciprocal:
      return TermRule::power_shifted(1.0 / (rule.a * rule.a), 2.0,
                                     rule.b / rule.a);
    case RuleKind::PolyGeometric:
      return TermRule::poly_geometric(rule.a * rule.a, 2.0 * rule.d,
                                      rule.rho * rule.rho, rule.shift);
    case RuleKind::Table: {
      std::vector<double> sq = rule.table;
      for (double& v : sq) v *= v;
      return TermRule::from_table(std::move(sq));
    }
    default:
      throw DomainError("rule '" + rule.describe() +
                        "' has no exact square in the catalog");
  }
}

TermRule multiply(const TermRule& lhs, const TermRule& rhs) {
  if (lhs.kind == RuleKind::Constant) return scale(rhs, lhs.c);
  if (rhs.kind == RuleKind::Constant) return scale(lhs, rhs.c);
  if (lhs.kind == RuleKind::Table || rhs.kind == RuleKind::Table) {
    const TermRule& tab = lhs.kind == RuleKind::Table ? lhs : rhs;
    const TermRule& other = lhs.kind == RuleKind::Table ? rhs : lhs;
    if (other.first_level() > 1) {
      throw DomainError("cannot multiply a table against a rule undefined "
                        "at level 1");
    }
    std::size_t len = tab.table.size();
    if (other.kind == RuleKind::Table) {
      len = std::min(len, other.table.size());
    }
    std::vector<double> prod;
    prod.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      prod.push_back(tab.table[i] * other.eval(static_cast<std::int64_t>(i) + 1));
    }
    return TermRule::from_table(std::move(prod));
  }
  const TermRule a = as_poly_geometric(normalize(lhs));
  const TermRule b = as_poly_geometric(normalize(rhs));
  double shift = a.shift;
  if (a.d != 0 && b.d != 0 && a.shift != b.shift) {
    throw DomainError("mismatched shifts have no exact product form");
  }
  if (a.d == 0) shift = b.shift;
  return TermRule::poly_geometric(a.a * b.a, a.d + b.d, a.rho * b.rho, shift);
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Divergent:
      return "divergent";
    case SeriesVerdict::Convergent:
      return "convergent";
    case SeriesVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

double Certificate::bound_at(std::int64_t n) const {
  const double x = static_cast<double>(n);
  switch (bound) {
    case Bound::ConstantFloor:
      return c;
    case Bound::HarmonicFloor:
      return c / x;
    case Bound::BertrandFloor:
    case Bound::BertrandCeil:
      return 1.0 / (a * x * std::pow(std::log(x), p));
    case Bound::PowerCeil:
      return c * std::pow(x + shift, -p);
    case Bound::RatioCeil:
      return std::numeric_limits<double>::quiet_NaN();
    case Bound::CantorAsymCeil:
      return 2.0 * kLn2 * std::pow(x + 1.0, 1.0 - r);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool Certificate::replay(const TermRule& rule, std::int64_t n) const {
  if (n < onset || n < rule.first_level()) return true;
  // Tolerate one part in 1e12 of slack so ties decided in exact arithmetic
  // are not lost to rounding.
  const double slack = 1e-12;
  if (bound == Bound::RatioCeil) {
    const double tn = rule.eval(n);
    const double tn1 = rule.eval(n + 1);
    return tn1 <= rho_hat * tn * (1 + slack) + slack * 1e-300;
  }
  const double t = rule.eval(n);
  const double b = bound_at(n);
  if (side == Side::Lower) return t >= b * (1 - slack);
  return t <= b * (1 + slack) + slack * 1e-300;
}

std::string Certificate::describe() const {
  std::ostringstream os;
  const char* rel = side == Side::Lower ? ">=" : "<=";
  switch (bound) {
    case Bound::ConstantFloor:
      os << "t(n) " << rel << " " << num(c);
      break;
    case Bound::HarmonicFloor:
      os << "t(n) " << rel << " " << num(c) << "/n";
      break;
    case Bound::BertrandFloor:
    case Bound::BertrandCeil:
      os << "t(n) " << rel << " 1/(" << num(a) << "*n*ln(n)^" << num(p) << ")";
      break;
    case Bound::PowerCeil:
      os << "t(n) " << rel << " " << num(c) << "*(n+" << num(shift) << ")^(-"
         << num(p) << ")";
      break;
    case Bound::RatioCeil:
      os << "t(n+1) <= " << num(rho_hat) << "*t(n)";
      break;
    case Bound::CantorAsymCeil:
      os << "t(n) <= 2*ln2*(n+1)^(1-" << num(r) << ")";
      break;
  }
  os << " for n >= " << onset;
  return os.str();
}

namespace {

// sum_{n > N} c (n+shift)^(-p) <= c (N+shift)^(1-p) / (p-1), p > 1.
double power_tail(double c, double p, double shift, std::int64_t N) {
  return c * std::pow(static_cast<double>(N) + shift, 1.0 - p) / (p - 1.0);
}

// sum_{n > N} 1/(a n ln^p n) <= ln(N)^(1-p) / (a (p-1)), p > 1, N >= 2.
double bertrand_tail(double a, double p, std::int64_t N) {
  return std::pow(std::log(static_cast<double>(N)), 1.0 - p) / (a * (p - 1.0));
}

// Integral of the unclamped cantor asymptotic term over [M, inf), r > 2.
double cantor_integral(double M, double r) {
  const double lnM = std::log(M);
  return 2.0 * (kLn2 * std::pow(M, 2.0 - r) / (r - 2.0) -
                r * std::pow(M, 1.0 - r) *
                    (lnM / (r - 1.0) + 1.0 / ((r - 1.0) * (r - 1.0))));
}

double cantor_tail(double r, std::int64_t N) {
  const std::int64_t onset = cantor_asym_monotone_onset(r);
  if (N >= onset) return cantor_integral(static_cast<double>(N) + 1.0, r);
  double head = 0;
  for (std::int64_t n = N + 1; n <= onset; ++n) head += cantor_asym_term(n, r);
  return head + cantor_integral(static_cast<double>(onset) + 1.0, r);
}

// For rho < 1 the term ratio rho*((n+1+shift)/(n+shift))^d drops toward rho;
// find where it first clears rho_hat (immediate for d <= 0).
std::int64_t ratio_onset(double d, double rho, double shift, double rho_hat) {
  if (d <= 0) return 1;
  for (std::int64_t n = 1; n < 100000000; ++n) {
    const double x = static_cast<double>(n) + shift;
    const double ratio = rho * std::pow((x + 1.0) / x, d);
    if (ratio <= rho_hat) return n;
  }
  throw NumericalError("geometric ratio never settled below its target");
}

double poly_geometric_tail(const TermRule& rule, const Certificate& cert,
                           std::int64_t N) {
  // Valid from the onset: sum_{n > m} t(n) <= t(m) rho_hat / (1 - rho_hat).
  const std::int64_t m = std::max(N, cert.onset);
  double head = 0;
  for (std::int64_t n = N + 1; n < m; ++n) head += rule.eval(n);
  if (m > N) head += rule.eval(m) / (1.0 - cert.rho_hat);  // t(m) + its tail
  else head = rule.eval(m) * cert.rho_hat / (1.0 - cert.rho_hat);
  return head;
}

Certificate lower(Certificate::Bound b, std::int64_t onset) {
  Certificate c;
  c.side = Certificate::Side::Lower;
  c.bound = b;
  c.onset = onset;
  return c;
}

Certificate upper(Certificate::Bound b, std::int64_t onset) {
  Certificate c;
  c.side = Certificate::Side::Upper;
  c.bound = b;
  c.onset = onset;
  return c;
}

// Verdict and certificate from the rule's algebra alone.
std::pair<SeriesVerdict, std::optional<Certificate>> decide(
    const TermRule& rule) {
  switch (rule.kind) {
    case RuleKind::Constant: {
      if (rule.c > 0) {
        auto c = lower(Certificate::Bound::ConstantFloor, 1);
        c.c = rule.c;
        return {SeriesVerdict::Divergent, c};
      }
      auto c = upper(Certificate::Bound::PowerCeil, 1);
      c.c = 0;
      c.p = 2;
      return {SeriesVerdict::Convergent, c};
    }
    case RuleKind::PowerShifted: {
      if (rule.c == 0) {
        auto c = upper(Certificate::Bound::PowerCeil, 1);
        c.c = 0;
        c.p = 2;
        return {SeriesVerdict::Convergent, c};
      }
      if (rule.p > 1) {
        auto c = upper(Certificate::Bound::PowerCeil, 1);
        c.c = rule.c;
        c.p = rule.p;
        c.shift = rule.shift;
        return {SeriesVerdict::Convergent, c};
      }
      if (rule.p <= 0) {
        // Terms are bounded below by the value at n = 1.
        auto c = lower(Certificate::Bound::ConstantFloor, 1);
        c.c = rule.c * std::pow(1.0 + rule.shift, -rule.p);
        return {SeriesVerdict::Divergent, c};
      }
      // 0 < p <= 1: (n+shift)^(-p) >= (1+shift)^(-p) / n for n >= 1.
      auto c = lower(Certificate::Bound::HarmonicFloor, 1);
      c.c = rule.c * std::pow(1.0 + rule.shift, -rule.p);
      return {SeriesVerdict::Divergent, c};
    }
    case RuleKind::LinearReciprocal: {
      // 1/(a n + b) >= (1/(a+b)) / n  since b (n-1) >= 0.
      auto c = lower(Certificate::Bound::HarmonicFloor, 1);
      c.c = 1.0 / (rule.a + rule.b);
      return {SeriesVerdict::Divergent, c};
    }
    case RuleKind::PolyGeometric: {
      if (rule.a == 0) {
        auto c = upper(Certificate::Bound::PowerCeil, 1);
        c.c = 0;
        c.p = 2;
        return {SeriesVerdict::Convergent, c};
      }
      if (rule.rho < 1) {
        auto c = upper(Certificate::Bound::RatioCeil, 1);
        c.rho_hat = rule.d <= 0 ? rule.rho : 0.5 * (1.0 + rule.rho);
        c.onset = ratio_onset(rule.d, rule.rho, rule.shift, c.rho_hat);
        return {SeriesVerdict::Convergent, c};
      }
      if (rule.rho == 1) {
        // Degenerates to a pure power rule with p = -d.
        TermRule power = TermRule::power_shifted(rule.a, -rule.d, rule.shift);
        return decide(power);
      }
      // rho > 1: the ratio rho ((n+1+shift)/(n+shift))^d climbs toward rho,
      // so once it reaches 1 the terms never shrink again.
      std::int64_t onset = 1;
      if (rule.d < 0) {
        while (onset < 100000000) {
          const double x = static_cast<double>(onset) + rule.shift;
          if (rule.rho * std::pow((x + 1.0) / x, rule.d) >= 1.0) break;
          ++onset;
        }
      }
      auto c = lower(Certificate::Bound::ConstantFloor, onset);
      c.c = rule.eval(onset);
      return {SeriesVerdict::Divergent, c};
    }
    case RuleKind::BertrandReciprocal: {
      if (rule.p > 1) {
        auto c = upper(Certificate::Bound::BertrandCeil, 2);
        c.a = rule.a;
        c.p = rule.p;
        return {SeriesVerdict::Convergent, c};
      }
      auto c = lower(Certificate::Bound::BertrandFloor, 2);
      c.a = rule.a;
      c.p = rule.p;
      return {SeriesVerdict::Divergent, c};
    }
    case RuleKind::CantorEnergyAsym: {
      if (rule.r > 2) {
        auto c = upper(Certificate::Bound::CantorAsymCeil, 1);
        c.r = rule.r;
        return {SeriesVerdict::Convergent, c};
      }
      // t(n) >= ln2 (n+1)^(1-r) >= (ln2/2)/n once r ln(n+1) <= (n+1) ln2 / 2;
      // past the bracket's stationary point that inequality persists.
      std::int64_t onset = 1;
      const double floor_from = 2.0 * rule.r / kLn2;
      while (onset < 100000) {
        const double m = static_cast<double>(onset) + 1.0;
        if (m >= floor_from && rule.r * std::log(m) <= m * kLn2 / 2.0) break;
        ++onset;
      }
      auto c = lower(Certificate::Bound::HarmonicFloor, onset);
      c.c = kLn2 / 2.0;
      return {SeriesVerdict::Divergent, c};
    }
    case RuleKind::Table:
      return {SeriesVerdict::Inconclusive, std::nullopt};
  }
  return {SeriesVerdict::Inconclusive, std::nullopt};
}

}  // namespace

double tail_bound_after(const TermRule& rule, std::int64_t depth) {
  auto [verdict, cert] = decide(rule);
  if (verdict != SeriesVerdict::Convergent || !cert) return kInf;
  if (depth < rule.first_level()) {
    throw DomainError("tail depth precedes the first defined level");
  }
  switch (cert->bound) {
    case Certificate::Bound::PowerCeil:
      return power_tail(cert->c, cert->p, cert->shift, depth);
    case Certificate::Bound::BertrandCeil:
      return bertrand_tail(cert->a, cert->p, depth);
    case Certificate::Bound::RatioCeil:
      return poly_geometric_tail(rule, *cert, depth);
    case Certificate::Bound::CantorAsymCeil:
      return cantor_tail(rule.r, depth);
    default:
      return kInf;
  }
}

Analysis analyze(const TermRule& rule, std::int64_t depth) {
  if (depth < rule.first_level()) {
    throw DomainError("analysis depth precedes the first defined level");
  }
  if (rule.kind == RuleKind::Table &&
      depth > static_cast<std::int64_t>(rule.table.size())) {
    throw IndexError("analysis depth exceeds the table length");
  }
  Analysis out;
  out.depth = depth;
  auto [verdict, cert] = decide(rule);
  out.verdict = verdict;
  out.certificate = cert;
  out.terms.reserve(static_cast<std::size_t>(depth - rule.first_level() + 1));
  double sum = 0;
  for (std::int64_t n = rule.first_level(); n <= depth; ++n) {
    const double t = rule.eval(n);
    sum += t;
    out.terms.push_back(t);
    out.partial_sums.push_back(sum);
  }
  out.partial_sum = sum;
  out.tail_bound = verdict == SeriesVerdict::Convergent
                       ? tail_bound_after(rule, depth)
                       : kInf;
  return out;
}

}  // namespace pantslab::series
