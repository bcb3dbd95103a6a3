#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pantslab::series {

// Symbolic description of a nonnegative term sequence t(n).  Convergence
// verdicts are decided from the rule's algebra, never from floating partial
// sums; the numeric evaluation only produces evidence rows.
enum class RuleKind {
  Constant,           // v
  PowerShifted,       // c * (n + shift)^(-p)
  LinearReciprocal,   // 1 / (a*n + b)
  PolyGeometric,      // a * (n + shift)^d * rho^n
  BertrandReciprocal, // 1 / (a * n * ln(n)^p), defined from n = 2
  CantorEnergyAsym,   // max(0, 2*(n+1)^(-r) * ((n+1)*ln2 - r*ln(n+1)))
  Table,              // finite sample; carries no certificate
};

struct TermRule {
  RuleKind kind = RuleKind::Table;
  double c = 0, p = 0, a = 0, b = 0, d = 0, rho = 0, r = 0, shift = 0;
  std::vector<double> table;

  static TermRule constant(double v);
  static TermRule power_shifted(double c, double p, double shift = 0);
  static TermRule linear_reciprocal(double a, double b);
  static TermRule poly_geometric(double a, double d, double rho,
                                 double shift = 0);
  static TermRule bertrand_reciprocal(double a, double p);
  static TermRule cantor_energy_asym(double r);
  static TermRule from_table(std::vector<double> values);

  // First index where the rule is defined (1, or 2 for Bertrand).
  std::int64_t first_level() const;

  // Term value; throws IndexError past the end of a table.
  double eval(std::int64_t n) const;

  std::string describe() const;
};

enum class SeriesVerdict { Divergent, Convergent, Inconclusive };

std::string to_string(SeriesVerdict v);

// Replayable comparison statement about the terms.  A Lower certificate says
// t(n) >= bound(n) for every n >= onset with sum bound(n) divergent; an Upper
// certificate says t(n) <= bound(n) (or the ratio form) with a closed-form
// tail for the bound.  replay() re-checks the pointwise inequality.
struct Certificate {
  enum class Side { Lower, Upper };
  enum class Bound {
    ConstantFloor,  // bound(n) = c
    HarmonicFloor,  // bound(n) = c / n
    BertrandFloor,  // bound(n) = 1/(a * n * ln(n)^p), p <= 1
    PowerCeil,      // bound(n) = c * (n + shift)^(-p), p > 1
    BertrandCeil,   // bound(n) = 1/(a * n * ln(n)^p), p > 1
    RatioCeil,      // t(n+1) <= rho_hat * t(n) for n >= onset, rho_hat < 1
    CantorAsymCeil, // bound(n) = 2*ln2 * (n+1)^(1-r), r > 2
  };

  Side side = Side::Lower;
  Bound bound = Bound::ConstantFloor;
  double c = 0, p = 0, a = 0, rho_hat = 0, r = 0, shift = 0;
  std::int64_t onset = 1;

  // Value of the comparison bound at level n (RatioCeil has none; returns
  // a quiet NaN there since the statement is about consecutive terms).
  double bound_at(std::int64_t n) const;

  // Re-checks the certified inequality against the rule at level n >= onset.
  bool replay(const TermRule& rule, std::int64_t n) const;

  std::string describe() const;
};

struct Analysis {
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
  std::optional<Certificate> certificate;
  // Bound on sum over n > depth; +inf unless verdict is Convergent.
  double tail_bound = 0;
  std::int64_t depth = 0;
  std::vector<double> terms;         // t(first_level() .. depth)
  std::vector<double> partial_sums;  // running sums, same indexing
  double partial_sum = 0;            // sum over first_level() .. depth
};

// Rule algebra used to assemble comparison series.  Results stay in the
// symbolic catalog so analyze() keeps its certificates; combinations with no
// exact closed form throw DomainError (tables multiply through pointwise).
TermRule scale(const TermRule& rule, double factor);
TermRule square(const TermRule& rule);
TermRule multiply(const TermRule& lhs, const TermRule& rhs);

// Decides convergence of sum_n t(n) from the rule's algebra and evaluates
// terms up to `depth` (>= first_level()) as evidence.  Table rules come back
// Inconclusive with tail_bound = +inf.
Analysis analyze(const TermRule& rule, std::int64_t depth);

// Tail bound alone (the value analyze() reports for the same depth).
double tail_bound_after(const TermRule& rule, std::int64_t depth);

// Cantor-family cuff lengths and the asymptotic per-level energy term.
// cantor_cuff_length(n, r) = (n+1)^r / 2^(n+1); the asymptotic term is
// (1/(2^n * l_n)) * log(1/l_n) = 2*(n+1)^(-r) * ((n+1)*ln2 - r*ln(n+1)),
// clamped at zero while l_n >= 1 (the per-level estimate only carries
// meaning for short cuffs, and terms must stay nonnegative).
double cantor_cuff_length(std::int64_t n, double r);
double cantor_asym_term(std::int64_t n, double r);

// First level from which cantor_asym_term(., r) is positive and
// nonincreasing for all later levels (so integral tail bounds apply).
std::int64_t cantor_asym_monotone_onset(double r);

}  // namespace pantslab::series
