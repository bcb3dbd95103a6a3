#include <cmath>
#include <limits>

#include <doctest.h>

#include "pantslab/errors.hpp"
#include "pantslab/series.hpp"

using namespace pantslab;
using series::Certificate;
using series::SeriesVerdict;
using series::TermRule;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("series") {

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(TermRule::constant(-1), DomainError);
  CHECK_THROWS_AS(TermRule::constant(kInf), DomainError);
  CHECK_THROWS_AS(TermRule::power_shifted(-2, 1), DomainError);
  CHECK_THROWS_AS(TermRule::power_shifted(1, 1, -1.0), DomainError);
  CHECK_THROWS_AS(TermRule::linear_reciprocal(0, 1), DomainError);
  CHECK_THROWS_AS(TermRule::linear_reciprocal(1, -1), DomainError);
  CHECK_THROWS_AS(TermRule::poly_geometric(1, 0, 0), DomainError);
  CHECK_THROWS_AS(TermRule::poly_geometric(-1, 0, 0.5), DomainError);
  CHECK_THROWS_AS(TermRule::bertrand_reciprocal(0, 2), DomainError);
  CHECK_THROWS_AS(TermRule::from_table({1.0, -0.5}), DomainError);
}

TEST_CASE("term evaluation") {
  CHECK(TermRule::constant(3.0).eval(17) == 3.0);
  CHECK(TermRule::power_shifted(0.25, 1).eval(5) == doctest::Approx(0.05));
  CHECK(TermRule::linear_reciprocal(4, 0).eval(7) ==
        doctest::Approx(1.0 / 28.0));
  CHECK(TermRule::poly_geometric(0.5, 0, 0.5).eval(10) ==
        doctest::Approx(std::ldexp(1.0, -11)).epsilon(1e-15));
  CHECK(TermRule::bertrand_reciprocal(1, 2).eval(10) ==
        doctest::Approx(1.0 / (10.0 * std::pow(std::log(10.0), 2))));
  CHECK_THROWS_AS(TermRule::bertrand_reciprocal(1, 2).eval(1), DomainError);
  const auto table = TermRule::from_table({0.5, 0.25});
  CHECK(table.eval(2) == 0.25);
  CHECK_THROWS_AS(table.eval(3), IndexError);
  CHECK_THROWS_AS(table.eval(0), IndexError);
  CHECK(table.first_level() == 1);
  CHECK(TermRule::bertrand_reciprocal(1, 2).first_level() == 2);
}

TEST_CASE("verdicts by rule algebra") {
  auto verdict = [](const TermRule& r) {
    return series::analyze(r, r.first_level() + 30).verdict;
  };
  CHECK(verdict(TermRule::constant(1)) == SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::constant(0)) == SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::power_shifted(1, 2)) == SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::power_shifted(1, 1.0001)) ==
        SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::power_shifted(1, 1)) == SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::power_shifted(1, 0.5)) == SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::power_shifted(1, -1)) == SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::linear_reciprocal(4, 3)) ==
        SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::poly_geometric(1, 0, 0.5)) ==
        SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::poly_geometric(1, 3, 0.9)) ==
        SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::poly_geometric(1, -1, 1)) ==
        SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::poly_geometric(1, -3, 1)) ==
        SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::poly_geometric(1, -5, 2)) ==
        SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::bertrand_reciprocal(1, 2)) ==
        SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::bertrand_reciprocal(1, 1)) ==
        SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::cantor_energy_asym(3)) == SeriesVerdict::Convergent);
  CHECK(verdict(TermRule::cantor_energy_asym(2)) == SeriesVerdict::Divergent);
  CHECK(verdict(TermRule::cantor_energy_asym(1.5)) ==
        SeriesVerdict::Divergent);
  CHECK(series::analyze(TermRule::from_table({1, 1, 1}), 3).verdict ==
        SeriesVerdict::Inconclusive);
}

TEST_CASE("harmonic partial sum evidence") {
  const auto an = series::analyze(TermRule::power_shifted(1, 1), 1000);
  CHECK(an.partial_sum ==
        doctest::Approx(7.4854708605503451).epsilon(1e-12));
  CHECK(an.terms.size() == 1000);
  CHECK(an.partial_sums.back() == an.partial_sum);
  CHECK(an.tail_bound == kInf);
}

TEST_CASE("power tail bounds the true remainder") {
  const auto rule = TermRule::power_shifted(1, 2);
  const double tail = series::tail_bound_after(rule, 100);
  CHECK(tail == doctest::Approx(0.01).epsilon(1e-12));
  double rest = 0;
  for (std::int64_t n = 101; n <= 200000; ++n) rest += rule.eval(n);
  CHECK(rest < tail);
  CHECK(rest > 0.99 * tail);  // the bound is tight at this scale
}

TEST_CASE("geometric tail is exact for pure ratios") {
  const auto rule = TermRule::poly_geometric(0.5, 0, 0.5);
  const double tail = series::tail_bound_after(rule, 30);
  CHECK(tail == doctest::Approx(std::ldexp(1.0, -31)).epsilon(1e-15));
}

TEST_CASE("bertrand tail") {
  const auto rule = TermRule::bertrand_reciprocal(1, 2);
  const double tail = series::tail_bound_after(rule, 200);
  CHECK(tail == doctest::Approx(1.0 / std::log(200.0)).epsilon(1e-12));
  double rest = 0;
  for (std::int64_t n = 201; n <= 400000; ++n) rest += rule.eval(n);
  CHECK(rest < tail);
}

TEST_CASE("certificates replay on 3000 levels") {
  const TermRule rules[] = {
      TermRule::constant(2),
      TermRule::power_shifted(1, 2),
      TermRule::power_shifted(3, 0.5),
      TermRule::linear_reciprocal(4, 1),
      TermRule::poly_geometric(1, 2, 0.5),
      TermRule::poly_geometric(2, -1, 1),
      TermRule::bertrand_reciprocal(1, 2),
      TermRule::bertrand_reciprocal(2, 0.5),
      TermRule::cantor_energy_asym(3),
      TermRule::cantor_energy_asym(2),
      TermRule::cantor_energy_asym(1.5),
  };
  for (const auto& rule : rules) {
    const auto an = series::analyze(rule, rule.first_level() + 10);
    REQUIRE(an.certificate.has_value());
    for (std::int64_t n = rule.first_level(); n <= 3000; ++n) {
      if (!an.certificate->replay(rule, n)) {
        CAPTURE(rule.describe());
        CAPTURE(n);
        FAIL("certificate replay failed");
      }
    }
  }
}

TEST_CASE("cantor asymptotic monotone onsets") {
  CHECK(series::cantor_asym_monotone_onset(2.1) == 11);
  CHECK(series::cantor_asym_monotone_onset(2.5) == 13);
  CHECK(series::cantor_asym_monotone_onset(3.0) == 15);
}

TEST_CASE("cantor asymptotic sums and tails") {
  const auto r3 = series::analyze(TermRule::cantor_energy_asym(3), 200);
  // Levels 1..200; level 1 contributes 0 (the clamp), so this equals the
  // sum from level 2.
  CHECK(r3.partial_sum ==
        doctest::Approx(0.048060670505750877).epsilon(1e-12));
  CHECK(r3.tail_bound ==
        doctest::Approx(0.0064660590545016407).epsilon(1e-9));

  const auto r25 = series::analyze(TermRule::cantor_energy_asym(2.5), 200);
  CHECK(r25.partial_sum ==
        doctest::Approx(0.38902302018674676).epsilon(1e-12));
  CHECK(r25.tail_bound ==
        doctest::Approx(0.18858009071568714).epsilon(1e-9));

  const auto r21 = series::analyze(TermRule::cantor_energy_asym(2.1), 200);
  CHECK(r21.partial_sum ==
        doctest::Approx(2.0805344079686177).epsilon(1e-12));
  CHECK(r21.tail_bound ==
        doctest::Approx(8.0876627546156401).epsilon(1e-9));
}

TEST_CASE("tail bound dominates doubling the depth") {
  for (double r : {2.1, 2.5, 3.0}) {
    const auto rule = TermRule::cantor_energy_asym(r);
    const auto a200 = series::analyze(rule, 200);
    const auto a400 = series::analyze(rule, 400);
    CHECK(a400.partial_sum - a200.partial_sum < a200.tail_bound);
  }
}

TEST_CASE("divergence certificate onsets for slow cantor decay") {
  const auto a15 = series::analyze(TermRule::cantor_energy_asym(1.5), 20);
  REQUIRE(a15.certificate.has_value());
  CHECK(a15.certificate->onset == 9);
  const auto a2 = series::analyze(TermRule::cantor_energy_asym(2.0), 20);
  REQUIRE(a2.certificate.has_value());
  CHECK(a2.certificate->onset == 15);
}

TEST_CASE("scale keeps values and certificates") {
  const auto rule = TermRule::power_shifted(2, 1.5, 0.5);
  const auto scaled = series::scale(rule, 3);
  for (std::int64_t n = 1; n <= 50; ++n) {
    CHECK(scaled.eval(n) == doctest::Approx(3 * rule.eval(n)).epsilon(1e-15));
  }
  CHECK(series::scale(rule, 0).eval(7) == 0.0);
  const auto bert = series::scale(TermRule::bertrand_reciprocal(2, 1), 4);
  CHECK(bert.eval(5) ==
        doctest::Approx(4.0 / (2.0 * 5.0 * std::log(5.0))).epsilon(1e-15));
  CHECK_THROWS_AS(series::scale(rule, -1), DomainError);
}

TEST_CASE("square rewrites exactly") {
  const auto lin = TermRule::linear_reciprocal(2, 1);
  const auto sq = series::square(lin);
  for (std::int64_t n = 1; n <= 100; ++n) {
    const double v = lin.eval(n);
    CHECK(sq.eval(n) == doctest::Approx(v * v).epsilon(1e-14));
  }
  CHECK(series::analyze(sq, 20).verdict == SeriesVerdict::Convergent);
  CHECK(series::square(TermRule::constant(3)).eval(1) == 9.0);
  CHECK_THROWS_AS(series::square(TermRule::bertrand_reciprocal(1, 2)),
                  DomainError);
  CHECK_THROWS_AS(series::square(TermRule::cantor_energy_asym(3)),
                  DomainError);
}

TEST_CASE("products stay in the catalog") {
  // (1/2)(1/2)^n  x  2 n^(-1) 2^n = 1/n.
  const auto prod = series::multiply(TermRule::poly_geometric(0.5, 0, 0.5),
                                     TermRule::poly_geometric(2, -1, 2));
  for (std::int64_t n = 1; n <= 60; ++n) {
    CHECK(prod.eval(n) ==
          doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-12));
  }
  const auto an = series::analyze(prod, 20);
  CHECK(an.verdict == SeriesVerdict::Divergent);
  REQUIRE(an.certificate.has_value());
  CHECK(an.certificate->bound == Certificate::Bound::HarmonicFloor);

  // Constant factors pass through as scaling.
  const auto scaled =
      series::multiply(TermRule::constant(4), TermRule::power_shifted(1, 2));
  CHECK(scaled.eval(3) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));

  // Tables multiply pointwise against anything defined from level 1.
  const auto tab = series::multiply(TermRule::from_table({1, 2, 3}),
                                    TermRule::power_shifted(1, 1));
  CHECK(tab.eval(3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(series::multiply(TermRule::from_table({1}),
                                   TermRule::bertrand_reciprocal(1, 2)),
                  DomainError);

  // Mismatched shifts with live powers have no exact product form.
  CHECK_THROWS_AS(series::multiply(TermRule::poly_geometric(1, 1, 0.5, 0),
                                   TermRule::poly_geometric(1, 1, 0.5, 1)),
                  DomainError);

  // But a degree-zero side contributes only its geometric part.
  const auto mixed = series::multiply(TermRule::poly_geometric(1, 0, 0.25),
                                      TermRule::poly_geometric(2, -3, 2, 1));
  for (std::int64_t n = 1; n <= 40; ++n) {
    const double expect = 2.0 * std::pow(static_cast<double>(n) + 1.0, -3.0) *
                          std::pow(0.5, static_cast<double>(n));
    CHECK(mixed.eval(n) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(series::analyze(mixed, 20).verdict == SeriesVerdict::Convergent);
}

TEST_CASE("analysis depth validation") {
  CHECK_THROWS_AS(series::analyze(TermRule::bertrand_reciprocal(1, 2), 1),
                  DomainError);
  CHECK_THROWS_AS(series::analyze(TermRule::from_table({1, 2}), 5),
                  IndexError);
  const auto an = series::analyze(TermRule::from_table({1, 2}), 2);
  CHECK(an.partial_sum == 3.0);
  CHECK(an.tail_bound == kInf);
}

}  // TEST_SUITE
