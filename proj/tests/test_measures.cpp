#include "doctest.h"

#include <cmath>

#include "circval/measures.hpp"
#include "circval/random_gen.hpp"

using namespace circval;

namespace {

// symmetric tent of unit slope: 0 at s=0, 1/2 at s=1/2
PLFunction sym_tent() {
  return PLFunction::from_breakpoints({{Rat(0), Rat(0)}, {rat(1, 2), rat(1, 2)}});
}

ValuationHandle slope_kernel() {
  return make_kernel_valuation(make_polynomial_kernel({{0, 1, 1.0}}));
}

}  // namespace

TEST_CASE("g_ab truncation") {
  const PLFunction g = sym_tent();
  CHECK(make_gab(g, Rat(0), rat(1, 2)) == g);
  CHECK(make_gab(g, rat(1, 5), rat(1, 5)) == PLFunction::constant(rat(1, 5)));

  const PLFunction trunc = make_gab(g, rat(1, 8), rat(1, 4));
  CHECK(trunc.nodes().size() == 4);
  CHECK(trunc.eval(Rat(0)) == rat(1, 8));     // g(1/8) held near 0
  CHECK(trunc.eval(rat(15, 16)) == rat(1, 8));
  CHECK(trunc.eval(rat(3, 16)) == rat(3, 16));  // g on the window
  CHECK(trunc.eval(rat(13, 16)) == rat(3, 16));
  CHECK(trunc.eval(rat(1, 2)) == rat(1, 4));  // g(1/4) across the middle
  CHECK(trunc.eval(rat(3, 8)) == rat(1, 4));
  CHECK(trunc == trunc.reflected());

  const PLFunction skew = PLFunction::from_breakpoints(
      {{Rat(0), Rat(0)}, {rat(1, 4), Rat(1)}});
  CHECK_THROWS_AS(make_gab(skew, Rat(0), rat(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(make_gab(g, rat(1, 4), rat(1, 8)), std::invalid_argument);
}

TEST_CASE("nu_raw closed forms") {
  const ValuationHandle v = slope_kernel();
  const PLFunction g = sym_tent();
  CHECK(nu_raw(v, g, rat(1, 5), rat(1, 5)) == doctest::Approx(0.0));
  CHECK(nu_raw(v, g, Rat(0), rat(1, 2)) == doctest::Approx(v(g)));
  // two mirror windows of slope 1: nu_raw = 2 * sigma0 * (b-a)
  CHECK(nu_raw(v, g, rat(1, 8), rat(1, 4)) == doctest::Approx(0.25));

  const ValuationHandle flat =
      make_kernel_valuation(make_polynomial_kernel({{1, 0, 1.0}}));
  CHECK_THROWS_AS(nu_raw(flat, g, Rat(0), rat(1, 4)), std::invalid_argument);
}

TEST_CASE("nu on the interval algebra") {
  const ValuationHandle v = slope_kernel();
  const PLFunction g = sym_tent();
  const NuRecord record = make_nu_record(g);

  // single arc in the lower half: half the raw value
  const double lower = nu(
      v, record, IntervalAlgebraElement::from_interval(rat(1, 8), rat(1, 4)));
  CHECK(lower == doctest::Approx(0.125));

  // full circle equals V(g) for symmetric g
  const double full =
      nu(v, record, IntervalAlgebraElement::from_interval(Rat(0), Rat(1)));
  CHECK(full == doctest::Approx(v(g)).epsilon(1e-12));

  // mirrored arc in the upper half carries the same mass
  const double upper = nu(
      v, record, IntervalAlgebraElement::from_interval(rat(3, 4), rat(7, 8)));
  CHECK(upper == doctest::Approx(lower).epsilon(1e-12));

  CHECK_THROWS_AS(IntervalAlgebraElement::from_arcs({Arc(rat(1, 4), rat(3, 4))}),
                  std::invalid_argument);
}

TEST_CASE("nu additivity and modularity") {
  Rng rng(51);
  const ValuationHandle v = make_kernel_valuation(
      make_polynomial_kernel({{1, 1, 1.0}, {0, 2, -0.5}, {2, 1, 0.25}}));
  const PLFunction g = random_symmetric_pl(rng, 6);
  const NuRecord record = make_nu_record(g);

  const std::array<Rat, 3> degenerate = {rat(1, 8), rat(1, 8), rat(1, 4)};
  CHECK(nu_additivity_check(v, g, std::span(&degenerate, 1)) == 0.0);

  for (int i = 0; i < 25; ++i) {
    const long a = rng.uniform_int(0, 50);
    const long b = a + rng.uniform_int(1, 40);
    const long c = b + rng.uniform_int(1, 127 - b);
    const std::array<Rat, 3> triple = {rat(a, 256), rat(b, 256), rat(c, 256)};
    CHECK(nu_additivity_check(v, g, std::span(&triple, 1)) <= 1e-10);

    auto interval = [&](long lo, long hi) {
      return IntervalAlgebraElement::from_interval(rat(lo, 256), rat(hi, 256));
    };
    const double lhs =
        nu(v, record, interval(a, b)) + nu(v, record, interval(a + 1, c));
    const double rhs =
        nu(v, record, interval(a, c)) + nu(v, record, interval(a + 1, b));
    CHECK(std::fabs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("Radon-Nikodym estimates") {
  const std::vector<Rat> schedule{rat(1, 32), rat(1, 128), rat(1, 512)};
  const PLFunction g = sym_tent();
  const NuRecord record = make_nu_record(g);

  const ValuationHandle v = slope_kernel();
  const RNEstimate on_slope =
      radon_nikodym_estimate(v, record, rat(1, 5), schedule);
  CHECK(on_slope.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(on_slope.cauchy_residual <= 1e-12);

  const ValuationHandle zero =
      make_external_valuation([](const PLFunction&) { return 0.0; }, true, true);
  CHECK(radon_nikodym_estimate(zero, record, rat(1, 5), schedule).value == 0.0);

  // a step threshold below min(g) reduces to K = gamma
  const ValuationHandle low_step = make_kernel_valuation(make_step_kernel(-10));
  CHECK(radon_nikodym_estimate(low_step, record, rat(1, 5), schedule).value ==
        doctest::Approx(1.0));

  CHECK_THROWS_AS(radon_nikodym_estimate(v, record, rat(1, 2), schedule),
                  std::invalid_argument);
}

TEST_CASE("kernel consistency at interior points") {
  const std::vector<Rat> schedule{rat(1, 32), rat(1, 128), rat(1, 512)};
  RecoverySettings recovery;
  recovery.m_schedule = {16, 32, 64};
  const PLFunction g = sym_tent();
  const std::vector<Rat> points{rat(1, 5), rat(2, 7), rat(5, 7)};

  CHECK(kernel_consistency_check(slope_kernel(), g, points, recovery, schedule) <=
        1e-6);

  const ValuationHandle mixed =
      make_kernel_valuation(make_polynomial_kernel({{1, 1, 1.0}}));
  CHECK(kernel_consistency_check(mixed, g, points, recovery, schedule) <= 1e-6);

  const ValuationHandle zero =
      make_external_valuation([](const PLFunction&) { return 0.0; }, true, true);
  CHECK(kernel_consistency_check(zero, g, points, recovery, schedule) == 0.0);
}

TEST_CASE("reconstruction round trip") {
  RecoverySettings recovery;
  recovery.m_schedule = {8, 16, 32};

  const ValuationHandle v = make_opaque_kernel_valuation(
      make_polynomial_kernel({{1, 1, 1.0}, {0, 2, 0.5}, {2, 1, -0.25}}));

  const ReconstructionResult constant =
      reconstruct_via_kernel(v, PLFunction::constant(rat(5, 3)), recovery);
  CHECK(constant.direct == 0.0);
  CHECK(constant.reconstructed == doctest::Approx(0.0));
  CHECK(constant.residual <= 1e-12);

  Rng rng(52);
  for (int i = 0; i < 5; ++i) {
    const PLFunction g = random_pl(rng, 10, 256, 8, 2);
    const ReconstructionResult result = reconstruct_via_kernel(v, g, recovery);
    CHECK(result.residual <= 1e-5);
    CHECK_FALSE(result.oscillation_warning);
  }

  // a saw input reconstructs to the recovered kernel value at its parameters
  const PLFunction saw = make_saw({rat(1, 2), Rat(1), 8});
  const ReconstructionResult on_saw = reconstruct_via_kernel(v, saw, recovery);
  CHECK(on_saw.residual <= 1e-5);
}

TEST_CASE("absolute continuity of nu") {
  ControlSettings control;
  control.slope_grid = 32;
  control.teeth_budget = 32;

  const PLFunction g = sym_tent();
  std::vector<IntervalAlgebraElement> elements;
  elements.push_back(IntervalAlgebraElement::from_interval(rat(1, 8), rat(1, 4)));
  elements.push_back(IntervalAlgebraElement::from_interval(rat(3, 8), rat(5, 8)));
  elements.push_back(IntervalAlgebraElement::from_arcs(
      {Arc(Rat(0), rat(1, 16)), Arc(rat(1, 4), rat(3, 8)),
       Arc(rat(1, 2), rat(9, 16))}));

  const ValuationHandle zero =
      make_external_valuation([](const PLFunction&) { return 0.0; }, true, true);
  const AbsContinuityReport trivial =
      absolute_continuity_check(zero, g, elements, control);
  CHECK(trivial.all_ok);
  CHECK(trivial.c_g == 0.0);

  const AbsContinuityReport report =
      absolute_continuity_check(slope_kernel(), g, elements, control);
  CHECK(report.all_ok);
  CHECK(report.c_g == doctest::Approx(1.0).epsilon(0.05));
  // |nu(I)| = H^1(I) for this kernel and unit slope
  CHECK(report.cases[0].nu_abs == doctest::Approx(report.cases[0].h1));

  Rng rng(53);
  for (int i = 0; i < 5; ++i) {
    const ValuationHandle v = make_kernel_valuation(
        random_polynomial_slope_kernel(rng));
    const PLFunction h = random_symmetric_pl(rng, 4);
    const AbsContinuityReport r =
        absolute_continuity_check(v, h, elements, control);
    CHECK(r.all_ok);
  }
}
