#include "doctest.h"

#include <cmath>
#include <numbers>

#include "circval/random_gen.hpp"
#include "circval/recovery.hpp"
#include "circval/valuation.hpp"

using namespace circval;

namespace {

PLFunction tent01() {
  return PLFunction::from_breakpoints({{Rat(0), Rat(0)}, {rat(1, 2), Rat(1)}});
}

}  // namespace

TEST_CASE("kernel valuation closed forms") {
  Rng rng(31);
  const ValuationHandle unit =
      make_kernel_valuation(make_polynomial_kernel({{0, 0, 1.0}}));
  for (int i = 0; i < 5; ++i)
    CHECK(unit(random_pl(rng, 8)) == doctest::Approx(1.0).epsilon(1e-14));

  const ValuationHandle level =
      make_kernel_valuation(make_polynomial_kernel({{1, 0, 1.0}}));
  CHECK(level(PLFunction::constant(Rat(2))) == doctest::Approx(2.0));

  // K = lambda * gamma on the unit tent: integral of 2 * f = 1
  const ValuationHandle mixed =
      make_kernel_valuation(make_polynomial_kernel({{1, 1, 1.0}}));
  const PLFunction tent = tent01();
  CHECK(mixed(tent) == doctest::Approx(1.0).epsilon(1e-14));

  // Riemann-sum oracle for the same value
  double riemann = 0;
  const int n = 1000000;
  for (int k = 0; k < n; ++k) {
    const double s = (k + 0.5) / n;
    const double value = s <= 0.5 ? 2 * s : 2 * (1 - s);
    riemann += value * 2.0;
  }
  riemann /= n;
  CHECK(mixed(tent) == doctest::Approx(riemann).epsilon(1e-9));
}

TEST_CASE("step kernels integrate exactly") {
  const ValuationHandle step = make_kernel_valuation(make_step_kernel(1.0));
  for (int m : {1, 3, 17, 64}) {
    const Rat amplitude = rat(1, 4 * m);
    CHECK(step(make_saw({1 + amplitude, Rat(1), m})) == 1.0);
    CHECK(step(make_saw({1 - amplitude, Rat(1), m})) == 0.0);
    CHECK(step(make_saw({Rat(1), Rat(1), m})) == 0.5);
  }

  // interval-counting oracle on a generic function
  Rng rng(32);
  for (int i = 0; i < 10; ++i) {
    const PLFunction f = random_pl(rng, 12);
    double counted = 0;
    for (const auto& seg : f.segments()) {
      const int slices = 20000;
      for (int k = 0; k < slices; ++k) {
        const double t = (k + 0.5) / slices;
        const double v =
            to_double(seg.v_begin) +
            (to_double(seg.v_end) - to_double(seg.v_begin)) * t;
        if (v >= 1.0)
          counted += std::fabs(to_double(seg.slope)) * to_double(seg.length());
      }
    }
    counted /= 20000;
    CHECK(step(f) == doctest::Approx(counted).epsilon(5e-3));
  }
}

TEST_CASE("tabulated kernels") {
  // K = lambda * gamma is bilinear, so the table reproduces it exactly
  TabulatedKernel table;
  for (int i = 0; i <= 8; ++i) table.lambda_grid.push_back(-2 + 0.5 * i);
  for (int j = 0; j <= 8; ++j) table.gamma_grid.push_back(0.5 * j);
  for (double lambda : table.lambda_grid) {
    std::vector<double> row;
    for (double gamma : table.gamma_grid) row.push_back(lambda * gamma);
    table.values.push_back(row);
  }
  const KernelSpec spec{table, SlopeUnit::PerTurn};
  const ValuationHandle v = make_kernel_valuation(spec, 1e-10);
  CHECK(v(tent01()) == doctest::Approx(1.0).epsilon(1e-8));

  const PLFunction wild = PLFunction::from_breakpoints(
      {{Rat(0), Rat(0)}, {rat(1, 2), Rat(100)}});  // slope 200, off the grid
  CHECK_THROWS_AS(v(wild), std::domain_error);
}

TEST_CASE("slope unit conversion") {
  // per-radian K = gamma picks up the 1/(2 pi) conversion
  const ValuationHandle per_radian = make_kernel_valuation(
      make_polynomial_kernel({{0, 1, 1.0}}, SlopeUnit::PerRadian));
  const ValuationHandle per_turn =
      make_kernel_valuation(make_polynomial_kernel({{0, 1, 1.0}}));
  const PLFunction tent = tent01();
  CHECK(per_radian(tent) ==
        doctest::Approx(per_turn(tent) / (2 * std::numbers::pi)));
}

TEST_CASE("translation") {
  Rng rng(33);
  const ValuationHandle square =
      make_kernel_valuation(make_polynomial_kernel({{2, 0, 1.0}}));
  const ValuationHandle translated = translate_valuation(square, Rat(3));
  CHECK(translated(PLFunction::constant(Rat(0))) == doctest::Approx(0.0));

  // V_c(f) = integral((f+c)^2 - c^2) = integral(f^2 + 2 c f)
  const ValuationHandle direct =
      make_kernel_valuation(make_polynomial_kernel({{2, 0, 1.0}, {1, 0, 6.0}}));
  for (int i = 0; i < 10; ++i) {
    const PLFunction f = random_pl(rng, 10);
    CHECK(translated(f) == doctest::Approx(direct(f)).epsilon(1e-12));
  }

  // composition: (V_a)_b = V_(a+b)
  const ValuationHandle twice =
      translate_valuation(translate_valuation(square, Rat(1)), Rat(2));
  for (int i = 0; i < 5; ++i) {
    const PLFunction f = random_pl(rng, 8);
    CHECK(twice(f) == doctest::Approx(translated(f)).epsilon(1e-12));
  }
}

TEST_CASE("flat and slope components of kernel handles") {
  // K = lambda^2 + lambda gamma: flat part lambda^2, slope part lambda gamma
  const KernelSpec spec = make_polynomial_kernel({{2, 0, 1.0}, {1, 1, 1.0}});
  const ValuationHandle v = make_kernel_valuation(spec);
  CHECK_FALSE(v.vanishes_on_constants);

  const ValuationHandle flat = flat_component(v);
  const PLFunction tent = tent01();
  CHECK(flat(tent) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const ValuationHandle slope = slope_component(v);
  CHECK(slope.vanishes_on_constants);
  CHECK(slope(PLFunction::constant(Rat(7))) == doctest::Approx(0.0));
  const ValuationHandle direct_slope =
      make_kernel_valuation(make_polynomial_kernel({{1, 1, 1.0}}));
  Rng rng(34);
  for (int i = 0; i < 10; ++i) {
    const PLFunction f = random_pl(rng, 10);
    CHECK(slope(f) == doctest::Approx(direct_slope(f)).epsilon(1e-12));
    CHECK(flat(f) + slope(f) == doctest::Approx(v(f)).epsilon(1e-12));
  }

  // flat of a flat component is itself
  const ValuationHandle flat2 = flat_component(flat);
  for (int i = 0; i < 5; ++i) {
    const PLFunction f = random_pl(rng, 8);
    CHECK(flat2(f) == doctest::Approx(flat(f)).epsilon(1e-12));
  }
}

TEST_CASE("flat component of a black box is sampled") {
  const ValuationHandle opaque =
      make_opaque_kernel_valuation(make_polynomial_kernel({{2, 0, 1.0}}));
  const ValuationHandle flat = flat_component(opaque);
  CHECK(flat(tent01()) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(flat(PLFunction::constant(rat(5, 2))) == doctest::Approx(6.25));
}

TEST_CASE("valuation identity and inclusion-exclusion") {
  Rng rng(35);
  const ValuationHandle v = make_kernel_valuation(
      make_polynomial_kernel({{1, 1, 1.0}, {0, 2, 0.5}, {2, 0, 0.25}}));
  const PLFunction f = random_pl(rng, 12);
  CHECK(check_valuation_identity(v, f, f) == 0.0);

  for (int i = 0; i < 20; ++i) {
    CHECK(check_valuation_identity(v, random_pl(rng, 16), random_pl(rng, 16)) <=
          1e-10);
    const PLFunction fs[3] = {random_pl(rng, 8), random_pl(rng, 8),
                              random_pl(rng, 8)};
    CHECK(check_inclusion_exclusion(v, fs) <= 1e-10);
  }

  // disjointly supported bumps under a constant-null valuation are additive
  const ValuationHandle slope =
      make_kernel_valuation(make_polynomial_kernel({{0, 1, 1.0}}));
  const PLFunction bumps[3] = {
      make_hat({rat(4), rat(1, 16), Rat(0), Rat(0)}),
      make_hat({rat(4), rat(1, 16), Rat(0), rat(1, 3)}),
      make_hat({rat(4), rat(1, 16), Rat(0), rat(2, 3)})};
  PLFunction joined = bumps[0];
  for (int i = 1; i < 3; ++i) joined = lattice(joined, bumps[i]).join;
  const double sum = slope(bumps[0]) + slope(bumps[1]) + slope(bumps[2]);
  CHECK(std::fabs(slope(joined) - sum) <= 1e-10);
  CHECK(check_inclusion_exclusion(slope, bumps) <= 1e-10);
}

TEST_CASE("invariance checker") {
  Rng rng(36);
  const ValuationHandle v = make_kernel_valuation(
      make_polynomial_kernel({{1, 1, 0.5}, {0, 3, 1.0}}));
  const PLFunction f = random_pl(rng, 16);
  const std::vector<Transform> identity = {Transform::rotation(Rat(0))};
  CHECK(check_invariance(v, f, identity) == 0.0);

  std::vector<Transform> transforms;
  for (int i = 0; i < 16; ++i)
    transforms.push_back(Transform::rotation(rat(rng.uniform_int(1, 511), 512)));
  transforms.push_back(Transform::reflection());
  CHECK(check_invariance(v, f, transforms) <= 1e-10);
}

TEST_CASE("tau continuity probe") {
  const ValuationHandle v =
      make_kernel_valuation(make_polynomial_kernel({{1, 1, 1.0}}));
  const PLFunction tent = tent01();

  std::vector<PLFunction> constant_seq(3, tent);
  const TauProbeReport constant_report =
      tau_continuity_probe(v, constant_seq, tent);
  for (const TauProbeEntry& entry : constant_report.entries)
    CHECK(entry.deviation == 0.0);

  // dyadic interpolants converge in d_tau and in value
  std::vector<PLFunction> interpolants;
  for (int n : {2, 4, 8, 16}) {
    std::vector<Rat> samples;
    for (int k = 0; k < n; ++k) samples.push_back(tent.eval(rat(k, n)));
    interpolants.push_back(interpolate_samples(samples));
  }
  const TauProbeReport report = tau_continuity_probe(v, interpolants, tent);
  CHECK(report.lip_bound <= 2.0 + 1e-12);
  CHECK(report.entries.back().deviation <= 1e-12);
  CHECK(report.entries.back().d_tau_to_limit <= 1e-12);

  // the step example: uniform convergence to the constant 1 without
  // tau-convergence, and valuations that refuse to settle
  const ValuationHandle step = make_kernel_valuation(make_step_kernel(1.0));
  std::vector<PLFunction> interleaved;
  for (int m : {1, 2, 4, 8}) {
    interleaved.push_back(make_saw({1 + rat(1, 4 * m), Rat(1), m}));
    interleaved.push_back(make_saw({1 - rat(1, 4 * m), Rat(1), m}));
  }
  const TauProbeReport step_report =
      tau_continuity_probe(step, interleaved, PLFunction::constant(Rat(1)));
  for (size_t i = 0; i < step_report.entries.size(); ++i)
    CHECK(step_report.entries[i].deviation ==
          doctest::Approx(i % 2 == 0 ? 1.0 : 0.0));
}

TEST_CASE("uniform continuity probe") {
  const ValuationHandle zero =
      make_external_valuation([](const PLFunction&) { return 0.0; }, true, true);
  CHECK(uniform_continuity_probe(zero, 2.0, 64, 7).worst_delta == 0.0);

  // smooth kernels have an empirically bounded modulus
  const ValuationHandle smooth =
      make_kernel_valuation(make_polynomial_kernel({{1, 1, 1.0}}));
  const UniformProbeReport smooth_report =
      uniform_continuity_probe(smooth, 2.0, 128, 7);
  CHECK(smooth_report.max_delta_with_dtau_below(1e-3) <= 0.05);

  // the step kernel exhibits unit jumps at vanishing distance
  const ValuationHandle step = make_kernel_valuation(make_step_kernel(1.0));
  const UniformProbeReport step_report =
      uniform_continuity_probe(step, 2.0, 128, 7);
  CHECK(step_report.worst_delta >= 1.0 - 1e-12);
  CHECK(step_report.min_dtau_with_delta_at_least(1.0 - 1e-12) <= 1.0 / 64);
}
