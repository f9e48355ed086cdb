#include "circval/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "circval/measures.hpp"
#include "circval/mcshane.hpp"
#include "circval/random_gen.hpp"
#include "circval/recovery.hpp"
#include "circval/valuation.hpp"

namespace circval {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

KernelSpec random_polynomial_kernel(Rng& rng) {
  KernelSpec spec = random_polynomial_slope_kernel(rng);
  auto& poly = std::get<PolynomialKernel>(spec.form);
  const int flats = static_cast<int>(rng.uniform_int(0, 2));
  for (int t = 0; t < flats; ++t)
    poly.terms.push_back({static_cast<int>(rng.uniform_int(0, 2)), 0,
                          static_cast<double>(rng.uniform_int(-4, 4)) / 4.0});
  return spec;
}

// 1. Exact lattice suite: join + meet == f + g, rational equality.
CheckResult check_lattice_exact(const VerifyConfig& config) {
  Stopwatch timer;
  Rng rng(config.seed + 1);
  int failures = 0;
  const int pairs = 1000;
  for (int i = 0; i < pairs; ++i) {
    const PLFunction f = random_pl(rng, 32);
    const PLFunction g = random_pl(rng, 32);
    const LatticePair lat = lattice(f, g);
    if (!(lat.join + lat.meet == f + g)) ++failures;
  }
  CheckResult result;
  result.name = "lattice_exact";
  result.observed = failures;
  result.threshold = 0;
  result.seconds = timer.seconds();
  result.pass = failures == 0 && result.seconds < 5.0;
  std::ostringstream detail;
  detail << pairs << " random pairs, exact join+meet=f+g, " << result.seconds
         << "s (limit 5s)";
  result.detail = detail.str();
  return result;
}

// 2a. Valuation identity for polynomial kernels, closed-form integration.
CheckResult check_valuation_identity_suite(const VerifyConfig& config) {
  Stopwatch timer;
  Rng rng(config.seed + 2);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const ValuationHandle v =
        make_kernel_valuation(random_polynomial_kernel(rng), config.quad_tol);
    worst = std::max(worst, check_valuation_identity(v, random_pl(rng, 16),
                                                     random_pl(rng, 16)));
  }
  return {"valuation_identity", worst <= 1e-10, worst, 1e-10,
          "100 random polynomial-kernel pairs", timer.seconds()};
}

// 2b. Inclusion-exclusion with N = 3.
CheckResult check_inclusion_exclusion_suite(const VerifyConfig& config) {
  Stopwatch timer;
  Rng rng(config.seed + 3);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const ValuationHandle v =
        make_kernel_valuation(random_polynomial_kernel(rng), config.quad_tol);
    const PLFunction fs[3] = {random_pl(rng, 10), random_pl(rng, 10),
                              random_pl(rng, 10)};
    worst = std::max(worst, check_inclusion_exclusion(v, fs));
  }
  return {"inclusion_exclusion_n3", worst <= 1e-10, worst, 1e-10,
          "100 random triples", timer.seconds()};
}

// 2c. Rotation and reflection invariance.
CheckResult check_invariance_suite(const VerifyConfig& config) {
  Stopwatch timer;
  Rng rng(config.seed + 4);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const ValuationHandle v =
        make_kernel_valuation(random_polynomial_kernel(rng), config.quad_tol);
    const std::vector<Transform> transforms = {
        Transform::rotation(rat(rng.uniform_int(1, 255), 256)),
        Transform::reflection()};
    worst = std::max(worst,
                     check_invariance(v, random_pl(rng, 16), transforms));
  }
  return {"rotation_reflection_invariance", worst <= 1e-10, worst, 1e-10,
          "100 random (f, transform) draws", timer.seconds()};
}

// 3. Kernel round trip for K(l,s) = 1/4 + l^2 s on the pinned grid.
void check_kernel_round_trip(const VerifyConfig& config,
                             std::vector<CheckResult>& out) {
  Stopwatch timer;
  const KernelSpec spec =
      make_polynomial_kernel({{0, 0, 0.25}, {2, 1, 1.0}}, SlopeUnit::PerTurn);
  const ValuationHandle v = make_kernel_valuation(spec, config.quad_tol);
  const ValuationHandle slope = slope_component(v);

  const std::vector<Rat> lambdas = {rat(-1), rat(0), rat(1, 2), rat(1)};
  const std::vector<Rat> sigmas = {rat(0), rat(1), rat(2)};
  RecoverySettings settings;  // schedule 2..256, extrapolated limit

  double worst_value = 0;
  double worst_ratio_dev = 0;
  bool ratios_ok = true;
  for (const Rat& lambda : lambdas) {
    for (const Rat& sigma : sigmas) {
      const RecoveryPoint point =
          recover_kernel_point(slope, lambda, sigma, settings);
      const double flat = v(PLFunction::constant(lambda));
      const double expected =
          spec.eval(to_double(lambda), to_double(sigma));
      worst_value =
          std::max(worst_value, std::fabs(point.extracted + flat - expected));
      if (sigma == 0) continue;
      const double slope_expected = expected - flat;
      for (size_t i = 0; i + 1 < point.values.size(); ++i) {
        const double em = std::fabs(point.values[i] - slope_expected);
        const double e2m = std::fabs(point.values[i + 1] - slope_expected);
        if (e2m < 1e-14) continue;
        const double ratio = em / e2m;
        worst_ratio_dev = std::max(worst_ratio_dev, std::fabs(ratio - 4.0));
        if (ratio < 3.0 || ratio > 5.0) ratios_ok = false;
      }
    }
  }
  const double elapsed = timer.seconds();
  {
    CheckResult result;
    result.name = "kernel_round_trip";
    result.observed = worst_value;
    result.threshold = 1e-6;
    result.seconds = elapsed;
    result.pass = worst_value <= 1e-6 && elapsed < 10.0;
    std::ostringstream detail;
    detail << "K = 1/4 + l^2 s, 4x3 grid, m to 256, " << elapsed
           << "s (limit 10s)";
    result.detail = detail.str();
    out.push_back(result);
  }
  out.push_back({"kernel_round_trip_rate", ratios_ok, worst_ratio_dev, 1.0,
                 "error ratio between m and 2m within [3,5]", elapsed});
}

// 4. Main-theorem reconstruction round trip on random PL inputs.
CheckResult check_reconstruction(const VerifyConfig& config) {
  Stopwatch timer;
  Rng rng(config.seed + 5);
  const KernelSpec spec = make_polynomial_kernel(
      {{1, 1, 1.0}, {0, 2, 0.5}, {2, 1, -0.25}}, SlopeUnit::PerTurn);
  const ValuationHandle v = make_opaque_kernel_valuation(spec, config.quad_tol);
  RecoverySettings settings;
  settings.m_schedule = {8, 16, 32};
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const PLFunction g = random_pl(rng, 10, 256, 8, 2);
    const ReconstructionResult r = reconstruct_via_kernel(v, g, settings);
    worst = std::max(worst, r.residual);
  }
  return {"theorem_reconstruction", worst <= 1e-5, worst, 1e-5,
          "20 random PL inputs, opaque polynomial slope kernel",
          timer.seconds()};
}

// 5. Flat invisibility for slope-type kernels, plus the flat-kernel
// negative control that must be caught.
void check_flat_invisibility(const VerifyConfig& config,
                             std::vector<CheckResult>& out) {
  Stopwatch timer;
  const Rat d = rat(1, 8);
  const std::vector<Rat> plateaus = {rat(0), rat(1, 8), rat(1, 4),
                                     1 - 2 * d - rat(1, 64)};
  const std::vector<Rat> starts = {rat(0), rat(1, 3)};

  double worst = 0;
  if (config.invisibility_kernel) {
    const ValuationHandle w = [&] {
      ValuationHandle h = make_opaque_kernel_valuation(
          *config.invisibility_kernel, config.quad_tol);
      h.rotation_invariant = true;
      h.vanishes_on_constants = true;  // asserted by the caller
      return h;
    }();
    worst = flat_invisibility_check(w, rat(4), d, plateaus, starts);
  } else {
    const std::vector<KernelSpec> kernels = {
        make_polynomial_kernel({{0, 1, 1.0}}),
        make_polynomial_kernel({{1, 1, 1.0}, {0, 3, 0.5}}),
        make_step_kernel(0.25)};
    for (const KernelSpec& spec : kernels) {
      const ValuationHandle w = make_kernel_valuation(spec, config.quad_tol);
      worst = std::max(
          worst, flat_invisibility_check(w, rat(4), d, plateaus, starts));
    }
  }
  out.push_back({"flat_invisibility", worst <= 1e-10, worst, 1e-10,
                 "slope-type kernels on the (plateau, start) grid",
                 timer.seconds()});

  Stopwatch negative_timer;
  ValuationHandle lying = make_opaque_kernel_valuation(
      make_polynomial_kernel({{1, 0, 1.0}}), config.quad_tol);
  lying.rotation_invariant = true;
  lying.vanishes_on_constants = true;  // deliberately wrong
  const double control =
      flat_invisibility_check(lying, rat(4), d, plateaus, starts);
  out.push_back({"flat_invisibility_negative_control", control >= 1e-3,
                 control, 1e-3, "flat kernel K = l must be visible",
                 negative_timer.seconds()});
}

// 6. Lemma relating the Radon-Nikodym derivative of nu_g to the recovered
// kernel at (g(t), |g'(t)|).
CheckResult check_lemma_ksaw(const VerifyConfig& config) {
  Stopwatch timer;
  Rng rng(config.seed + 6);
  RecoverySettings settings;
  settings.m_schedule = {16, 32, 64};
  const std::vector<Rat> eps_schedule = {rat(1, 32), rat(1, 128), rat(1, 512)};
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    const ValuationHandle v = make_opaque_kernel_valuation(
        random_polynomial_slope_kernel(rng), config.quad_tol);
    const PLFunction g = random_symmetric_pl(rng, 5);
    // two interior points per function: midpoints of the longest segments
    auto segs = g.segments();
    std::sort(segs.begin(), segs.end(),
              [](const auto& x, const auto& y) { return x.length() > y.length(); });
    std::vector<Rat> points;
    for (size_t k = 0; k < 2 && k < segs.size(); ++k)
      points.push_back(mod1(segs[k].s_begin + segs[k].length() / 2));
    worst = std::max(worst, kernel_consistency_check(v, g, points, settings,
                                                     eps_schedule));
  }
  return {"lemma_ksaw", worst <= 1e-4, worst, 1e-4,
          "10 interior points across 5 symmetric PL functions",
          timer.seconds()};
}

// 7. nu: additivity, modularity, and full-circle value.
void check_nu_suite(const VerifyConfig& config, std::vector<CheckResult>& out) {
  Stopwatch timer;
  Rng rng(config.seed + 7);
  double worst_add = 0;
  double worst_mod = 0;
  double worst_full = 0;
  for (int i = 0; i < 50; ++i) {
    const ValuationHandle v = make_kernel_valuation(
        random_polynomial_slope_kernel(rng), config.quad_tol);
    const PLFunction g = random_symmetric_pl(rng, 6);
    const NuRecord record = make_nu_record(g);

    long cuts[3];
    cuts[0] = rng.uniform_int(0, 60);
    cuts[1] = cuts[0] + rng.uniform_int(1, 30);
    cuts[2] = cuts[1] + rng.uniform_int(1, 127 - cuts[1]);
    const std::array<Rat, 3> triple = {rat(cuts[0], 256), rat(cuts[1], 256),
                                       rat(cuts[2], 256)};
    worst_add = std::max(
        worst_add, nu_additivity_check(v, g, std::span(&triple, 1)));

    // overlapping pair: I = (a,b], J = (c,d] with a < c < b < d <= 1/2
    const long a = rng.uniform_int(0, 40);
    const long c = a + rng.uniform_int(1, 30);
    const long b = c + rng.uniform_int(1, 30);
    const long dd = b + rng.uniform_int(1, 127 - b);
    auto interval = [&](long lo, long hi) {
      return IntervalAlgebraElement::from_interval(rat(lo, 256), rat(hi, 256));
    };
    const double lhs = nu(v, record, interval(a, b)) + nu(v, record, interval(c, dd));
    const double rhs = nu(v, record, interval(a, dd)) + nu(v, record, interval(c, b));
    worst_mod = std::max(worst_mod, std::fabs(lhs - rhs));

    if (i < 20) {
      const double full =
          nu(v, record, IntervalAlgebraElement::from_interval(Rat(0), Rat(1)));
      worst_full = std::max(worst_full, std::fabs(full - v(g)));
    }
  }
  const double elapsed = timer.seconds();
  out.push_back({"nu_additivity", worst_add <= 1e-10, worst_add, 1e-10,
                 "50 random triples", elapsed});
  out.push_back({"nu_modularity", worst_mod <= 1e-10, worst_mod, 1e-10,
                 "50 overlapping interval pairs", elapsed});
  out.push_back({"nu_full_circle", worst_full <= 1e-8, worst_full, 1e-8,
                 "nu([0,1)) = V(g) for 20 symmetric g", elapsed});
}

// 8. The step-kernel counterexample, exactly.
CheckResult check_step_counterexample(const VerifyConfig& config) {
  Stopwatch timer;
  const ValuationHandle v =
      make_kernel_valuation(make_step_kernel(1.0), config.quad_tol);
  double worst = 0;
  for (int m = 1; m <= 64; ++m) {
    const Rat amplitude = rat(1, 4 * m);
    const PLFunction f = make_saw({1 + amplitude, Rat(1), m});
    const PLFunction g = make_saw({1 - amplitude, Rat(1), m});
    worst = std::max(worst, std::fabs(v(f) - 1.0));
    worst = std::max(worst, std::fabs(v(g)));
    if (d_tau(f, g) != rat(1, 2 * m)) worst = std::max(worst, 1.0);
  }
  return {"step_counterexample", worst == 0, worst, 0,
          "V(f_m)=1, V(g_m)=0, d_tau=1/(2m) exactly for m=1..64",
          timer.seconds()};
}

// 9. Control-measure estimator against the brute-force density oracle.
void check_control_measure(const VerifyConfig& config,
                           std::vector<CheckResult>& out) {
  Stopwatch timer;
  struct Case {
    KernelSpec spec;
    Rat gamma_cap;
  };
  const std::vector<Case> cases = {
      {make_polynomial_kernel({{0, 1, 1.0}}), rat(2)},
      {make_polynomial_kernel({{0, 2, -1.0}, {0, 1, 1.0}}), rat(1)},
      {make_polynomial_kernel({{0, 3, 1.0}}), rat(1)},
  };
  const ArcSet region = ArcSet::from_arcs({Arc(Rat(0), rat(1, 2))});
  ControlSettings settings;
  double worst_rel = 0;
  for (const Case& item : cases) {
    const ValuationHandle v = make_kernel_valuation(item.spec, config.quad_tol);
    const ControlEstimate estimate =
        control_measure_estimate(v, Rat(0), item.gamma_cap, region, settings);
    const double oracle =
        theta_oracle_for_kernel(item.spec, 0.0, to_double(item.gamma_cap));
    const double rel = std::fabs(estimate.theta - oracle) /
                       std::max(std::fabs(oracle), 1e-12);
    worst_rel = std::max(worst_rel, rel);
  }
  const double elapsed = timer.seconds();
  {
    CheckResult result;
    result.name = "control_estimator_vs_oracle";
    result.observed = worst_rel;
    result.threshold = 0.05;
    result.seconds = elapsed;
    result.pass = worst_rel <= 0.05 && elapsed < 30.0;
    std::ostringstream detail;
    detail << "theta for K=s, K=-s^2+s, K=s^3, " << elapsed
           << "s (limit 30s)";
    result.detail = detail.str();
    out.push_back(result);
  }

  Stopwatch rotation_timer;
  const ValuationHandle v =
      make_kernel_valuation(cases[0].spec, config.quad_tol);
  const ControlEstimate first = control_measure_estimate(
      v, Rat(0), rat(2), ArcSet::from_arcs({Arc(Rat(0), rat(1, 4))}), settings);
  const ControlEstimate second = control_measure_estimate(
      v, Rat(0), rat(2), ArcSet::from_arcs({Arc(rat(1, 2), rat(3, 4))}),
      settings);
  const double dev = std::fabs(first.theta - second.theta);
  out.push_back({"control_rotation_consistency", dev <= 1e-9, dev, 1e-9,
                 "theta on two disjoint equal arcs", rotation_timer.seconds()});
}

// 10. Outer-band geometry and the McShane extension, exact checks.
void check_geometry_lemmas(const VerifyConfig& config,
                           std::vector<CheckResult>& out) {
  Stopwatch timer;
  Rng rng(config.seed + 8);
  int band_failures = 0;
  const std::vector<Rat> omegas = {rat(1, 8), rat(1, 32), rat(1, 128),
                                   rat(1, 512)};
  for (int i = 0; i < 100; ++i) {
    const ArcSet set = random_arcset(rng, 8);
    Rat previous(2);
    for (const Rat& omega : omegas) {
      const Rat measure = outer_band(set, omega).h1();
      if (measure > 2 * static_cast<long>(set.arcs().size()) * omega)
        ++band_failures;
      if (measure > previous) ++band_failures;  // monotone in omega
      previous = measure;
    }
  }
  out.push_back({"outer_band_geometry", band_failures == 0,
                 static_cast<double>(band_failures), 0,
                 "H1(A^w) <= 2#arcs*w and monotone on 100 arc sets",
                 timer.seconds()});

  Stopwatch mcshane_timer;
  int mcshane_failures = 0;
  for (int i = 0; i < 30; ++i) {
    const Rat L = rat(rng.uniform_int(2, 12), 1);
    const PLFunction base = random_pl(rng, 8, 128, 4, 2);
    const FunctionNorms base_norms = norms(base);
    const Rat scale = base_norms.lip_per_turn > 0
                          ? L / (2 * base_norms.lip_per_turn)
                          : Rat(1);
    const PLFunction source = base.scaled(scale);  // lip <= L/2

    std::vector<McShaneDatum> data;
    const ArcSet arcs = random_arcset(rng, 3);
    for (const Arc& arc : arcs.arcs()) {
      std::vector<std::pair<Rat, Rat>> inner;  // (offset into arc, value)
      for (const Breakpoint& bp : source.nodes()) {
        const Rat offset = mod1(bp.s - arc.a);
        if (offset > 0 && offset < arc.length()) inner.emplace_back(offset, bp.v);
      }
      std::sort(inner.begin(), inner.end());
      McShaneDatum datum;
      datum.nodes.push_back({arc.a, source.eval(arc.a)});
      for (const auto& [offset, value] : inner)
        datum.nodes.push_back({arc.a + offset, value});
      datum.nodes.push_back({arc.b, source.eval(arc.b)});
      data.push_back(std::move(datum));
    }

    const bool with_clamp = rng.uniform_int(0, 1) == 1;
    std::optional<McShaneClamp> clamp;
    if (with_clamp)
      clamp = McShaneClamp{source.shifted(rat(-1, 2)), source.shifted(rat(1, 2))};

    const PLFunction ext = mcshane_extend(data, L, clamp);
    for (const McShaneDatum& datum : data) {
      for (const Breakpoint& bp : datum.nodes)
        if (ext.eval(bp.s) != bp.v) ++mcshane_failures;
      for (size_t k = 0; k + 1 < datum.nodes.size(); ++k) {
        const Rat mid = (datum.nodes[k].s + datum.nodes[k + 1].s) / 2;
        const Rat expect =
            (datum.nodes[k].v + datum.nodes[k + 1].v) / 2;
        if (ext.eval(mid) != expect) ++mcshane_failures;
      }
    }
    if (norms(ext).lip_per_turn > L) ++mcshane_failures;
    if (with_clamp) {
      const Arc everywhere(Rat(0), Rat(1));
      if (!pl_le_on_arc(clamp->lower, ext, everywhere)) ++mcshane_failures;
      if (!pl_le_on_arc(ext, clamp->upper, everywhere)) ++mcshane_failures;
    }
  }
  out.push_back({"mcshane_extension", mcshane_failures == 0,
                 static_cast<double>(mcshane_failures), 0,
                 "data agreement, lip bound, clamp bounds on 30 cases",
                 mcshane_timer.seconds()});
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyConfig& config) {
  std::vector<CheckResult> results;
  results.push_back(check_lattice_exact(config));
  results.push_back(check_valuation_identity_suite(config));
  results.push_back(check_inclusion_exclusion_suite(config));
  results.push_back(check_invariance_suite(config));
  check_kernel_round_trip(config, results);
  results.push_back(check_reconstruction(config));
  check_flat_invisibility(config, results);
  results.push_back(check_lemma_ksaw(config));
  check_nu_suite(config, results);
  results.push_back(check_step_counterexample(config));
  check_control_measure(config, results);
  check_geometry_lemmas(config, results);
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& result : results)
    if (!result.pass) return false;
  return true;
}

}  // namespace circval
