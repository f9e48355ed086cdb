#include "circval/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circval {

PLFunction make_psi(const Rat& level, const Rat& slope) {
  if (slope < 0) throw std::invalid_argument("psi slope must be >= 0");
  if (slope == 0) return PLFunction::constant(level);
  return PLFunction::from_breakpoints(
      {{Rat(0), level - slope / 4}, {rat(1, 2), level + slope / 4}});
}

PLFunction make_saw(const SawParams& params) {
  if (params.teeth < 1) throw std::invalid_argument("saw needs at least one tooth");
  if (params.slope < 0) throw std::invalid_argument("saw slope must be >= 0");
  if (params.slope == 0) return PLFunction::constant(params.level);
  const long m = params.teeth;
  const Rat amplitude = params.slope / (4 * m);
  std::vector<Breakpoint> nodes;
  nodes.reserve(static_cast<size_t>(2 * m));
  for (long k = 0; k < 2 * m; ++k)
    nodes.push_back({rat(k, 2 * m), (k % 2) ? Rat(params.level + amplitude)
                                            : Rat(params.level - amplitude)});
  return PLFunction::from_breakpoints(std::move(nodes));
}

PLFunction make_hat(const HatParams& params) {
  if (params.slope < 0) throw std::invalid_argument("hat slope must be >= 0");
  if (params.rise <= 0 || params.rise > rat(1, 4))
    throw std::invalid_argument("hat rise must lie in (0, 1/4]");
  if (params.plateau < 0 || params.plateau > 1 - 2 * params.rise)
    throw std::invalid_argument("hat plateau must lie in [0, 1 - 2*rise]");
  if (params.slope == 0) return PLFunction::constant(Rat(0));
  const Rat peak = params.slope * params.rise;
  std::vector<Breakpoint> nodes;
  nodes.push_back({params.start, Rat(0)});
  nodes.push_back({params.start + params.rise, peak});
  if (params.plateau > 0)
    nodes.push_back({params.start + params.rise + params.plateau, peak});
  const Rat end = params.start + 2 * params.rise + params.plateau;
  if (end - params.start < 1) nodes.push_back({end, Rat(0)});
  return pl_from_nodes(std::move(nodes));
}

namespace {

void require_recoverable(const ValuationHandle& v) {
  if (!v.rotation_invariant)
    throw std::invalid_argument("recovery requires a rotation-invariant valuation");
  if (!v.vanishes_on_constants)
    throw std::invalid_argument(
        "recovery requires a valuation vanishing on constants; decompose first");
}

void finalize_point(RecoveryPoint& point, const RecoverySettings& settings) {
  const auto& values = point.values;
  const size_t n = values.size();
  const size_t window = std::min<size_t>(3, n);
  point.cauchy_residual = 0;
  for (size_t i = n - window; i + 1 < n; ++i)
    point.cauchy_residual =
        std::max(point.cauchy_residual, std::fabs(values[i + 1] - values[i]));
  point.oscillation = false;
  if (n >= 3) {
    const double last_gap = std::fabs(values[n - 1] - values[n - 2]);
    const double prev_gap = std::fabs(values[n - 2] - values[n - 3]);
    // Converging tails contract; a gap that stops shrinking is flagged.
    point.oscillation = last_gap > std::max(0.8 * prev_gap, 10 * settings.tol);
  }
  point.extracted = values.back();
  if (settings.extrapolate && n >= 2 && !point.oscillation &&
      point.schedule[n - 1] == 2 * point.schedule[n - 2]) {
    point.extracted = values[n - 1] + (values[n - 1] - values[n - 2]) / 3.0;
  }
}

}  // namespace

RecoveryPoint recover_kernel_point(const ValuationHandle& v, const Rat& lambda,
                                   const Rat& sigma,
                                   const RecoverySettings& settings) {
  require_recoverable(v);
  if (settings.m_schedule.empty())
    throw std::invalid_argument("empty m-schedule");
  for (size_t i = 1; i < settings.m_schedule.size(); ++i)
    if (settings.m_schedule[i] <= settings.m_schedule[i - 1])
      throw std::invalid_argument("m-schedule must increase");
  RecoveryPoint point;
  point.lambda = lambda;
  point.sigma = sigma;
  point.schedule = settings.m_schedule;
  point.values.reserve(settings.m_schedule.size());
  for (int m : settings.m_schedule)
    point.values.push_back(v(make_saw({lambda, sigma, m})));
  finalize_point(point, settings);
  return point;
}

RecoveryReport recover_kernel_grid(const ValuationHandle& v,
                                   std::span<const Rat> lambdas,
                                   std::span<const Rat> sigmas,
                                   const RecoverySettings& settings) {
  RecoveryReport report;
  report.settings = settings;
  report.points.reserve(lambdas.size() * sigmas.size());
  for (const Rat& lambda : lambdas)
    for (const Rat& sigma : sigmas)
      report.points.push_back(recover_kernel_point(v, lambda, sigma, settings));
  return report;
}

double flat_invisibility_check(const ValuationHandle& w, const Rat& slope,
                               const Rat& rise, std::span<const Rat> plateaus,
                               std::span<const Rat> starts) {
  if (!w.rotation_invariant || !w.vanishes_on_constants)
    throw std::invalid_argument(
        "flat invisibility requires a rotation-invariant valuation that is "
        "null on constants");
  const double base = w(make_hat({slope, rise, Rat(0), Rat(0)}));
  double worst = 0;
  for (const Rat& plateau : plateaus)
    for (const Rat& start : starts)
      worst = std::max(
          worst, std::fabs(w(make_hat({slope, rise, plateau, start})) - base));
  return worst;
}

SawDecomposition saw_decomposition_check(const ValuationHandle& v,
                                         const SawParams& params) {
  require_recoverable(v);
  const long m = params.teeth;
  const Rat base = params.level - params.slope / (4 * m);

  // Single tooth over the base: the hat of slope sigma and rise 1/(2m) at
  // offset 0 (built directly so m = 1, where the rise exceeds 1/4, works).
  PLFunction tooth = PLFunction::constant(Rat(0));
  if (params.slope != 0) {
    std::vector<Breakpoint> nodes{{Rat(0), Rat(0)},
                                  {rat(1, 2 * m), Rat(params.slope / (2 * m))}};
    if (m >= 2) nodes.push_back({rat(1, m), Rat(0)});
    tooth = pl_from_nodes(std::move(nodes));
  }

  PLFunction assembled = tooth.shifted(base);
  for (long j = 1; j < m; ++j)
    assembled = lattice(assembled, tooth.rotated(rat(j, m)).shifted(base)).join;

  const PLFunction saw = make_saw(params);
  SawDecomposition result;
  result.exact_equal = assembled == saw;
  const ValuationHandle v_base = translate_valuation(v, base);
  result.value_residual =
      std::fabs(v(saw) - static_cast<double>(m) * v_base(tooth));
  return result;
}

namespace {

// Nonnegative zigzag of |slope| = sigma filling the arcs of the region with
// n teeth per arc, amplitude capped at l (trapezoid teeth when the natural
// peak would exceed the cap).
PLFunction zigzag(const ArcSet& region, const Rat& sigma, int teeth, const Rat& cap) {
  std::vector<Breakpoint> nodes;
  for (const Arc& arc : region.arcs()) {
    const Rat width = arc.length() / teeth;
    const Rat natural_peak = sigma * width / 2;
    for (int i = 0; i < teeth; ++i) {
      const Rat x = arc.a + width * i;
      nodes.push_back({x, Rat(0)});
      if (natural_peak <= cap) {
        nodes.push_back({x + width / 2, natural_peak});
      } else {
        const Rat rise = cap / sigma;
        nodes.push_back({x + rise, cap});
        nodes.push_back({x + width - rise, cap});
      }
      nodes.push_back({x + width, Rat(0)});
    }
  }
  return pl_from_nodes(std::move(nodes));
}

}  // namespace

ControlEstimate control_measure_estimate(const ValuationHandle& v, const Rat& lambda,
                                         const Rat& gamma_cap, const ArcSet& region,
                                         const ControlSettings& settings,
                                         bool keep_trace) {
  if (gamma_cap < 0) throw std::invalid_argument("gamma cap must be >= 0");
  if (region.is_empty()) throw std::invalid_argument("empty region");
  if (settings.l_schedule.empty()) throw std::invalid_argument("empty l-schedule");

  const ValuationHandle v_lambda = translate_valuation(v, lambda);
  ControlEstimate estimate;
  estimate.lambda = lambda;
  estimate.gamma_cap = gamma_cap;
  estimate.region = region;
  estimate.l_schedule = settings.l_schedule;

  Rat smallest_l = settings.l_schedule.front();
  size_t smallest_index = 0;
  for (size_t i = 0; i < settings.l_schedule.size(); ++i) {
    if (settings.l_schedule[i] <= 0)
      throw std::invalid_argument("amplitude bounds must be positive");
    if (settings.l_schedule[i] < smallest_l) {
      smallest_l = settings.l_schedule[i];
      smallest_index = i;
    }
  }

  for (const Rat& cap : settings.l_schedule) {
    double best_plus = 0;   // the zero function is always admissible
    double best_minus = 0;
    for (int k = 1; k <= settings.slope_grid; ++k) {
      const Rat sigma = gamma_cap * k / settings.slope_grid;
      if (sigma == 0) continue;
      for (int teeth = 1; teeth <= settings.teeth_budget; teeth *= 2) {
        const PLFunction candidate = zigzag(region, sigma, teeth, cap);
        for (int sign : {+1, -1}) {
          const PLFunction probe =
              sign > 0 ? candidate : candidate.scaled(Rat(-1));
          const double value = v_lambda(probe);
          best_plus = std::max(best_plus, value);
          best_minus = std::max(best_minus, -value);
          if (keep_trace) {
            const FunctionNorms fn = norms(probe);
            estimate.trace.push_back({to_double(sigma), teeth,
                                      to_double(fn.sup_norm), sign, value});
          }
        }
      }
    }
    estimate.mu_plus_trend.push_back(best_plus);
    estimate.mu_minus_trend.push_back(best_minus);
  }
  estimate.mu_plus = estimate.mu_plus_trend[smallest_index];
  estimate.mu_minus = estimate.mu_minus_trend[smallest_index];
  estimate.theta = (estimate.mu_plus + estimate.mu_minus) / to_double(region.h1());
  return estimate;
}

double theta_oracle_for_kernel(const KernelSpec& kernel, double lambda,
                               double gamma_cap, int grid_n) {
  if (!kernel.flat_part_is_zero())
    throw std::invalid_argument("theta oracle requires a slope-type kernel");
  if (gamma_cap < 0) throw std::invalid_argument("gamma cap must be >= 0");
  double best_plus = 0;
  double best_minus = 0;
  for (int k = 0; k <= grid_n; ++k) {
    const double sigma = gamma_cap * k / grid_n;
    const double value = kernel.eval(lambda, sigma);
    best_plus = std::max(best_plus, value);
    best_minus = std::max(best_minus, -value);
  }
  return best_plus + best_minus;
}

}  // namespace circval
