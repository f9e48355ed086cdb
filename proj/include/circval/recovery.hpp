#pragma once

#include <span>
#include <vector>

#include "circval/arcs.hpp"
#include "circval/valuation.hpp"

namespace circval {

struct SawParams {
  Rat level;       // lambda
  Rat slope;       // per-turn, >= 0
  int teeth = 1;   // m >= 1
};

struct HatParams {
  Rat slope;    // per-turn, >= 0
  Rat rise;     // d, 0 < d <= 1/4
  Rat plateau;  // l, 0 <= l <= 1 - 2d
  Rat start;    // s0
};

/// Single symmetric tooth: level +/- slope/4, minimum at s=0, peak at s=1/2.
PLFunction make_psi(const Rat& level, const Rat& slope);

/// m identical teeth with |slope| everywhere and range level +/- slope/(4m).
PLFunction make_saw(const SawParams& params);

/// Rise-plateau-fall bump supported on (start, start + 2*rise + plateau],
/// plateau value slope*rise.
PLFunction make_hat(const HatParams& params);

struct RecoverySettings {
  std::vector<int> m_schedule{2, 4, 8, 16, 32, 64, 128, 256};
  double tol = 1e-10;
  // Estimate the limit by Richardson extrapolation over the final doubling
  // step; falls back to the last value on oscillation or a non-doubling tail.
  bool extrapolate = true;
};

struct RecoveryPoint {
  Rat lambda;
  Rat sigma;
  std::vector<int> schedule;
  std::vector<double> values;   // V(S_{lambda,sigma,m}) over the schedule
  double extracted = 0;
  double cauchy_residual = 0;   // max successive gap over the final window
  bool oscillation = false;
};

/// Pseudo-kernel value at one grid point. Requires rotation_invariant and
/// vanishes_on_constants (decompose first otherwise).
RecoveryPoint recover_kernel_point(const ValuationHandle& v, const Rat& lambda,
                                   const Rat& sigma, const RecoverySettings& settings);

struct RecoveryReport {
  std::vector<RecoveryPoint> points;  // lambda-major, then sigma
  RecoverySettings settings;
};

RecoveryReport recover_kernel_grid(const ValuationHandle& v,
                                   std::span<const Rat> lambdas,
                                   std::span<const Rat> sigmas,
                                   const RecoverySettings& settings);

/// max over the grids of |W(h_{slope,rise,l,s0}) - W(h_{slope,rise,0,0})|.
double flat_invisibility_check(const ValuationHandle& w, const Rat& slope,
                               const Rat& rise, std::span<const Rat> plateaus,
                               std::span<const Rat> starts);

struct SawDecomposition {
  bool exact_equal = false;   // saw == join of m rotated teeth over the base
  double value_residual = 0;  // |V(S) - m * V_base(tooth)|
};

SawDecomposition saw_decomposition_check(const ValuationHandle& v,
                                         const SawParams& params);

struct ControlSettings {
  std::vector<Rat> l_schedule{rat(1, 8), rat(1, 32), rat(1, 128)};
  int slope_grid = 64;    // zigzag slopes at gamma_cap * k / slope_grid
  int teeth_budget = 64;  // max teeth per arc
};

struct ControlCandidate {
  double slope = 0;
  int teeth = 0;
  double amplitude = 0;
  int sign = 1;
  double value = 0;  // V_lambda of the candidate
};

struct ControlEstimate {
  Rat lambda;
  Rat gamma_cap;
  ArcSet region;
  std::vector<Rat> l_schedule;
  std::vector<double> mu_plus_trend;   // per l in the schedule
  std::vector<double> mu_minus_trend;
  double mu_plus = 0;   // from the smallest l
  double mu_minus = 0;
  double theta = 0;     // (mu_plus + mu_minus) / H^1(region)
  std::vector<ControlCandidate> trace;  // filled when trace requested
};

/// Estimates mu^+/mu^- by maximizing V_lambda over zigzags supported in the
/// region with amplitude <= l and |slope| <= gamma_cap.
ControlEstimate control_measure_estimate(const ValuationHandle& v, const Rat& lambda,
                                         const Rat& gamma_cap, const ArcSet& region,
                                         const ControlSettings& settings,
                                         bool keep_trace = false);

/// Independent brute-force density for slope-type kernels:
/// max(0, K(lambda, .)) + max(0, -K(lambda, .)) over a slope grid.
double theta_oracle_for_kernel(const KernelSpec& kernel, double lambda,
                               double gamma_cap, int grid_n = 1024);

}  // namespace circval
