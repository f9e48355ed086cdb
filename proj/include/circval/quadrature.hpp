#pragma once

#include <functional>

namespace circval {

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
};

/// 16-point Gauss-Legendre rule on [a,b].
double gauss_legendre_16(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection with the 16-point rule until the whole-vs-halves
/// discrepancy is below the absolute tolerance.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double tol,
                                    int max_depth = 48);

}  // namespace circval
