#include "circval/quadrature.hpp"

#include <cmath>

namespace circval {

namespace {

constexpr double kNodes[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kWeights[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

QuadratureResult adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int depth, double whole) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre_16(f, a, mid);
  const double right = gauss_legendre_16(f, mid, b);
  const double split = left + right;
  const double discrepancy = std::fabs(whole - split);
  if (discrepancy <= tol || depth <= 0) return {split, discrepancy};
  const QuadratureResult l = adaptive(f, a, mid, 0.5 * tol, depth - 1, left);
  const QuadratureResult r = adaptive(f, mid, b, 0.5 * tol, depth - 1, right);
  return {l.value + r.value, l.error_estimate + r.error_estimate};
}

}  // namespace

double gauss_legendre_16(const std::function<double(double)>& f, double a,
                         double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0;
  for (int i = 0; i < 8; ++i)
    sum += kWeights[i] * (f(c - h * kNodes[i]) + f(c + h * kNodes[i]));
  return sum * h;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double tol,
                                    int max_depth) {
  if (a == b) return {0, 0};
  return adaptive(f, a, b, tol, max_depth, gauss_legendre_16(f, a, b));
}

}  // namespace circval
