#pragma once

#include <functional>
#include <vector>

namespace igeo {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
QuadratureRule gauss_hermite(int n);

/// Adaptive Gauss-Legendre integral of f over [a, b]: an interval is
/// accepted once a 16-point rule and the sum of its two halves agree to
/// `tol` (tolerance is split between halves on refinement).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                          int max_depth = 30);

}  // namespace igeo
