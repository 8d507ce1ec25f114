#pragma once

// Curvature of the alpha-connections.
//
// Conventions (0-based indices):
//   R(d,c,a,b)    = R^d_cab with R(d_a, d_b) d_c = R^d_cab d_d
//   Rlow(a,b,c,d) = g(R(d_a, d_b) d_c, d_d) = R^e_cab g_ed
//   Ric(b,c)      = sum_a R^a_cab   (trace over the first vector slot)
//
// With these conventions a round unit sphere has R(X,Y)Z = g(Y,Z)X - g(X,Z)Y
// and Ric = (n-1) g.

#include <functional>
#include <span>
#include <vector>

#include "igeo/manifold.hpp"

namespace igeo {

struct CurvatureAtPoint {
  double alpha = 0.0;
  Tensor R;
  Tensor Rlow;
  Tensor Ric;
};

CurvatureAtPoint riemann(const GeometryAtPoint& geo, double alpha);

/// Signature shared by riemann and substitutes used in fault-injection tests.
using CurvatureFn = std::function<CurvatureAtPoint(const GeometryAtPoint&, double)>;

/// Which argument order the quadratic trace term uses. Both readings of the
/// term give the same tensor (the contraction is symmetric in its two free
/// slots); the choice is kept selectable so tests can demonstrate that.
enum class TraceTermOrder { YZ, ZY };

/// T1(Y,Z) = tr(V -> K(K(V,Z),Y)),  T2(Y,Z) = tr(V -> K(V,K(Y,Z))).
Tensor trace_term_first(const GeometryAtPoint& geo);
Tensor trace_term_second(const GeometryAtPoint& geo);

/// Ricci tensor of the alpha-connection from the primal and dual Ricci
/// tensors:  (1+a)/2 Ric + (1-a)/2 Ric* + (1-a^2)/4 (T1 - T2).
Tensor ricci_alpha_closed_form(const GeometryAtPoint& geo, const Tensor& ric_plus, const Tensor& ric_minus,
                               double alpha, TraceTermOrder order = TraceTermOrder::YZ);

/// max-abs of Ric^(a) - Ric^(-a) - a (Ric - Ric*).
double ricci_alpha_antisym_relation(const Tensor& ric_a, const Tensor& ric_ma, const Tensor& ric_plus,
                                    const Tensor& ric_minus, double alpha);

/// g(Y,Z) X - g(X,Z) Y lowered: G(a,b,c,d) = g_bc g_ad - g_ac g_bd.
Tensor constant_curvature_model(const Tensor& g);

struct ConstantCurvatureFit {
  double k_hat = 0.0;
  double residual = 0.0;
};

/// Minimax fit of Rlow ~ K * constant_curvature_model(g) over the points.
ConstantCurvatureFit constant_curvature_fit(const ManifoldSpec& spec, const std::vector<std::vector<double>>& points,
                                            double alpha);

/// Same fit from precomputed lowered curvature and metrics.
ConstantCurvatureFit constant_curvature_fit(std::span<const Tensor> rlow, std::span<const Tensor> metrics);

}  // namespace igeo
