#pragma once

// Witness manifolds: flat, constant-curvature, dually flat, recurrent and
// alpha-conformal constructions, plus seeded random generic specs.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "igeo/manifold.hpp"

namespace igeo {

class ConvexityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Riemannian metric h on a box (cubic form implicitly zero).
struct RiemannianSpec {
  std::string name;
  Domain domain;
  std::vector<std::vector<ScalarField>> h;  // full symmetric n x n

  int dim() const noexcept { return domain.dim(); }
  /// Parses the upper triangle from text; missing/empty strings mean 0.
  static RiemannianSpec from_text(std::string name, Domain domain, const std::vector<std::vector<std::string>>& upper);
  ManifoldSpec as_manifold() const;
};

ManifoldSpec euclidean(int n);

/// Unit sphere in polar coordinates: g = diag(1, sin^2 t1), Q = 0.
ManifoldSpec sphere_chart();

/// g = Hess(psi), Q = third derivatives of psi (materialized symbolically).
/// Throws ConvexityError if the Hessian is not SPD at validation samples.
ManifoldSpec exponential_family_from_potential(const ScalarField& psi, Domain domain,
                                               std::string name = "exponential-family");

/// Univariate normal family in (mu, sigma) coordinates on [-1,1] x [0.5,2]:
/// g = diag(1, 2)/sigma^2, Q_112 = 2/sigma^3, Q_222 = 8/sigma^3.
ManifoldSpec normal_family();

struct FisherSample {
  Tensor g;  // E[d_i l d_j l]
  Tensor Q;  // E[d_i l d_j l d_k l]
};
/// Fisher metric and skewness tensor of N(mu, sigma^2) by Gauss-Hermite
/// quadrature over x, with score functions from jets of the log-density.
FisherSample normal_family_quadrature_oracle(double mu, double sigma, int nodes = 64);

/// Q_ijk = w_i g_jk + w_j g_ik + w_k g_ij.
ManifoldSpec recurrent_from(const RiemannianSpec& g, const std::vector<ScalarField>& omega,
                            std::string name = "recurrent");

/// g = e^phi h with the connection
///   nabla_X Y = nabla^h_X Y + (1-a)/2 (dphi(X) Y + dphi(Y) X) - (1+a)/2 h(X,Y) grad_h phi,
/// whose cubic form is Q = a (dphi (x) g) symmetrized, i.e. recurrent with
/// omega = a dphi. The construction is checked against the connection above
/// at sample points; a mismatch throws std::logic_error.
ManifoldSpec alpha_conformal(const RiemannianSpec& h, const ScalarField& phi, double alpha,
                             std::string name = "alpha-conformal");

/// Christoffel symbols (k,i,j) of the connection above, evaluated directly
/// from h and phi.
Tensor alpha_conformal_connection(const RiemannianSpec& h, const ScalarField& phi, double alpha,
                                  std::span<const double> p);

/// g = L L^T + I with random polynomial entries of L, random polynomial Q;
/// coefficients uniform in [-amplitude, amplitude]; domain [-0.5, 0.5]^dim.
ManifoldSpec random_spec(int dim, std::uint64_t seed, int degree = 2, double amplitude = 0.3);

}  // namespace igeo
