#pragma once

// Parallel volume forms f dt1 ^ ... ^ dtn of the alpha-connections.
//
// For a torsion-free connection, f dt is parallel iff d(log f) = tau with
// tau_i = Gamma^k_ki. A local solution exists iff tau is closed, which is
// equivalent to the connection's Ricci tensor being symmetric. At alpha = 0
// the solution is sqrt(det g) up to a constant: the Jeffreys prior.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "igeo/manifold.hpp"
#include "igeo/parallel.hpp"

namespace igeo {

class NotEquiaffineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// tau_i = Gamma^(alpha)k_ki.
Tensor tau(const GeometryAtPoint& geo, double alpha);
/// (m,i) = d_m tau_i.
Tensor tau_derivative(const GeometryAtPoint& geo, double alpha);
/// max |d_i tau_j - d_j tau_i|.
double tau_closedness(const GeometryAtPoint& geo, double alpha);

struct GridSpec {
  std::vector<int> counts;  // points per axis, each >= 2; endpoints included
};

struct PriorOptions {
  double closedness_tol = 1e-8;
  double quadrature_tol = 1e-10;
  Execution exec = Execution::Parallel;
};

struct PriorGrid {
  double alpha = 0.0;
  std::vector<double> base_point;
  std::vector<int> counts;
  std::vector<std::vector<double>> points;  // row-major, last axis fastest
  std::vector<double> log_f;                // log_f at base_point is 0
  double closedness_residual = 0.0;
};

/// Lattice points of the domain box, row-major with the last axis fastest.
std::vector<std::vector<double>> lattice(const Domain& domain, const GridSpec& grid);

/// Integral of tau along the axis-ordered polyline from `from` to `to`:
/// coordinate 1 moves first when `reverse` is false, coordinate n first
/// otherwise.
double integrate_tau(const ManifoldSpec& spec, double alpha, std::span<const double> from, std::span<const double> to,
                     bool reverse = false, double quadrature_tol = 1e-10);

/// Throws NotEquiaffineError when tau is not closed on the grid, and
/// std::invalid_argument when the base point or grid leaves the domain.
PriorGrid parallel_volume(const ManifoldSpec& spec, double alpha, std::span<const double> base_point,
                          const GridSpec& grid, const PriorOptions& opts = {});

/// |axis-order path integral - reverse-axis-order path integral| from p to q.
double path_independence_probe(const ManifoldSpec& spec, double alpha, std::span<const double> p,
                               std::span<const double> q, double quadrature_tol = 1e-10);

/// Trapezoid-rule integral of exp(log_f) over the lattice.
double trapezoid_mass(const PriorGrid& grid, const Domain& domain);

/// Header t1,...,tn,log_f then one row per lattice point, 17 significant digits.
void write_csv(const PriorGrid& grid, std::ostream& out);

}  // namespace igeo
