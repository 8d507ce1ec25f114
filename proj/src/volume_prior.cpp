#include "igeo/volume_prior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "igeo/quadrature.hpp"

namespace igeo {

Tensor tau(const GeometryAtPoint& geo, double alpha) {
  const int n = geo.dim();
  Tensor gam = christoffel_alpha(geo, alpha);
  Tensor t = Tensor::lower(n, 1);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += gam(k, k, i);
    t(i) = s;
  }
  return t;
}

Tensor tau_derivative(const GeometryAtPoint& geo, double alpha) {
  const int n = geo.dim();
  Tensor dgam = christoffel_alpha_derivative(geo, alpha);
  Tensor t = Tensor::lower(n, 2);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += dgam(m, k, k, i);
      t(m, i) = s;
    }
  return t;
}

double tau_closedness(const GeometryAtPoint& geo, double alpha) {
  Tensor dt = tau_derivative(geo, alpha);
  const int n = geo.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) worst = std::max(worst, std::fabs(dt(i, j) - dt(j, i)));
  return worst;
}

std::vector<std::vector<double>> lattice(const Domain& domain, const GridSpec& grid) {
  const int n = domain.dim();
  if (static_cast<int>(grid.counts.size()) != n) throw std::invalid_argument("grid: need one count per axis");
  for (int c : grid.counts)
    if (c < 2) throw std::invalid_argument("grid: every axis needs at least 2 points");
  std::size_t total = 1;
  for (int c : grid.counts) total *= static_cast<std::size_t>(c);
  std::vector<std::vector<double>> pts(total, std::vector<double>(static_cast<std::size_t>(n)));
  for (std::size_t off = 0; off < total; ++off) {
    std::size_t rem = off;
    for (int d = n - 1; d >= 0; --d) {
      const auto c = static_cast<std::size_t>(grid.counts[static_cast<std::size_t>(d)]);
      std::size_t k = rem % c;
      rem /= c;
      const auto& ax = domain.axes[static_cast<std::size_t>(d)];
      // Endpoints are assigned exactly so the lattice stays inside the box.
      double x = k + 1 == c ? ax.hi : ax.lo + (ax.hi - ax.lo) * static_cast<double>(k) / static_cast<double>(c - 1);
      pts[off][static_cast<std::size_t>(d)] = x;
    }
  }
  return pts;
}

double integrate_tau(const ManifoldSpec& spec, double alpha, std::span<const double> from, std::span<const double> to,
                     bool reverse, double quadrature_tol) {
  const int n = spec.dim();
  if (static_cast<int>(from.size()) != n || static_cast<int>(to.size()) != n)
    throw std::invalid_argument("integrate_tau: point dimension mismatch");
  std::vector<double> cur(from.begin(), from.end());
  double total = 0.0;
  for (int step = 0; step < n; ++step) {
    const int axis = reverse ? n - 1 - step : step;
    const auto a = static_cast<std::size_t>(axis);
    if (from[a] != to[a]) {
      std::vector<double> q = cur;
      total += integrate_adaptive(
          [&](double s) {
            q[a] = s;
            return tau(geometry_at(spec, q), alpha)(axis);
          },
          from[a], to[a], quadrature_tol);
    }
    cur[a] = to[a];
  }
  return total;
}

PriorGrid parallel_volume(const ManifoldSpec& spec, double alpha, std::span<const double> base_point,
                          const GridSpec& grid, const PriorOptions& opts) {
  if (!spec.domain().contains(base_point)) throw std::invalid_argument("parallel_volume: base point outside the domain");
  PriorGrid out;
  out.alpha = alpha;
  out.base_point.assign(base_point.begin(), base_point.end());
  out.counts = grid.counts;
  out.points = lattice(spec.domain(), grid);
  for (const auto& p : out.points)
    if (!spec.domain().contains(p)) throw std::invalid_argument("parallel_volume: grid point outside the domain");

  std::vector<double> closed(out.points.size() + 1);
  for_each_index(closed.size(), opts.exec, [&](std::size_t i) {
    std::span<const double> p = i < out.points.size() ? std::span<const double>(out.points[i]) : base_point;
    closed[i] = tau_closedness(geometry_at(spec, p), alpha);
  });
  out.closedness_residual = 0.0;
  for (double c : closed) out.closedness_residual = std::isnan(c) ? c : std::max(out.closedness_residual, c);
  if (!(out.closedness_residual <= opts.closedness_tol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "not equiaffine at alpha=%.17g (closedness residual %.3g)", alpha,
                  out.closedness_residual);
    throw NotEquiaffineError(buf);
  }

  out.log_f.assign(out.points.size(), 0.0);
  for_each_index(out.points.size(), opts.exec, [&](std::size_t i) {
    out.log_f[i] = integrate_tau(spec, alpha, base_point, out.points[i], false, opts.quadrature_tol);
  });
  return out;
}

double path_independence_probe(const ManifoldSpec& spec, double alpha, std::span<const double> p,
                               std::span<const double> q, double quadrature_tol) {
  double forward = integrate_tau(spec, alpha, p, q, false, quadrature_tol);
  double backward = integrate_tau(spec, alpha, p, q, true, quadrature_tol);
  return std::fabs(forward - backward);
}

double trapezoid_mass(const PriorGrid& grid, const Domain& domain) {
  const int n = domain.dim();
  double total = 0.0;
  for (std::size_t off = 0; off < grid.points.size(); ++off) {
    std::size_t rem = off;
    double w = 1.0;
    for (int d = n - 1; d >= 0; --d) {
      const auto c = static_cast<std::size_t>(grid.counts[static_cast<std::size_t>(d)]);
      std::size_t k = rem % c;
      rem /= c;
      const auto& ax = domain.axes[static_cast<std::size_t>(d)];
      double h = (ax.hi - ax.lo) / static_cast<double>(c - 1);
      w *= (k == 0 || k + 1 == c) ? 0.5 * h : h;
    }
    total += w * std::exp(grid.log_f[off]);
  }
  return total;
}

void write_csv(const PriorGrid& grid, std::ostream& out) {
  const std::size_t n = grid.base_point.size();
  for (std::size_t d = 0; d < n; ++d) out << 't' << d + 1 << ',';
  out << "log_f\n";
  char buf[40];
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    for (double x : grid.points[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", grid.log_f[i]);
    out << buf << '\n';
  }
}

}  // namespace igeo
