#include "igeo/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace igeo {

CurvatureAtPoint riemann(const GeometryAtPoint& geo, double alpha) {
  using V = Variance;
  const int n = geo.dim();
  const Tensor gam = christoffel_alpha(geo, alpha);
  const Tensor dgam = christoffel_alpha_derivative(geo, alpha);

  CurvatureAtPoint out;
  out.alpha = alpha;
  out.R = Tensor(n, {V::Upper, V::Lower, V::Lower, V::Lower});
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          double s = dgam(a, d, b, c) - dgam(b, d, a, c);
          for (int m = 0; m < n; ++m) s += gam(d, a, m) * gam(m, b, c) - gam(d, b, m) * gam(m, a, c);
          out.R(d, c, a, b) = s;
          out.R(d, c, b, a) = -s;
        }

  out.Rlow = Tensor::lower(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += out.R(e, c, a, b) * geo.g(e, d);
          out.Rlow(a, b, c, d) = s;
        }

  out.Ric = Tensor::lower(n, 2);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += out.R(a, c, a, b);
      out.Ric(b, c) = s;
    }
  return out;
}

Tensor trace_term_first(const GeometryAtPoint& geo) {
  const int n = geo.dim();
  Tensor t = Tensor::lower(n, 2);
  // K(K(V,Z),Y)^d = K^m_vz K^d_my, traced over v = d.
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double s = 0.0;
      for (int v = 0; v < n; ++v)
        for (int m = 0; m < n; ++m) s += geo.K(m, v, z) * geo.K(v, m, y);
      t(y, z) = s;
    }
  return t;
}

Tensor trace_term_second(const GeometryAtPoint& geo) {
  const int n = geo.dim();
  Tensor t = Tensor::lower(n, 2);
  // K(V,K(Y,Z))^d = K^m_yz K^d_vm, traced over v = d.
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double s = 0.0;
      for (int v = 0; v < n; ++v)
        for (int m = 0; m < n; ++m) s += geo.K(m, y, z) * geo.K(v, v, m);
      t(y, z) = s;
    }
  return t;
}

Tensor ricci_alpha_closed_form(const GeometryAtPoint& geo, const Tensor& ric_plus, const Tensor& ric_minus,
                               double alpha, TraceTermOrder order) {
  const int n = geo.dim();
  Tensor t1 = trace_term_first(geo);
  Tensor t2 = trace_term_second(geo);
  const double wp = 0.5 * (1.0 + alpha);
  const double wm = 0.5 * (1.0 - alpha);
  const double wq = 0.25 * (1.0 - alpha * alpha);
  Tensor out = Tensor::lower(n, 2);
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double first = order == TraceTermOrder::YZ ? t1(y, z) : t1(z, y);
      out(y, z) = wp * ric_plus(y, z) + wm * ric_minus(y, z) + wq * (first - t2(y, z));
    }
  return out;
}

double ricci_alpha_antisym_relation(const Tensor& ric_a, const Tensor& ric_ma, const Tensor& ric_plus,
                                    const Tensor& ric_minus, double alpha) {
  Tensor lhs = ric_a - ric_ma;
  Tensor rhs = alpha * (ric_plus - ric_minus);
  return max_abs_diff(lhs, rhs);
}

Tensor constant_curvature_model(const Tensor& g) {
  const int n = g.dim();
  Tensor m = Tensor::lower(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) m(a, b, c, d) = g(b, c) * g(a, d) - g(a, c) * g(b, d);
  return m;
}

ConstantCurvatureFit constant_curvature_fit(std::span<const Tensor> rlow, std::span<const Tensor> metrics) {
  if (rlow.size() != metrics.size()) throw std::invalid_argument("constant_curvature_fit: size mismatch");
  std::vector<double> r;
  std::vector<double> m;
  for (std::size_t p = 0; p < rlow.size(); ++p) {
    Tensor model = constant_curvature_model(metrics[p]);
    for (double v : rlow[p].data()) r.push_back(v);
    for (double v : model.data()) m.push_back(v);
  }
  auto objective = [&](double k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) worst = std::max(worst, std::fabs(r[i] - k * m[i]));
    return worst;
  };

  double rmax = 0.0;
  double mmax = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    rmax = std::max(rmax, std::fabs(r[i]));
    mmax = std::max(mmax, std::fabs(m[i]));
  }
  if (rmax == 0.0 || mmax == 0.0) return {0.0, objective(0.0)};

  // The minimax solution lies between the extreme componentwise ratios.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::fabs(m[i]) <= 1e-12 * mmax) continue;
    double ratio = r[i] / m[i];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (!(lo <= hi)) return {0.0, objective(0.0)};
  if (lo == hi) return {lo, objective(lo)};

  constexpr int kGrid = 201;
  double best_k = lo;
  double best_f = objective(lo);
  int best_i = 0;
  const double step = (hi - lo) / (kGrid - 1);
  for (int i = 1; i < kGrid; ++i) {
    double k = lo + step * i;
    double f = objective(k);
    if (f < best_f) {
      best_f = f;
      best_k = k;
      best_i = i;
    }
  }
  double a = lo + step * std::max(0, best_i - 1);
  double b = lo + step * std::min(kGrid - 1, best_i + 1);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::fabs(a)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(x2);
    }
  }
  double k = 0.5 * (a + b);
  double f = objective(k);
  if (f < best_f) return {k, f};
  return {best_k, best_f};
}

ConstantCurvatureFit constant_curvature_fit(const ManifoldSpec& spec, const std::vector<std::vector<double>>& points,
                                            double alpha) {
  if (points.size() < 2) throw std::invalid_argument("constant_curvature_fit: need at least two points");
  std::vector<Tensor> rlow;
  std::vector<Tensor> metrics;
  for (const auto& p : points) {
    GeometryAtPoint geo = geometry_at(spec, p);
    rlow.push_back(riemann(geo, alpha).Rlow);
    metrics.push_back(geo.g);
  }
  return constant_curvature_fit(rlow, metrics);
}

}  // namespace igeo
