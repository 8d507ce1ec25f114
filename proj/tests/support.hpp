#pragma once

// Independent oracles shared by the test binaries: random expression text,
// finite-difference derivatives and a finite-difference curvature path that
// never touches the jet machinery.

#include <cmath>
#include <cstdio>
#include <optional>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "igeo/curvature.hpp"
#include "igeo/manifold.hpp"

namespace igeo::testing {

/// Random expression over t1..t<dim> of nesting depth <= depth, built from
/// + - * / ^ and the smooth functions of the grammar, guarded so it is
/// finite and well-conditioned on [-1, 1]^dim.
inline std::string random_expression(std::mt19937_64& rng, int dim, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  auto leaf = [&]() -> std::string {
    if (pick(rng) < 3) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.6g", coef(rng));
      return std::string("(") + buf + ")";
    }
    return "t" + std::to_string(std::uniform_int_distribution<int>(1, dim)(rng));
  };
  std::function<std::string(int)> gen = [&](int d) -> std::string {
    if (d == 0) return leaf();
    std::string a = gen(d - 1);
    switch (pick(rng)) {
      case 0: return "(" + a + " + " + gen(d - 1) + ")";
      case 1: return "(" + a + " - " + gen(d - 1) + ")";
      case 2: return "(" + a + " * " + gen(d - 1) + ")";
      case 3: return "(" + a + " / (2 + sin(" + gen(d - 1) + ")))";
      case 4: return "(" + a + ")^" + std::to_string(std::uniform_int_distribution<int>(2, 3)(rng));
      case 5: return "sin(" + a + ")";
      case 6: return "exp(0.25 * tanh(" + a + "))";
      case 7: return "log(1 + (" + a + ")^2)";
      case 8: return "sqrt(2 + cos(" + a + "))";
      default: return "cosh(0.5 * sinh(0.3 * tanh(" + a + ")))";
    }
  };
  return gen(depth);
}

/// Random polynomial of total degree <= degree over t1..t<dim> with
/// coefficients uniform in [-2, 2].
inline std::string random_polynomial(std::mt19937_64& rng, int dim, int degree) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> axis(1, dim);
  std::uniform_int_distribution<int> terms(1, 6);
  std::string out;
  const int count = terms(rng);
  for (int t = 0; t < count; ++t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", coef(rng));
    std::string term = std::string("(") + buf + ")";
    const int deg = std::uniform_int_distribution<int>(0, degree)(rng);
    for (int k = 0; k < deg; ++k) term += " * t" + std::to_string(axis(rng));
    out += (t ? " + " : "") + term;
  }
  return out;
}

/// Central-difference gradient and Hessian with step h.
struct FiniteDifference {
  std::vector<double> grad;
  std::vector<std::vector<double>> hess;
};

inline FiniteDifference finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                          std::vector<double> p, double h) {
  const std::size_t n = p.size();
  FiniteDifference out{std::vector<double>(n), std::vector<std::vector<double>>(n, std::vector<double>(n))};
  const double f0 = f(p);
  for (std::size_t i = 0; i < n; ++i) {
    auto q = p;
    q[i] = p[i] + h;
    const double fp = f(q);
    q[i] = p[i] - h;
    const double fm = f(q);
    out.grad[i] = (fp - fm) / (2 * h);
    out.hess[i][i] = (fp - 2 * f0 + fm) / (h * h);
    for (std::size_t j = 0; j < i; ++j) {
      auto r = p;
      double s = 0.0;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          r[i] = p[i] + si * h;
          r[j] = p[j] + sj * h;
          s += si * sj * f(r);
        }
      out.hess[i][j] = out.hess[j][i] = s / (4 * h * h);
    }
  }
  return out;
}

/// Gauss-Jordan inverse of a small dense matrix.
inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double m = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= m * a[c][k];
        inv[r][k] -= m * inv[c][k];
      }
    }
  }
  return inv;
}

inline double field_value(const std::optional<ScalarField>& f, const std::vector<double>& p) {
  return f ? eval(*f, p) : 0.0;
}

/// Five-point central difference of a vector-valued function along axis m.
inline std::vector<double> derivative5(const std::function<std::vector<double>(const std::vector<double>&)>& f,
                                       const std::vector<double>& p, std::size_t m, double h) {
  auto at = [&](double s) {
    auto q = p;
    q[m] += s;
    return f(q);
  };
  auto a = at(2 * h), b = at(h), c = at(-h), d = at(-2 * h);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (-a[i] + 8 * b[i] - 8 * c[i] + d[i]) / (12 * h);
  return out;
}

/// Gamma^(alpha)^k_ij flattened as (k*n + i)*n + j, from field values only.
inline std::vector<double> fd_christoffel(const ManifoldSpec& spec, double alpha, const std::vector<double>& p,
                                          double h = 1e-4) {
  const auto n = static_cast<std::size_t>(spec.dim());
  auto metric = [&](const std::vector<double>& q) {
    std::vector<double> g(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i * n + j] = field_value(spec.metric(int(i), int(j)), q);
    return g;
  };
  std::vector<std::vector<double>> dg(n);
  for (std::size_t m = 0; m < n; ++m) dg[m] = derivative5(metric, p, m, h);
  auto g = metric(p);
  std::vector<std::vector<double>> gm(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gm[i][j] = g[i * n + j];
  auto ginv = invert(gm);
  std::vector<double> gam(n * n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          const double lc = 0.5 * (dg[i][j * n + l] + dg[j][i * n + l] - dg[l][i * n + j]);
          const double q = field_value(spec.cubic(int(l), int(i), int(j)), p);
          s += ginv[k][l] * (lc - 0.5 * alpha * q);
        }
        gam[(k * n + i) * n + j] = s;
      }
  return gam;
}

/// R^d_cab by differencing fd_christoffel (laid out as Tensor R(d,c,a,b)).
inline Tensor fd_riemann(const ManifoldSpec& spec, double alpha, const std::vector<double>& p, double h = 1e-3) {
  const auto n = static_cast<std::size_t>(spec.dim());
  auto gamma = [&](const std::vector<double>& q) { return fd_christoffel(spec, alpha, q); };
  std::vector<std::vector<double>> dgam(n);
  for (std::size_t m = 0; m < n; ++m) dgam[m] = derivative5(gamma, p, m, h);
  auto G = gamma(p);
  auto at = [&](std::size_t k, std::size_t i, std::size_t j) { return G[(k * n + i) * n + j]; };
  Tensor R(static_cast<int>(n), {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower});
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          double v = dgam[a][(d * n + b) * n + c] - dgam[b][(d * n + a) * n + c];
          for (std::size_t m = 0; m < n; ++m) v += at(d, a, m) * at(m, b, c) - at(d, b, m) * at(m, a, c);
          R(d, c, a, b) = v;
        }
  return R;
}

}  // namespace igeo::testing
