#include "igeo/manifold.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <array>
#include <cmath>

namespace igeo {

ManifoldSpec::ManifoldSpec(std::string name, Domain domain) : name_(std::move(name)), domain_(std::move(domain)) {
  const int n = domain_.dim();
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("manifold dimension out of range");
  metric_.resize(static_cast<std::size_t>(n * n));
  cubic_.resize(static_cast<std::size_t>(n * n * n));
}

std::size_t ManifoldSpec::metric_slot(int i, int j) const {
  const int n = dim();
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("metric index out of range");
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i * n + j);
}

std::size_t ManifoldSpec::cubic_slot(int i, int j, int k) const {
  const int n = dim();
  if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) throw std::out_of_range("cubic index out of range");
  std::array<int, 3> s{i, j, k};
  std::sort(s.begin(), s.end());
  return static_cast<std::size_t>((s[0] * n + s[1]) * n + s[2]);
}

const std::optional<ScalarField>& ManifoldSpec::metric(int i, int j) const { return metric_[metric_slot(i, j)]; }
const std::optional<ScalarField>& ManifoldSpec::cubic(int i, int j, int k) const { return cubic_[cubic_slot(i, j, k)]; }

void ManifoldSpec::set_metric(int i, int j, ScalarField f) {
  if (f.dim() != dim()) throw std::invalid_argument("metric entry dimension mismatch");
  metric_[metric_slot(i, j)] = std::move(f);
}

void ManifoldSpec::set_cubic(int i, int j, int k, ScalarField f) {
  if (f.dim() != dim()) throw std::invalid_argument("cubic entry dimension mismatch");
  cubic_[cubic_slot(i, j, k)] = std::move(f);
}

void ManifoldSpec::clear_cubic() {
  for (auto& c : cubic_) c.reset();
}

bool ValidationReport::ok() const { return domain_ok && failures() == 0; }

std::size_t ValidationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.ok; }));
}

bool is_spd(const Tensor& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  if (!m.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  Eigen::VectorXd pivots = llt.matrixL().toDenseMatrix().diagonal().array().square();
  double lo = pivots.minCoeff();
  double hi = pivots.maxCoeff();
  return lo > 0.0 && lo >= 1e-10 * hi;
}

ValidationReport validate(const ManifoldSpec& spec, int sample_count, std::uint64_t seed) {
  ValidationReport report;
  if (!spec.domain().nondegenerate()) {
    report.domain_ok = false;
    report.domain_message = "domain box must have finite bounds with lo < hi on every axis";
    return report;
  }
  for (auto& p : sample_points(spec.domain(), {sample_count, seed})) {
    PointValidation pv;
    pv.point = p;
    try {
      (void)geometry_at(spec, p);
    } catch (const std::exception& e) {
      pv.ok = false;
      pv.message = e.what();
    }
    report.points.push_back(std::move(pv));
  }
  return report;
}

GeometryAtPoint geometry_at(const ManifoldSpec& spec, std::span<const double> p) {
  const int n = spec.dim();
  if (static_cast<int>(p.size()) != n) throw std::invalid_argument("geometry_at: point dimension mismatch");
  using V = Variance;
  GeometryAtPoint geo;
  geo.p.assign(p.begin(), p.end());
  geo.g = Tensor::lower(n, 2);
  geo.dg = Tensor::lower(n, 3);
  geo.d2g = Tensor::lower(n, 4);
  geo.Q = Tensor::lower(n, 3);
  geo.dQ = Tensor::lower(n, 4);

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const auto& f = spec.metric(i, j);
      if (!f) continue;
      Jet2 jet = eval_jet2(*f, p);
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        geo.g(a, b) = jet.value();
        for (int m = 0; m < n; ++m) {
          geo.dg(m, a, b) = jet.grad(m);
          for (int l = 0; l < n; ++l) geo.d2g(m, l, a, b) = jet.hess(m, l);
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        const auto& f = spec.cubic(i, j, k);
        if (!f) continue;
        Jet2 jet = eval_jet2(*f, p);
        const std::array<std::array<int, 3>, 6> perms{{{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}}};
        for (const auto& s : perms) {
          geo.Q(s[0], s[1], s[2]) = jet.value();
          for (int m = 0; m < n; ++m) geo.dQ(m, s[0], s[1], s[2]) = jet.grad(m);
        }
      }
    }
  }

  if (!is_spd(geo.g)) throw SpdError("metric is not positive definite (or is near-singular)");

  Eigen::MatrixXd gm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm(i, j) = geo.g(i, j);
  Eigen::MatrixXd inv = gm.llt().solve(Eigen::MatrixXd::Identity(n, n));
  geo.ginv = Tensor(n, {V::Upper, V::Upper});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) geo.ginv(i, j) = 0.5 * (inv(i, j) + inv(j, i));

  // d_m g^kl = -g^ka d_m g_ab g^bl
  Tensor dginv(n, {V::Lower, V::Upper, V::Upper});
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += geo.ginv(k, a) * geo.dg(m, a, b) * geo.ginv(b, l);
        dginv(m, k, l) = -s;
      }

  // Lowered Levi-Civita symbols Gamma0_lij and their derivatives.
  Tensor low = Tensor::lower(n, 3);
  Tensor dlow = Tensor::lower(n, 4);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        low(l, i, j) = 0.5 * (geo.dg(i, j, l) + geo.dg(j, i, l) - geo.dg(l, i, j));
        for (int m = 0; m < n; ++m)
          dlow(m, l, i, j) = 0.5 * (geo.d2g(m, i, j, l) + geo.d2g(m, j, i, l) - geo.d2g(m, l, i, j));
      }

  geo.gamma0 = Tensor(n, {V::Upper, V::Lower, V::Lower});
  geo.K = Tensor(n, {V::Upper, V::Lower, V::Lower});
  geo.dgamma0 = Tensor(n, {V::Lower, V::Upper, V::Lower, V::Lower});
  geo.dK = Tensor(n, {V::Lower, V::Upper, V::Lower, V::Lower});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double gam = 0.0;
        double kk = 0.0;
        for (int l = 0; l < n; ++l) {
          gam += geo.ginv(k, l) * low(l, i, j);
          kk += geo.ginv(k, l) * geo.Q(l, i, j);
        }
        geo.gamma0(k, i, j) = gam;
        geo.K(k, i, j) = kk;
        for (int m = 0; m < n; ++m) {
          double dgam = 0.0;
          double dkk = 0.0;
          for (int l = 0; l < n; ++l) {
            dgam += dginv(m, k, l) * low(l, i, j) + geo.ginv(k, l) * dlow(m, l, i, j);
            dkk += dginv(m, k, l) * geo.Q(l, i, j) + geo.ginv(k, l) * geo.dQ(m, l, i, j);
          }
          geo.dgamma0(m, k, i, j) = dgam;
          geo.dK(m, k, i, j) = dkk;
        }
      }
  return geo;
}

Tensor christoffel_alpha(const GeometryAtPoint& geo, double alpha) {
  Tensor out = geo.gamma0;
  auto o = out.data();
  auto k = geo.K.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= 0.5 * alpha * k[i];
  return out;
}

Tensor christoffel_alpha_derivative(const GeometryAtPoint& geo, double alpha) {
  Tensor out = geo.dgamma0;
  auto o = out.data();
  auto k = geo.dK.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= 0.5 * alpha * k[i];
  return out;
}

Tensor nabla_g(const GeometryAtPoint& geo, double alpha) {
  const int n = geo.dim();
  Tensor gam = christoffel_alpha(geo, alpha);
  Tensor out = Tensor::lower(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = geo.dg(i, j, k);
        for (int l = 0; l < n; ++l) s -= gam(l, i, j) * geo.g(l, k) + gam(l, i, k) * geo.g(j, l);
        out(i, j, k) = s;
      }
  return out;
}

Tensor lowered_difference(const GeometryAtPoint& geo) {
  const int n = geo.dim();
  Tensor out = Tensor::lower(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += geo.g(k, l) * geo.K(l, i, j);
        out(k, i, j) = s;
      }
  return out;
}

}  // namespace igeo
