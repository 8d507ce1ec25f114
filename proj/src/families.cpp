#include "igeo/families.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "igeo/quadrature.hpp"

namespace igeo {

namespace {

using expr::NodePtr;

NodePtr times(NodePtr a, NodePtr b) {
  if (expr::is_number(a, 1.0)) return b;
  if (expr::is_number(b, 1.0)) return a;
  return expr::mul(std::move(a), std::move(b));
}

NodePtr plus(NodePtr a, NodePtr b) {
  if (!a) return b;
  if (!b) return a;
  return expr::add(std::move(a), std::move(b));
}

Domain box(std::initializer_list<Interval> axes) { return Domain{std::vector<Interval>(axes)}; }

void require_valid(const ManifoldSpec& spec) {
  ValidationReport r = validate(spec, 64, 0);
  if (!r.domain_ok) throw std::invalid_argument(spec.name() + ": " + r.domain_message);
  for (const auto& p : r.points)
    if (!p.ok) throw SpdError(spec.name() + ": " + p.message);
}

}  // namespace

RiemannianSpec RiemannianSpec::from_text(std::string name, Domain domain,
                                         const std::vector<std::vector<std::string>>& upper) {
  const int n = domain.dim();
  RiemannianSpec r{std::move(name), std::move(domain), {}};
  r.h.assign(static_cast<std::size_t>(n), std::vector<ScalarField>(static_cast<std::size_t>(n), ScalarField::constant(0.0, n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::string text;
      if (static_cast<std::size_t>(i) < upper.size() && static_cast<std::size_t>(j) < upper[static_cast<std::size_t>(i)].size())
        text = upper[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      ScalarField f = text.empty() ? ScalarField::constant(0.0, n) : parse(text, n);
      r.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f;
      r.h[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = f;
    }
  return r;
}

ManifoldSpec RiemannianSpec::as_manifold() const {
  ManifoldSpec spec(name, domain);
  for (int i = 0; i < dim(); ++i)
    for (int j = i; j < dim(); ++j) {
      const auto& f = h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!f.is_zero()) spec.set_metric(i, j, f);
    }
  return spec;
}

ManifoldSpec euclidean(int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("euclidean: dimension out of range");
  Domain d;
  d.axes.assign(static_cast<std::size_t>(n), Interval{-1.0, 1.0});
  ManifoldSpec spec("euclidean" + std::to_string(n), d);
  for (int i = 0; i < n; ++i) spec.set_metric(i, i, ScalarField::constant(1.0, n));
  return spec;
}

ManifoldSpec sphere_chart() {
  ManifoldSpec spec("sphere", box({{0.3, 2.8}, {0.0, 3.0}}));
  spec.set_metric(0, 0, parse("1", 2));
  spec.set_metric(1, 1, parse("sin(t1)^2", 2));
  return spec;
}

ManifoldSpec exponential_family_from_potential(const ScalarField& psi, Domain domain, std::string name) {
  const int n = psi.dim();
  if (domain.dim() != n) throw std::invalid_argument("exponential family: domain dimension mismatch");
  ManifoldSpec spec(std::move(name), std::move(domain));
  std::vector<ScalarField> first;
  for (int i = 0; i < n; ++i) first.push_back(differentiate(psi, i));
  std::vector<std::vector<ScalarField>> second(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) second[static_cast<std::size_t>(i)].push_back(differentiate(first[static_cast<std::size_t>(i)], j));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const ScalarField& gij = second[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!gij.is_zero()) spec.set_metric(i, j, gij);
      for (int k = j; k < n; ++k) {
        ScalarField qijk = differentiate(gij, k);
        if (!qijk.is_zero()) spec.set_cubic(i, j, k, qijk);
      }
    }
  ValidationReport r = validate(spec, 64, 0);
  if (!r.domain_ok) throw std::invalid_argument(spec.name() + ": " + r.domain_message);
  for (const auto& p : r.points)
    if (!p.ok) throw ConvexityError(spec.name() + ": potential is not strictly convex: " + p.message);
  return spec;
}

ManifoldSpec normal_family() {
  ManifoldSpec spec("normal", box({{-1.0, 1.0}, {0.5, 2.0}}));
  spec.set_metric(0, 0, parse("1 / t2^2", 2));
  spec.set_metric(1, 1, parse("2 / t2^2", 2));
  spec.set_cubic(0, 0, 1, parse("2 / t2^3", 2));
  spec.set_cubic(1, 1, 1, parse("8 / t2^3", 2));
  return spec;
}

FisherSample normal_family_quadrature_oracle(double mu, double sigma, int nodes) {
  // Log-density up to a constant, with the sample point x as a third coordinate.
  static const ScalarField loglik = parse("-log(t2) - (t3 - t1)^2 / (2 * t2^2)", 3);
  const QuadratureRule rule = gauss_hermite(nodes);
  FisherSample out{Tensor::lower(2, 2), Tensor::lower(2, 3)};
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = mu + std::numbers::sqrt2 * sigma * rule.nodes[q];
    const double w = rule.weights[q] / std::sqrt(std::numbers::pi);
    const double p[3] = {mu, sigma, x};
    Jet2 jet = eval_jet2(loglik, p);
    const double s[2] = {jet.grad(0), jet.grad(1)};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        out.g(i, j) += w * s[i] * s[j];
        for (int k = 0; k < 2; ++k) out.Q(i, j, k) += w * s[i] * s[j] * s[k];
      }
  }
  return out;
}

ManifoldSpec recurrent_from(const RiemannianSpec& g, const std::vector<ScalarField>& omega, std::string name) {
  const int n = g.dim();
  if (static_cast<int>(omega.size()) != n) throw std::invalid_argument("recurrent_from: omega needs one entry per axis");
  ManifoldSpec spec(std::move(name), g.domain);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (!g.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].is_zero())
        spec.set_metric(i, j, g.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);

  auto term = [&](int a, int b, int c) -> NodePtr {
    const ScalarField& w = omega[static_cast<std::size_t>(a)];
    const ScalarField& m = g.h[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
    if (w.is_zero() || m.is_zero()) return nullptr;
    return times(w.root(), m.root());
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        NodePtr q = plus(plus(term(i, j, k), term(j, i, k)), term(k, i, j));
        if (q) spec.set_cubic(i, j, k, ScalarField(q, n));
      }
  require_valid(spec);
  return spec;
}

Tensor alpha_conformal_connection(const RiemannianSpec& h, const ScalarField& phi, double alpha,
                                  std::span<const double> p) {
  const int n = h.dim();
  GeometryAtPoint hg = geometry_at(h.as_manifold(), p);
  Jet2 ph = eval_jet2(phi, p);
  std::vector<double> grad_h(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) grad_h[static_cast<std::size_t>(k)] += hg.ginv(k, l) * ph.grad(l);
  const double c = 0.5 * (1.0 - alpha);
  const double b = 0.5 * (1.0 + alpha);
  Tensor gam = hg.gamma0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        if (k == j) v += c * ph.grad(i);
        if (k == i) v += c * ph.grad(j);
        v -= b * hg.g(i, j) * grad_h[static_cast<std::size_t>(k)];
        gam(k, i, j) += v;
      }
  return gam;
}

ManifoldSpec alpha_conformal(const RiemannianSpec& h, const ScalarField& phi, double alpha, std::string name) {
  const int n = h.dim();
  if (phi.dim() != n) throw std::invalid_argument("alpha_conformal: phi dimension mismatch");
  require_valid(h.as_manifold());

  ManifoldSpec spec(std::move(name), h.domain);
  const NodePtr scale = expr::call(expr::Func::Exp, phi.root());
  std::vector<std::vector<NodePtr>> g(static_cast<std::size_t>(n), std::vector<NodePtr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const ScalarField& hij = h.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (hij.is_zero()) continue;
      NodePtr gij = times(scale, hij.root());
      g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = gij;
      g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = gij;
      spec.set_metric(i, j, ScalarField(gij, n));
    }

  // omega = alpha dphi
  if (alpha != 0.0) {
    std::vector<NodePtr> omega;
    for (int i = 0; i < n; ++i) {
      ScalarField d = differentiate(phi, i);
      omega.push_back(d.is_zero() ? nullptr : times(expr::number(alpha), d.root()));
    }
    auto term = [&](int a, int b, int c) -> NodePtr {
      const NodePtr& w = omega[static_cast<std::size_t>(a)];
      const NodePtr& m = g[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
      if (!w || !m) return nullptr;
      return times(w, m);
    };
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          NodePtr q = plus(plus(term(i, j, k), term(j, i, k)), term(k, i, j));
          if (q) spec.set_cubic(i, j, k, ScalarField(q, n));
        }
  }
  require_valid(spec);

  // Cross-check the materialized Q against nabla g of the defining connection.
  for (const auto& p : sample_points(spec.domain(), {16, 0})) {
    GeometryAtPoint geo = geometry_at(spec, p);
    Tensor gam = alpha_conformal_connection(h, phi, alpha, p);
    double scale_ref = 1.0 + max_abs(geo.Q) + max_abs(geo.dg);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double ng = geo.dg(i, j, k);
          for (int l = 0; l < n; ++l) ng -= gam(l, i, j) * geo.g(l, k) + gam(l, i, k) * geo.g(j, l);
          if (std::fabs(ng - geo.Q(i, j, k)) > 1e-9 * scale_ref)
            throw std::logic_error("alpha_conformal: cubic form does not match the defining connection");
        }
  }
  return spec;
}

ManifoldSpec random_spec(int dim, std::uint64_t seed, int degree, double amplitude) {
  if (dim < 2 || dim > 5) throw std::invalid_argument("random_spec: dimension must be in [2, 5]");
  if (degree < 0 || degree > 6) throw std::invalid_argument("random_spec: degree must be in [0, 6]");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("random_spec: amplitude must be >= 0");

  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto coefficient = [&] { return amplitude * (2.0 * uniform() - 1.0); };

  // Monomial exponents of total degree <= degree, in lexicographic order.
  std::vector<std::vector<int>> monomials;
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  auto enumerate = [&](auto&& self, int axis, int left) -> void {
    if (axis == dim) {
      monomials.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[static_cast<std::size_t>(axis)] = k;
      self(self, axis + 1, left - k);
    }
    e[static_cast<std::size_t>(axis)] = 0;
  };
  enumerate(enumerate, 0, degree);

  auto polynomial = [&]() -> NodePtr {
    NodePtr sum;
    for (const auto& m : monomials) {
      double c = coefficient();
      if (c == 0.0) continue;
      NodePtr term = expr::number(c);
      for (int a = 0; a < dim; ++a) {
        int k = m[static_cast<std::size_t>(a)];
        if (k == 0) continue;
        NodePtr factor = k == 1 ? expr::coord(a) : expr::pow(expr::coord(a), expr::number(k));
        term = expr::mul(term, factor);
      }
      sum = plus(sum, term);
    }
    return sum;
  };

  std::vector<std::vector<NodePtr>> L(static_cast<std::size_t>(dim), std::vector<NodePtr>(static_cast<std::size_t>(dim)));
  for (auto& row : L)
    for (auto& entry : row) entry = polynomial();

  Domain d;
  d.axes.assign(static_cast<std::size_t>(dim), Interval{-0.5, 0.5});
  ManifoldSpec spec("random-d" + std::to_string(dim) + "-s" + std::to_string(seed), d);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      NodePtr gij = i == j ? expr::number(1.0) : nullptr;
      for (int k = 0; k < dim; ++k) {
        const NodePtr& a = L[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        const NodePtr& b = L[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        if (a && b) gij = plus(gij, expr::mul(a, b));
      }
      if (gij) spec.set_metric(i, j, ScalarField(gij, dim));
    }
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      for (int k = j; k < dim; ++k)
        if (NodePtr q = polynomial()) spec.set_cubic(i, j, k, ScalarField(q, dim));
  return spec;
}

}  // namespace igeo
