#include <cmath>
#include <sstream>

#include "doctest.h"
#include "igeo/families.hpp"
#include "igeo/volume_prior.hpp"

using namespace igeo;

namespace {

/// 0.5 log det g at p.
double half_log_det(const ManifoldSpec& spec, const std::vector<double>& p) {
  GeometryAtPoint geo = geometry_at(spec, p);
  const int n = spec.dim();
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = geo.g(i, j);
  double logdet = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    for (std::size_t r = c + 1; r < a.size(); ++r) {
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < a.size(); ++k) a[r][k] -= m * a[c][k];
    }
    logdet += std::log(a[c][c]);
  }
  return 0.5 * logdet;
}

/// Spread of log_f - 0.5 log det g over the grid.
double jeffreys_spread(const ManifoldSpec& spec, const PriorGrid& grid) {
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const double d = grid.log_f[i] - half_log_det(spec, grid.points[i]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

ManifoldSpec exp_sum() {
  return exponential_family_from_potential(parse("exp(t1) + exp(t2)", 2), Domain{{{-1, 1}, {-1, 1}}}, "exp-sum");
}

ManifoldSpec scaled(const ManifoldSpec& m, double c) {
  ManifoldSpec out(m.name(), m.domain());
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (const auto& f = m.metric(i, j)) out.set_metric(i, j, ScalarField(expr::mul(expr::number(c), f->root()), n));
      for (int k = j; k < n; ++k)
        if (const auto& q = m.cubic(i, j, k)) out.set_cubic(i, j, k, ScalarField(expr::mul(expr::number(c), q->root()), n));
    }
  return out;
}

}  // namespace

TEST_CASE("tau vanishes on flat space and on the primal flat connection") {
  std::vector<double> p{0.1, 0.2};
  CHECK(max_abs(tau(geometry_at(euclidean(2), p), 0.7)) == 0.0);
  CHECK(max_abs(tau(geometry_at(exp_sum(), p), 1.0)) <= 1e-15);
}

TEST_CASE("Levi-Civita tau is the gradient of half log det g") {
  ManifoldSpec s = random_spec(2, 5);
  // Exact oracle: differentiate log(g11 g22 - g12^2) with jets.
  const auto& g11 = s.metric(0, 0)->root();
  const auto& g22 = s.metric(1, 1)->root();
  const auto& g12 = s.metric(0, 1)->root();
  ScalarField det(expr::sub(expr::mul(g11, g22), expr::mul(g12, g12)), 2);
  ScalarField half_log(expr::mul(expr::number(0.5), expr::call(expr::Func::Log, det.root())), 2);
  for (const auto& p : sample_points(s.domain(), {25, 0})) {
    Tensor t = tau(geometry_at(s, p), 0.0);
    Jet2 j = eval_jet2(half_log, p);
    CHECK(std::fabs(t(0) - j.grad(0)) <= 1e-10);
    CHECK(std::fabs(t(1) - j.grad(1)) <= 1e-10);
  }
}

TEST_CASE("flat space has a constant parallel volume") {
  ManifoldSpec e = euclidean(2);
  for (double a : {-1.0, 0.0, 2.0}) {
    PriorGrid g = parallel_volume(e, a, e.domain().center(), {{5, 4}});
    CHECK(g.points.size() == 20);
    for (double v : g.log_f) CHECK(v == 0.0);
  }
}

TEST_CASE("Jeffreys consistency at alpha = 0") {
  for (const ManifoldSpec& m : {normal_family(), sphere_chart(), exp_sum(), random_spec(2, 3)}) {
    PriorGrid g = parallel_volume(m, 0.0, m.domain().center(), {{20, 20}});
    INFO(m.name());
    CHECK(jeffreys_spread(m, g) <= 1e-8);
  }
  ManifoldSpec r3 = random_spec(3, 8);
  CHECK(jeffreys_spread(r3, parallel_volume(r3, 0.0, r3.domain().center(), {{6, 6, 6}})) <= 1e-8);
}

TEST_CASE("normal family Jeffreys prior is proportional to 1/sigma^2") {
  ManifoldSpec m = normal_family();
  PriorGrid g = parallel_volume(m, 0.0, std::vector<double>{0.0, 1.0}, {{20, 20}});
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    const double sigma = g.points[i][1];
    CHECK(std::fabs(std::exp(g.log_f[i]) * sigma * sigma - 1.0) <= 1e-8);
  }
}

TEST_CASE("base point normalization and grid layout") {
  ManifoldSpec m = normal_family();
  std::vector<double> base{-1.0, 0.5};
  PriorGrid g = parallel_volume(m, 0.0, base, {{3, 4}});
  CHECK(g.points.front() == base);
  CHECK(g.log_f.front() == 0.0);
  CHECK(g.points[1][0] == -1.0);  // last axis fastest
  CHECK(g.points[1][1] == 1.0);
  CHECK(g.points.back() == std::vector<double>{1.0, 2.0});
}

TEST_CASE("finite differences of log f reproduce tau") {
  ManifoldSpec m = exp_sum();
  const double alpha = 0.4;
  PriorGrid g = parallel_volume(m, alpha, m.domain().center(), {{41, 41}});
  const double h = 2.0 / 40.0;
  for (int i = 5; i < 36; i += 10)
    for (int j = 5; j < 36; j += 10) {
      auto at = [&](int a, int b) { return g.log_f[static_cast<std::size_t>(a * 41 + b)]; };
      Tensor t = tau(geometry_at(m, g.points[static_cast<std::size_t>(i * 41 + j)]), alpha);
      CHECK(std::fabs((at(i + 1, j) - at(i - 1, j)) / (2 * h) - t(0)) <= 5 * h * h);
      CHECK(std::fabs((at(i, j + 1) - at(i, j - 1)) / (2 * h) - t(1)) <= 5 * h * h);
    }
}

TEST_CASE("rescaling g and Q shifts the Jeffreys log density by a constant") {
  ManifoldSpec m = random_spec(2, 14);
  PriorGrid a = parallel_volume(m, 0.0, m.domain().center(), {{8, 8}});
  PriorGrid b = parallel_volume(scaled(m, 3.5), 0.0, m.domain().center(), {{8, 8}});
  for (std::size_t i = 1; i < a.log_f.size(); ++i)
    CHECK(std::fabs((a.log_f[i] - a.log_f[0]) - (b.log_f[i] - b.log_f[0])) <= 1e-9);
}

TEST_CASE("Ricci-symmetric witnesses admit parallel volumes at every alpha") {
  for (const ManifoldSpec& m : {sphere_chart(), exp_sum()})
    for (double a : {-3.0, -1.0, 0.7, 2.0}) CHECK_NOTHROW(parallel_volume(m, a, m.domain().center(), {{6, 6}}));
}

TEST_CASE("non-equiaffine connections are refused") {
  ManifoldSpec r = random_spec(2, 1);
  try {
    parallel_volume(r, 1.0, r.domain().center(), {{5, 5}});
    FAIL("expected NotEquiaffineError");
  } catch (const NotEquiaffineError& e) {
    CHECK(std::string(e.what()).find("not equiaffine at alpha=1") != std::string::npos);
  }
  CHECK_THROWS_AS(parallel_volume(r, 0.0, std::vector<double>{2.0, 0.0}, {{5, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(parallel_volume(r, 0.0, r.domain().center(), {{1, 5}}), std::invalid_argument);
}

TEST_CASE("path independence probe") {
  std::vector<double> p{-0.8, -0.7}, q{0.9, 0.6};
  CHECK(path_independence_probe(euclidean(2), 1.0, p, q) == 0.0);
  CHECK(path_independence_probe(exp_sum(), 2.0, p, q) <= 1e-9);
  std::vector<double> a{-0.45, -0.4}, b{0.45, 0.4};
  CHECK(path_independence_probe(random_spec(2, 1), 1.0, a, b) > 1e-4);
}

TEST_CASE("trapezoid mass and CSV output") {
  ManifoldSpec e = euclidean(2);
  PriorGrid g = parallel_volume(e, 0.0, e.domain().center(), {{3, 3}});
  CHECK(trapezoid_mass(g, e.domain()) == doctest::Approx(4.0).epsilon(1e-15));
  std::ostringstream os;
  write_csv(g, os);
  std::string csv = os.str();
  CHECK(csv.rfind("t1,t2,log_f\n-1,-1,0\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("serial and parallel grids agree exactly") {
  ManifoldSpec m = normal_family();
  PriorOptions s, p;
  s.exec = Execution::Serial;
  PriorGrid a = parallel_volume(m, 0.0, m.domain().center(), {{10, 10}}, s);
  PriorGrid b = parallel_volume(m, 0.0, m.domain().center(), {{10, 10}}, p);
  CHECK(a.log_f == b.log_f);
}
