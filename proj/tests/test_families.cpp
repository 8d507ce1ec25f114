#include <cmath>

#include "doctest.h"
#include "igeo/curvature.hpp"
#include "igeo/diagnostics.hpp"
#include "igeo/families.hpp"

using namespace igeo;

namespace {

RiemannianSpec identity_h(Domain d) {
  return RiemannianSpec::from_text("h", std::move(d), {{"1", ""}, {"", "1"}});
}

}  // namespace

TEST_CASE("Euclidean builder") {
  ManifoldSpec e1 = euclidean(1);
  CHECK(e1.dim() == 1);
  std::vector<double> p{0.3};
  CHECK(eval(*e1.metric(0, 0), p) == 1.0);
  CHECK(to_manifold_text(euclidean(3)).find("Q") == std::string::npos);
  CHECK(euclidean(2).domain().axes[0].lo == -1.0);
}

TEST_CASE("quadratic potential gives flat space") {
  ManifoldSpec s = exponential_family_from_potential(parse("t1^2/2 + t2^2/2", 2), Domain{{{-1, 1}, {-1, 1}}});
  std::vector<double> p{0.4, -0.2};
  GeometryAtPoint geo = geometry_at(s, p);
  CHECK(max_abs_diff(geo.g, Tensor::lower(2, 2) + geometry_at(euclidean(2), p).g) == 0.0);
  CHECK(max_abs(geo.Q) == 0.0);
}

TEST_CASE("exponential potential by hand") {
  ManifoldSpec s = exponential_family_from_potential(parse("exp(t1) + exp(t2)", 2), Domain{{{-1, 1}, {-1, 1}}});
  std::vector<double> p{0.25, -0.5};
  GeometryAtPoint geo = geometry_at(s, p);
  CHECK(geo.g(0, 0) == doctest::Approx(std::exp(0.25)).epsilon(1e-15));
  CHECK(geo.g(1, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(geo.g(0, 1) == 0.0);
  CHECK(geo.Q(0, 0, 0) == doctest::Approx(std::exp(0.25)).epsilon(1e-15));
  CHECK(geo.Q(0, 0, 1) == 0.0);
  for (double a : {-1.0, 1.0}) CHECK(max_abs(riemann(geo, a).Rlow) <= 1e-12);
}

TEST_CASE("Bernoulli potential gives the logistic variance") {
  ManifoldSpec s = exponential_family_from_potential(parse("log(1 + exp(t1))", 1), Domain{{{-2, 2}}});
  for (double t : {-1.5, 0.0, 0.7}) {
    std::vector<double> p{t};
    const double sig = 1.0 / (1.0 + std::exp(-t));
    GeometryAtPoint geo = geometry_at(s, p);
    CHECK(geo.g(0, 0) == doctest::Approx(sig * (1 - sig)).epsilon(1e-14));
    CHECK(geo.Q(0, 0, 0) == doctest::Approx(sig * (1 - sig) * (1 - 2 * sig)).epsilon(1e-12).scale(1.0));
    CHECK(max_abs(christoffel_alpha(geo, 1.0)) <= 1e-15);
  }
}

TEST_CASE("non-convex potentials are rejected") {
  CHECK_THROWS_AS(exponential_family_from_potential(parse("t1^3", 1), Domain{{{-1, 1}}}), ConvexityError);
}

TEST_CASE("normal family matches its Gauss-Hermite Fisher oracle") {
  ManifoldSpec m = normal_family();
  int points = 0;
  for (double mu : {-1.0, -0.3, 0.4, 1.0})
    for (double sigma : {0.5, 0.8, 1.1, 1.6, 2.0}) {
      FisherSample f = normal_family_quadrature_oracle(mu, sigma, 64);
      std::vector<double> p{mu, sigma};
      GeometryAtPoint geo = geometry_at(m, p);
      CHECK(max_abs_diff(f.g, geo.g) <= 1e-9);
      CHECK(max_abs_diff(f.Q, geo.Q) <= 1e-9);
      CHECK(geo.g(0, 0) * sigma * sigma == doctest::Approx(1.0).epsilon(1e-15));
      ++points;
    }
  CHECK(points == 20);
}

TEST_CASE("recurrent builder") {
  Domain box{{{-1, 1}, {-1, 1}}};
  ScalarField zero = ScalarField::constant(0.0, 2);
  ManifoldSpec flat = recurrent_from(identity_h(box), {zero, zero});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) CHECK_FALSE(flat.cubic(i, j, k));

  const double c = 0.35;
  ManifoldSpec r = recurrent_from(identity_h(box), {ScalarField::constant(c, 2), zero});
  std::vector<double> p{0.0, 0.0};
  CHECK(eval(*r.cubic(0, 0, 0), p) == doctest::Approx(3 * c));
  CHECK(eval(*r.cubic(0, 1, 1), p) == doctest::Approx(c));
  CHECK_FALSE(r.cubic(0, 0, 1));

  // omega = d(t1 t2)
  ManifoldSpec d = recurrent_from(identity_h(box), {parse("t2", 2), parse("t1", 2)});
  std::vector<double> q{0.3, -0.6};
  RecurrentOneForm w = recover_recurrent_one_form(d, q);
  CHECK(w.residual <= 1e-10);
  CHECK(w.omega(0) == doctest::Approx(-0.6).epsilon(1e-10));
  CHECK(w.omega(1) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(std::fabs(w.domega(0, 1) - w.domega(1, 0)) <= 1e-10);
}

TEST_CASE("alpha-conformal construction") {
  Domain box{{{-1, 1}, {-1, 1}}};
  RiemannianSpec h = identity_h(box);

  for (double a : {-1.0, 0.0, 0.5, 1.0}) {
    ManifoldSpec trivial = alpha_conformal(h, parse("0", 2), a);
    std::vector<double> p{0.2, 0.1};
    GeometryAtPoint geo = geometry_at(trivial, p);
    CHECK(max_abs_diff(geo.g, geometry_at(euclidean(2), p).g) == 0.0);
    CHECK(max_abs(geo.Q) == 0.0);
  }

  ManifoldSpec conf = alpha_conformal(h, parse("t1", 2), 1.0);
  std::vector<double> p{0.4, -0.3};
  RecurrentOneForm w = recover_recurrent_one_form(conf, p);
  CHECK(w.residual <= 1e-12);
  CHECK(w.omega(0) == doctest::Approx(1.0));
  CHECK(w.omega(1) == 0.0);
  RecurrentCheck rc = check_recurrent_equivalence(SampledGeometry::build(conf, {100, 0}));
  CHECK(rc.equivalence.verdict == Verdict::Pass);
}

TEST_CASE("the dual of an alpha-conformal structure is (-alpha)-conformal") {
  Domain box{{{-1, 1}, {-1, 1}}};
  RiemannianSpec h = RiemannianSpec::from_text("h", box, {{"1", ""}, {"", "1 + t1^2"}});
  for (double a : {0.5, 1.0, -0.3}) {
    ManifoldSpec plus = alpha_conformal(h, parse("t1*t2", 2), a);
    ManifoldSpec minus = alpha_conformal(h, parse("t1*t2", 2), -a);
    for (const auto& p : sample_points(box, {20, 0})) {
      GeometryAtPoint gp = geometry_at(plus, p), gm = geometry_at(minus, p);
      CHECK(max_abs_diff(christoffel_alpha(gp, -1.0), christoffel_alpha(gm, 1.0)) <= 1e-10);
      CHECK(max_abs_diff(christoffel_alpha(gp, 1.0), alpha_conformal_connection(h, parse("t1*t2", 2), a, p)) <= 1e-12);
    }
  }
}

TEST_CASE("random specs are reproducible") {
  CHECK(to_manifold_text(random_spec(2, 42)) == to_manifold_text(random_spec(2, 42)));
  CHECK(to_manifold_text(random_spec(2, 42)) != to_manifold_text(random_spec(2, 43)));
  ManifoldSpec zero = random_spec(3, 5, 2, 0.0);
  std::string text = to_manifold_text(zero);
  CHECK(text.find("Q") == std::string::npos);
  std::vector<double> p{0.1, 0.2, 0.3};
  CHECK(max_abs_diff(geometry_at(zero, p).g, geometry_at(euclidean(3), p).g) == 0.0);
  CHECK_THROWS_AS(random_spec(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(random_spec(6, 0), std::invalid_argument);
}

TEST_CASE("seeded random spec passes the identity checks") {
  DiagnosticReport r = run_suite(random_spec(3, 7), {200, 0});
  for (const char* name : {"curvature_pair_symmetry", "dual_curvature_duality", "summed_curvature_pair_symmetry",
                           "summed_ricci_symmetry"})
    CHECK(r.find(name)->verdict == Verdict::Pass);
}

TEST_CASE("sphere chart is a constant-curvature, conjugate-symmetric witness") {
  SampledGeometry s = SampledGeometry::build(sphere_chart(), {100, 0});
  CHECK(check_constant_curvature(s).verdict == Verdict::Pass);
  CHECK(check_conjugate_symmetry(s).verdict == Verdict::Pass);
  CHECK(check_constant_curvature_conjugate(s).verdict == Verdict::Pass);
}
