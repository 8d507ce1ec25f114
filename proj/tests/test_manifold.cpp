#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "igeo/families.hpp"
#include "igeo/manifold.hpp"

using namespace igeo;

namespace {

const char* kNormalText = R"(# univariate normal in (mu, sigma)
name = normal
dim = 2
domain = [-1, 1] [0.5, 2]
g 1 1 = 1 / t2^2
g 2 2 = 2 / t2^2
Q 1 1 2 = 2 / t2^3
Q 2 2 2 = 8 / t2^3
)";

int format_error_line(const std::string& text) {
  try {
    parse_manifold(text);
  } catch (const FormatError& e) {
    return e.line();
  }
  return -1;
}

std::string format_error_message(const std::string& text) {
  try {
    parse_manifold(text);
  } catch (const FormatError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("manifold file parses into canonical storage") {
  ManifoldSpec s = parse_manifold(kNormalText);
  CHECK(s.name() == "normal");
  CHECK(s.dim() == 2);
  CHECK(s.domain().axes[1].lo == 0.5);
  REQUIRE(s.metric(1, 1));
  CHECK_FALSE(s.metric(0, 1));
  REQUIRE(s.cubic(1, 0, 0));  // same slot as Q 1 1 2
  std::vector<double> p{0.0, 1.0};
  CHECK(eval(*s.cubic(0, 1, 0), p) == 2.0);
  CHECK(eval(*s.cubic(1, 1, 1), p) == 8.0);
}

TEST_CASE("manifold file errors report their line") {
  std::string base = "name = x\ndim = 2\ndomain = [0, 1] [0, 1]\n";
  CHECK(format_error_line(base + "g 2 1 = 1\n") == 4);
  CHECK(format_error_message(base + "g 2 1 = 1\n").find("index order") != std::string::npos);
  CHECK(format_error_line(base + "Q 1 2 1 = 1\n") == 4);
  CHECK(format_error_line(base + "g 1 1 = 1\ng 1 1 = 2\n") == 5);
  CHECK(format_error_line(base + "g 1 1 = 1 +\n") == 4);
  CHECK(format_error_line(base + "g 1 3 = 1\n") == 4);
  CHECK(format_error_line(base + "h 1 1 = 1\n") == 4);
  CHECK(format_error_line("dim = 2\ndomain = [0, 1]\n") >= 1);
  CHECK(format_error_line("name = x\ndim = 2\ndomain = [0, one] [0, 1]\n") == 3);
}

TEST_CASE("writing then reading reproduces the file exactly") {
  ManifoldSpec s = parse_manifold(kNormalText);
  std::string once = to_manifold_text(s);
  std::string twice = to_manifold_text(parse_manifold(once));
  CHECK(once == twice);

  ManifoldSpec r = random_spec(3, 11);
  std::string a = to_manifold_text(r);
  ManifoldSpec back = parse_manifold(a);
  CHECK(to_manifold_text(back) == a);
  std::vector<double> p{0.1, -0.2, 0.3};
  GeometryAtPoint g1 = geometry_at(r, p), g2 = geometry_at(back, p);
  CHECK(max_abs_diff(g1.dg, g2.dg) == 0.0);
  CHECK(max_abs_diff(g1.dQ, g2.dQ) == 0.0);
}

TEST_CASE("validation") {
  CHECK(validate(euclidean(3), 50, 0).ok());
  CHECK(validate(normal_family(), 200, 0).ok());

  ManifoldSpec bad("bad", Domain{{{-1.0, 1.0}, {0.0, 1.0}}});
  bad.set_metric(0, 0, parse("t1", 2));
  bad.set_metric(1, 1, parse("1", 2));
  ValidationReport r = validate(bad, 50, 0);
  CHECK_FALSE(r.ok());
  CHECK(r.failures() > 0);

  ManifoldSpec flat("flat", Domain{{{1.0, 1.0}}});
  flat.set_metric(0, 0, parse("1", 1));
  CHECK_FALSE(validate(flat, 5, 0).domain_ok);

  ManifoldSpec undefined("log", Domain{{{-1.0, 1.0}}});
  undefined.set_metric(0, 0, parse("log(t1) + 2", 1));
  CHECK_NOTHROW(validate(undefined, 20, 0));
  CHECK_FALSE(validate(undefined, 20, 0).ok());
}

TEST_CASE("near-singular metrics are rejected") {
  Tensor g = Tensor::lower(2, 2);
  g(0, 0) = 1.0;
  g(1, 1) = 1e-12;
  CHECK_FALSE(is_spd(g));
  g(1, 1) = 1e-9;
  CHECK(is_spd(g));
  g(0, 1) = g(1, 0) = 2.0;
  CHECK_FALSE(is_spd(g));
}

TEST_CASE("flat space has no connection") {
  std::vector<double> p{0.2, -0.4, 0.9};
  GeometryAtPoint geo = geometry_at(euclidean(3), p);
  CHECK(max_abs(geo.gamma0) == 0.0);
  CHECK(max_abs(geo.K) == 0.0);
  CHECK(max_abs(christoffel_alpha(geo, 2.5)) == 0.0);
}

TEST_CASE("exponential potential: Levi-Civita and difference tensor by hand") {
  ManifoldSpec s = exponential_family_from_potential(parse("exp(t1) + exp(t2)", 2), Domain{{{-1, 1}, {-1, 1}}});
  std::vector<double> p{0.3, -0.6};
  GeometryAtPoint geo = geometry_at(s, p);
  CHECK(geo.gamma0(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(geo.K(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs(christoffel_alpha(geo, 1.0)) <= 1e-15);
}

TEST_CASE("sphere chart Christoffel symbol at 45 degrees") {
  std::vector<double> p{std::numbers::pi / 4, 1.0};
  GeometryAtPoint geo = geometry_at(sphere_chart(), p);
  CHECK(geo.gamma0(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(geo.gamma0(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));  // cot(pi/4)
}

TEST_CASE("alpha connections interpolate the Levi-Civita connection") {
  ManifoldSpec s = random_spec(3, 4);
  std::vector<double> p{0.1, 0.2, -0.3};
  GeometryAtPoint geo = geometry_at(s, p);
  CHECK(max_abs_diff(christoffel_alpha(geo, 0.0), geo.gamma0) == 0.0);
  Tensor mid = 0.5 * (christoffel_alpha(geo, 1.0) + christoffel_alpha(geo, -1.0));
  CHECK(max_abs_diff(mid, geo.gamma0) <= 1e-14);
  for (double a : {0.3, 1.7, -2.2}) {
    Tensor sum = christoffel_alpha(geo, a) + christoffel_alpha(geo, -a);
    CHECK(max_abs_diff(sum, 2.0 * geo.gamma0) <= 1e-14);
    Tensor gam = christoffel_alpha(geo, a);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(gam(k, i, j) == gam(k, j, i));
  }
}

TEST_CASE("covariant derivative of the metric") {
  ManifoldSpec s = normal_family();
  for (double sigma : {0.6, 1.0, 1.9}) {
    std::vector<double> p{0.25, sigma};
    GeometryAtPoint geo = geometry_at(s, p);
    CHECK(max_abs(nabla_g(geo, 0.0)) <= 1e-12);
    CHECK(max_abs_diff(nabla_g(geo, 1.0), geo.Q) <= 1e-10);
    CHECK(max_abs_diff(nabla_g(geo, -1.0), -1.0 * geo.Q) <= 1e-10);
  }
  ManifoldSpec r = random_spec(4, 2);
  std::vector<double> p{0.1, 0.2, -0.3, 0.4};
  GeometryAtPoint geo = geometry_at(r, p);
  CHECK(max_abs(nabla_g(geo, 0.0)) <= 1e-12);
}

TEST_CASE("primal and dual connections are dual with respect to g") {
  ManifoldSpec r = random_spec(3, 8);
  std::vector<double> p{-0.1, 0.35, 0.2};
  GeometryAtPoint geo = geometry_at(r, p);
  Tensor up = christoffel_alpha(geo, 1.0), dn = christoffel_alpha(geo, -1.0);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double rhs = 0.0;
        for (int l = 0; l < 3; ++l) rhs += up(l, i, j) * geo.g(l, k) + dn(l, i, k) * geo.g(j, l);
        worst = std::max(worst, std::fabs(geo.dg(i, j, k) - rhs));
      }
  CHECK(worst <= 1e-12);
  CHECK(sym_residual(lowered_difference(geo), symmetric_group(3, {0, 1, 2})) <= 1e-12);
}

TEST_CASE("non-SPD points raise SpdError") {
  ManifoldSpec bad("bad", Domain{{{-1.0, 1.0}}});
  bad.set_metric(0, 0, parse("t1", 1));
  std::vector<double> p{-0.5};
  CHECK_THROWS_AS(geometry_at(bad, p), SpdError);
}
