#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "igeo/cli.hpp"
#include "igeo/families.hpp"

using namespace igeo;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const cli::Hooks& hooks = {}) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err, hooks);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "igeo_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string write_file(const std::string& name, const std::string& text) {
  std::string path = temp_path(name);
  std::ofstream(path) << text;
  return path;
}

std::string write_spec(const std::string& name, const ManifoldSpec& spec) { return write_file(name, to_manifold_text(spec)); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("validate") {
  CHECK(run({"validate", write_spec("e.igm", euclidean(2))}).code == 0);

  Result order = run({"validate", write_file("order.igm", "name = x\ndim = 2\ndomain = [0, 1] [0, 1]\ng 2 1 = 1\n")});
  CHECK(order.code == 2);
  CHECK(order.err.find("index order") != std::string::npos);
  CHECK(order.err.find("line 4") != std::string::npos);

  Result spd = run({"validate", write_file("spd.igm", "name = x\ndim = 1\ndomain = [-1, 1]\ng 1 1 = t1\n")});
  CHECK(spd.code == 1);
  CHECK(spd.out.find("invalid") != std::string::npos);

  CHECK(run({"validate", temp_path("missing.igm")}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("check") {
  std::string sphere = write_spec("sphere.igm", sphere_chart());
  CHECK(run({"check", sphere}).code == 0);
  std::string r7 = write_spec("r7.igm", random_spec(3, 7));
  Result r = run({"check", r7, "--json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"verdict\": \"skip\"") != std::string::npos);

  Result neg = run({"check", sphere, "--alpha", "-2", "--alpha", "0.5", "--json"});
  CHECK(neg.code == 0);
  CHECK(neg.out.find("-2") != std::string::npos);

  cli::Hooks broken;
  broken.curvature = [](const GeometryAtPoint& geo, double alpha) {
    CurvatureAtPoint c = riemann(geo, alpha);
    c.Ric(0, 1) += 1e-3;
    return c;
  };
  CHECK(run({"check", r7}, broken).code == 1);

  CHECK(run({"check", sphere, "--tol", "-1"}).code == 2);
  CHECK(run({"check", sphere, "--alpha0", "0"}).code == 2);
  CHECK(run({"check", write_file("spd2.igm", "name = x\ndim = 1\ndomain = [-1, 1]\ng 1 1 = t1\n")}).code == 1);
}

TEST_CASE("check output is identical across runs, thread counts and execution paths") {
  std::string r42 = write_spec("r42.igm", random_spec(3, 42));
  Result a = run({"check", r42, "--json"});
  Result b = run({"--threads", "1", "check", r42, "--json"});
  Result c = run({"--threads", "4", "check", r42, "--json"});
  Result d = run({"check", r42, "--json", "--serial"});
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out == d.out);
}

TEST_CASE("prior") {
  std::string normal = write_spec("normal.igm", normal_family());
  std::string csv = temp_path("normal.csv");
  REQUIRE(run({"prior", normal, "--alpha", "0", "--base", "0,1", "-o", csv}).code == 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t1,t2,log_f");
  int rows = 0;
  while (std::getline(in, line)) {
    double mu = 0, sigma = 0, logf = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &mu, &sigma, &logf) == 3);
    CHECK(std::fabs(std::exp(logf) * sigma * sigma - 1.0) <= 1e-8);
    ++rows;
  }
  CHECK(rows == 400);

  Result flat = run({"prior", write_spec("e2.igm", euclidean(2)), "--alpha", "1.5", "--grid", "4,3"});
  CHECK(flat.code == 0);
  CHECK(flat.out.find("log_f\n-1,-1,0\n") != std::string::npos);

  Result bad = run({"prior", write_spec("r1.igm", random_spec(2, 1)), "--alpha", "1"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("not equiaffine at alpha=1") != std::string::npos);

  Result norm = run({"prior", write_spec("e1.igm", euclidean(1)), "--alpha", "0", "--grid", "3", "--normalize"});
  CHECK(norm.code == 0);
  CHECK(norm.out.find("-0.69314718055994") != std::string::npos);  // log(1/2) on [-1, 1]

  CHECK(run({"prior", normal}).code == 2);
  CHECK(run({"prior", normal, "--alpha", "0", "--grid", "1"}).code == 2);
  CHECK(run({"prior", normal, "--alpha", "0", "--base", "5,1"}).code == 2);
  CHECK(run({"prior", normal, "--alpha", "0", "--base", "0"}).code == 2);
}

TEST_CASE("random") {
  std::string a = temp_path("r0a.igm"), b = temp_path("r0b.igm");
  REQUIRE(run({"random", "--dim", "2", "--seed", "0", "-o", a}).code == 0);
  REQUIRE(run({"random", "--dim", "2", "--seed", "0", "-o", b}).code == 0);
  CHECK(slurp(a) == slurp(b));

  Result zero = run({"random", "--dim", "3", "--amplitude", "0"});
  CHECK(zero.code == 0);
  CHECK(zero.out.find("Q ") == std::string::npos);
  CHECK(zero.out.find("g 1 1 = 1\n") != std::string::npos);

  std::string r9 = temp_path("r9.igm");
  REQUIRE(run({"random", "--dim", "4", "--seed", "9", "-o", r9}).code == 0);
  CHECK(run({"validate", r9}).code == 0);
  CHECK(run({"check", r9}).code == 0);

  CHECK(run({"random", "--dim", "9"}).code == 2);
  CHECK(run({"random", "--seed", "1"}).code == 2);
}

TEST_CASE("family") {
  for (const char* name : {"euclidean", "sphere", "normal", "exp-sum", "bernoulli"}) {
    Result r = run({"family", name});
    CHECK(r.code == 0);
    CHECK(r.out.find("name = ") == 0);
  }
  CHECK(run({"family", "torus"}).code == 2);
}
