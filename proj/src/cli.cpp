#include "igeo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "igeo/diagnostics.hpp"
#include "igeo/families.hpp"
#include "igeo/volume_prior.hpp"

namespace igeo::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size() || !std::isfinite(x))
      throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
    v.push_back(x);
  }
  if (v.empty()) throw UsageError(std::string("empty ") + what);
  return v;
}

ManifoldSpec load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return read_manifold(in);
  } catch (const FormatError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  write(f);
  if (!f) throw UsageError("write failed for '" + path + "'");
}

Execution execution(bool serial) { return serial ? Execution::Serial : Execution::Parallel; }

int cmd_validate(const std::string& path, int points, std::uint64_t seed, std::ostream& out) {
  ManifoldSpec spec = load(path);
  ValidationReport r = validate(spec, points, seed);
  out << "manifold: " << spec.name() << "  dim: " << spec.dim() << '\n';
  if (!r.domain_ok) {
    out << "domain: FAIL " << r.domain_message << '\n';
    return Failure;
  }
  out << "domain: ok\n";
  out << "points: " << r.points.size() << "  failures: " << r.failures() << '\n';
  for (const auto& p : r.points) {
    if (p.ok) continue;
    out << "  at (";
    for (std::size_t i = 0; i < p.point.size(); ++i) out << (i ? ", " : "") << fmt(p.point[i]);
    out << "): " << p.message << '\n';
  }
  out << (r.ok() ? "valid\n" : "invalid\n");
  return r.ok() ? Ok : Failure;
}

int cmd_random(int dim, std::uint64_t seed, int degree, double amplitude, const std::string& path, std::ostream& out) {
  ManifoldSpec spec;
  try {
    spec = random_spec(dim, seed, degree, amplitude);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(path, out, [&](std::ostream& o) { write_manifold(spec, o); });
  return Ok;
}

ManifoldSpec family_by_name(const std::string& name, int dim) {
  if (name == "euclidean") return euclidean(dim);
  if (name == "sphere") return sphere_chart();
  if (name == "normal") return normal_family();
  if (name == "exp-sum")
    return exponential_family_from_potential(parse("exp(t1) + exp(t2)", 2), Domain{{{-1.0, 1.0}, {-1.0, 1.0}}},
                                             "exp-sum");
  if (name == "bernoulli")
    return exponential_family_from_potential(parse("log(1 + exp(t1))", 1), Domain{{{-2.0, 2.0}}}, "bernoulli");
  throw UsageError("unknown family '" + name + "' (euclidean, sphere, normal, exp-sum, bernoulli)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Statistical manifold geometry: connection identities, equiaffinity and parallel priors", "igeo"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)")->check(CLI::NonNegativeNumber);

  // validate
  std::string path;
  int points = 200;
  std::uint64_t seed = 0;
  auto* validate_cmd = app.add_subcommand("validate", "Parse a manifold file and test g for positive definiteness");
  validate_cmd->add_option("file", path, "Manifold file")->required();
  validate_cmd->add_option("--points", points, "Sample points")->check(CLI::PositiveNumber);
  validate_cmd->add_option("--seed", seed, "Sampling seed");

  // check
  double tol = 1e-8;
  std::vector<double> alphas;
  double alpha0 = 0.7;
  bool json = false;
  bool serial = false;
  auto* check_cmd = app.add_subcommand("check", "Run the identity, property and implication checks");
  check_cmd->add_option("file", path, "Manifold file")->required();
  check_cmd->add_option("--tol", tol, "Residual tolerance")->check(CLI::PositiveNumber);
  check_cmd->add_option("--points", points, "Sample points")->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed, "Sampling seed");
  check_cmd->add_option("--alpha", alphas, "Alpha values (repeatable; default -1 0 1)");
  check_cmd->add_option("--alpha0", alpha0, "Nonzero alpha used by the alpha-pair implication");
  check_cmd->add_flag("--json", json, "JSON output");
  check_cmd->add_flag("--serial", serial, "Use the serial reference path");

  // prior
  double alpha = 0.0;
  std::string grid_text, base_text, output;
  bool normalize = false;
  double closed_tol = 1e-8;
  auto* prior_cmd = app.add_subcommand("prior", "Tabulate log f of the alpha-parallel volume form on a grid");
  prior_cmd->add_option("file", path, "Manifold file")->required();
  prior_cmd->add_option("--alpha", alpha, "Connection parameter")->required();
  prior_cmd->add_option("--grid", grid_text, "Points per axis: k or k1,...,kn (default 20)");
  prior_cmd->add_option("--base", base_text, "Base point x1,...,xn where log f = 0 (default box center)");
  prior_cmd->add_option("-o,--output", output, "CSV output path (default stdout)");
  prior_cmd->add_option("--tol", closed_tol, "Closedness tolerance")->check(CLI::PositiveNumber);
  prior_cmd->add_flag("--normalize", normalize, "Shift log f so the trapezoid mass over the grid is 1");
  prior_cmd->add_flag("--serial", serial, "Use the serial reference path");

  // random
  int dim = 0;
  int degree = 2;
  double amplitude = 0.3;
  auto* random_cmd = app.add_subcommand("random", "Write a seeded random manifold file");
  random_cmd->add_option("--dim", dim, "Dimension (2-5)")->required();
  random_cmd->add_option("--seed", seed, "Generator seed");
  random_cmd->add_option("--degree", degree, "Polynomial degree");
  random_cmd->add_option("--amplitude", amplitude, "Coefficient amplitude");
  random_cmd->add_option("-o,--output", output, "Output path (default stdout)");

  // family
  std::string family;
  auto* family_cmd = app.add_subcommand("family", "Write a built-in witness manifold file");
  family_cmd->add_option("name", family, "euclidean | sphere | normal | exp-sum | bernoulli")->required();
  family_cmd->add_option("--dim", dim, "Dimension for euclidean");
  family_cmd->add_option("-o,--output", output, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Ok : Usage;
  }

  try {
    if (threads > 0) set_threads(threads);

    if (*validate_cmd) return cmd_validate(path, points, seed, out);

    if (*check_cmd) {
      ManifoldSpec spec = load(path);
      SuiteOptions opts;
      opts.check.tol = tol;
      opts.check.exec = execution(serial);
      if (hooks.curvature) opts.check.curvature = hooks.curvature;
      if (!alphas.empty()) opts.alphas = alphas;
      opts.alpha0 = alpha0;
      if (alpha0 == 0.0) throw UsageError("--alpha0 must be nonzero");
      SampledGeometry s = SampledGeometry::build(spec, Sampling{points, seed}, opts.check.exec);
      if (!s.ok) {
        err << "igeo: " << s.failure << '\n';
        return Failure;
      }
      DiagnosticReport report = run_suite(s, opts);
      if (json)
        write_json(report, out);
      else
        write_text(report, out);
      return report.has_failure() ? Failure : Ok;
    }

    if (*prior_cmd) {
      ManifoldSpec spec = load(path);
      const int n = spec.dim();
      GridSpec grid;
      if (grid_text.empty()) {
        grid.counts.assign(static_cast<std::size_t>(n), 20);
      } else {
        for (double c : parse_list(grid_text, "grid")) {
          if (c != std::floor(c) || c < 2 || c > 1e6) throw UsageError("grid counts must be integers >= 2");
          grid.counts.push_back(static_cast<int>(c));
        }
        if (grid.counts.size() == 1) grid.counts.assign(static_cast<std::size_t>(n), grid.counts[0]);
        if (static_cast<int>(grid.counts.size()) != n) throw UsageError("--grid needs 1 or " + std::to_string(n) + " counts");
      }
      std::vector<double> base = base_text.empty() ? spec.domain().center() : parse_list(base_text, "base");
      if (static_cast<int>(base.size()) != n) throw UsageError("--base needs " + std::to_string(n) + " coordinates");
      if (!spec.domain().contains(base)) throw UsageError("--base lies outside the domain");

      PriorOptions po;
      po.closedness_tol = closed_tol;
      po.exec = execution(serial);
      PriorGrid g = parallel_volume(spec, alpha, base, grid, po);
      if (normalize) {
        double shift = std::log(trapezoid_mass(g, spec.domain()));
        for (double& v : g.log_f) v -= shift;
      }
      emit(output, out, [&](std::ostream& o) { write_csv(g, o); });
      return Ok;
    }

    if (*random_cmd) return cmd_random(dim, seed, degree, amplitude, output, out);

    if (*family_cmd) {
      ManifoldSpec spec = family_by_name(family, dim == 0 ? 2 : dim);
      emit(output, out, [&](std::ostream& o) { write_manifold(spec, o); });
      return Ok;
    }
  } catch (const UsageError& e) {
    err << "igeo: " << e.what() << '\n';
    return Usage;
  } catch (const NotEquiaffineError& e) {
    err << "igeo: " << e.what() << '\n';
    return Failure;
  } catch (const std::exception& e) {
    // SPD and domain failures surfaced while evaluating a parsed spec.
    err << "igeo: " << e.what() << '\n';
    return Failure;
  }
  return Usage;
}

}  // namespace igeo::cli
