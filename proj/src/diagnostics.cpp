#include "igeo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "igeo/volume_prior.hpp"

namespace igeo {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skip: return "skip";
  }
  return "?";
}

std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Identity: return "identity";
    case CheckKind::Property: return "property";
    case CheckKind::Implication: return "implication";
  }
  return "?";
}

bool DiagnosticReport::has_failure() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const auto& c) { return c.verdict == Verdict::Fail && c.kind != CheckKind::Property; });
}

const CheckResult* DiagnosticReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

SampledGeometry SampledGeometry::from_points(const ManifoldSpec& spec, std::vector<std::vector<double>> points,
                                             Execution exec) {
  SampledGeometry s;
  s.manifold = spec.name();
  s.dim = spec.dim();
  s.points = std::move(points);
  s.geometry.resize(s.points.size());
  std::vector<std::string> errors(s.points.size());
  for_each_index(s.points.size(), exec, [&](std::size_t i) {
    try {
      s.geometry[i] = geometry_at(spec, s.points[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      s.ok = false;
      s.failure = "point " + std::to_string(i) + ": " + errors[i];
      break;
    }
  }
  return s;
}

SampledGeometry SampledGeometry::build(const ManifoldSpec& spec, const Sampling& sampling, Execution exec) {
  SampledGeometry s = from_points(spec, sample_points(spec.domain(), sampling), exec);
  s.seed = sampling.seed;
  return s;
}

namespace {

std::vector<double> merged_alphas(const std::vector<double>& extra) {
  std::set<double> s{-1.0, 0.0, 1.0};
  s.insert(extra.begin(), extra.end());
  return {s.begin(), s.end()};
}

CheckResult header(std::string name, CheckKind kind, std::vector<double> alpha, const SampledGeometry& s,
                   const CheckOptions& o) {
  CheckResult r;
  r.name = std::move(name);
  r.kind = kind;
  r.alpha = std::move(alpha);
  r.points = static_cast<int>(s.points.size());
  r.tol = o.tol;
  return r;
}

CheckResult skipped(CheckResult r, std::string note) {
  r.verdict = Verdict::Skip;
  r.max_residual = 0.0;
  r.note = std::move(note);
  return r;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Max over points; the worst point is the first index attaining it.
CheckResult reduce(CheckResult r, const SampledGeometry& s, const std::vector<double>& residuals) {
  double worst = 0.0;
  std::size_t at = 0;
  bool found = false;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    double v = residuals[i];
    if (std::isnan(v)) {
      worst = v;
      at = i;
      found = true;
      break;
    }
    if (!found || v > worst) {
      worst = v;
      at = i;
      found = true;
    }
  }
  r.max_residual = worst;
  if (found) r.worst_point = s.points[at];
  r.verdict = worst <= r.tol ? Verdict::Pass : Verdict::Fail;
  return r;
}

template <class Fn>
std::vector<double> per_point(const SampledGeometry& s, const CheckOptions& o, Fn&& fn) {
  std::vector<double> out(s.geometry.size());
  for_each_index(out.size(), o.exec, [&](std::size_t i) { out[i] = fn(s.geometry[i]); });
  return out;
}

template <class Fn>
CheckResult pointwise_check(CheckResult r, const SampledGeometry& s, const CheckOptions& o, Fn&& fn) {
  if (!s.ok) return skipped(std::move(r), "geometry unavailable: " + s.failure);
  return reduce(std::move(r), s, per_point(s, o, fn));
}

Tensor levi_civita_dq(const GeometryAtPoint& geo) {
  const int n = geo.dim();
  Tensor out = Tensor::lower(n, 4);  // (m,i,j,k) = (nabla0_m Q)_ijk
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = geo.dQ(m, i, j, k);
          for (int l = 0; l < n; ++l)
            v -= geo.gamma0(l, m, i) * geo.Q(l, j, k) + geo.gamma0(l, m, j) * geo.Q(i, l, k) +
                 geo.gamma0(l, m, k) * geo.Q(i, j, l);
          out(m, i, j, k) = v;
        }
  return out;
}

double ricci_asymmetry(const Tensor& ric) { return sym_residual(ric, swap_group(2, 0, 1)); }

// Residuals of the two pointwise conjugate-symmetry notions.
std::pair<double, double> conjugate_residuals(const GeometryAtPoint& geo, const CheckOptions& o) {
  CurvatureAtPoint p = o.curvature(geo, 1.0);
  CurvatureAtPoint m = o.curvature(geo, -1.0);
  return {max_abs_diff(p.R, m.R), max_abs_diff(p.Ric, m.Ric)};
}

// 0 = agree, 1 = disagree, -1 = excluded by the margin band.
double agreement_code(std::pair<double, double> res, const CheckOptions& o) {
  auto in_band = [&](double v) { return v >= o.tol / o.margin_band && v <= o.tol * o.margin_band; };
  if (in_band(res.first) || in_band(res.second)) return -1.0;
  bool a = res.first <= o.tol;
  bool b = res.second <= o.tol;
  return a == b ? 0.0 : 1.0;
}

CheckResult count_disagreements(CheckResult r, const SampledGeometry& s, const std::vector<double>& codes) {
  double disagree = 0.0;
  int excluded = 0;
  std::size_t first_bad = codes.size();
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] < 0.0) {
      ++excluded;
    } else if (codes[i] > 0.0) {
      disagree += 1.0;
      if (first_bad == codes.size()) first_bad = i;
    }
  }
  r.max_residual = disagree;
  if (first_bad < codes.size()) r.worst_point = s.points[first_bad];
  r.verdict = disagree <= r.tol ? Verdict::Pass : Verdict::Fail;
  r.note = "excluded_in_margin=" + std::to_string(excluded);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Identities

CheckResult check_statistical(const SampledGeometry& s, const CheckOptions& o) {
  const auto full = symmetric_group(3, {0, 1, 2});
  return pointwise_check(header("statistical", CheckKind::Identity, {1.0}, s, o), s, o, [&](const GeometryAtPoint& geo) {
    double a = max_abs_diff(nabla_g(geo, 1.0), geo.Q);
    double b = sym_residual(lowered_difference(geo), full);
    double c = sym_residual(geo.Q, full);
    return std::max({a, b, c});
  });
}

CheckResult check_torsion_free(const SampledGeometry& s, const std::vector<double>& alphas, const CheckOptions& o) {
  return pointwise_check(header("torsion_free", CheckKind::Identity, alphas, s, o), s, o, [&](const GeometryAtPoint& geo) {
    double worst = 0.0;
    for (double a : alphas) worst = std::max(worst, max_abs_diff(christoffel_alpha(geo, a), permute(christoffel_alpha(geo, a), {0, 2, 1})));
    return worst;
  });
}

CheckResult check_connection_duality(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("connection_duality", CheckKind::Identity, {1.0, -1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           const int n = geo.dim();
                           Tensor gp = christoffel_alpha(geo, 1.0);
                           Tensor gm = christoffel_alpha(geo, -1.0);
                           double worst = 0.0;
                           for (int i = 0; i < n; ++i)
                             for (int j = 0; j < n; ++j)
                               for (int k = 0; k < n; ++k) {
                                 double v = geo.dg(i, j, k);
                                 for (int l = 0; l < n; ++l) v -= gp(l, i, j) * geo.g(l, k) + gm(l, i, k) * geo.g(j, l);
                                 worst = std::max(worst, std::fabs(v));
                               }
                           return worst;
                         });
}

CheckResult check_first_bianchi(const SampledGeometry& s, const std::vector<double>& alphas, const CheckOptions& o) {
  return pointwise_check(header("first_bianchi", CheckKind::Identity, alphas, s, o), s, o, [&](const GeometryAtPoint& geo) {
    const int n = geo.dim();
    double worst = 0.0;
    for (double a : alphas) {
      Tensor R = o.curvature(geo, a).R;
      for (int d = 0; d < n; ++d)
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
              worst = std::max(worst, std::fabs(R(d, z, x, y) + R(d, x, y, z) + R(d, y, z, x)));
    }
    return worst;
  });
}

CheckResult check_curvature_pair_symmetry(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("curvature_pair_symmetry", CheckKind::Identity, {1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           const int n = geo.dim();
                           Tensor L = o.curvature(geo, 1.0).Rlow;
                           double worst = 0.0;
                           for (int a = 0; a < n; ++a)
                             for (int b = 0; b < n; ++b)
                               for (int c = 0; c < n; ++c)
                                 for (int d = 0; d < n; ++d)
                                   worst = std::max(worst, std::fabs(L(a, b, c, d) + L(b, a, d, c) - L(c, d, a, b) - L(d, c, b, a)));
                           return worst;
                         });
}

CheckResult check_dual_curvature_duality(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("dual_curvature_duality", CheckKind::Identity, {1.0, -1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           Tensor P = o.curvature(geo, 1.0).Rlow;
                           Tensor M = o.curvature(geo, -1.0).Rlow;
                           Tensor sum = P + permute(M, {0, 1, 3, 2});
                           return max_abs(sum);
                         });
}

CheckResult check_summed_curvature_pair_symmetry(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("summed_curvature_pair_symmetry", CheckKind::Identity, {1.0, -1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           Tensor S = o.curvature(geo, 1.0).Rlow + o.curvature(geo, -1.0).Rlow;
                           return max_abs_diff(S, permute(S, {2, 3, 0, 1}));
                         });
}

CheckResult check_summed_ricci_symmetry(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("summed_ricci_symmetry", CheckKind::Identity, {1.0, -1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           return ricci_asymmetry(o.curvature(geo, 1.0).Ric + o.curvature(geo, -1.0).Ric);
                         });
}

CheckResult check_levi_civita_ricci_symmetry(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("levi_civita_ricci_symmetry", CheckKind::Identity, {0.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) { return ricci_asymmetry(o.curvature(geo, 0.0).Ric); });
}

CheckResult check_ricci_alpha_closed_form(const SampledGeometry& s, const std::vector<double>& alphas,
                                          const CheckOptions& o) {
  return pointwise_check(header("ricci_alpha_closed_form", CheckKind::Identity, alphas, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           Tensor rp = o.curvature(geo, 1.0).Ric;
                           Tensor rm = o.curvature(geo, -1.0).Ric;
                           double worst = 0.0;
                           for (double a : alphas)
                             worst = std::max(worst, max_abs_diff(ricci_alpha_closed_form(geo, rp, rm, a), o.curvature(geo, a).Ric));
                           return worst;
                         });
}

CheckResult check_ricci_alpha_antisymmetry(const SampledGeometry& s, const std::vector<double>& alphas,
                                           const CheckOptions& o) {
  return pointwise_check(header("ricci_alpha_antisymmetry", CheckKind::Identity, alphas, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           Tensor rp = o.curvature(geo, 1.0).Ric;
                           Tensor rm = o.curvature(geo, -1.0).Ric;
                           double worst = 0.0;
                           for (double a : alphas)
                             worst = std::max(worst, ricci_alpha_antisym_relation(o.curvature(geo, a).Ric,
                                                                                  o.curvature(geo, -a).Ric, rp, rm, a));
                           return worst;
                         });
}

CheckResult check_ricci_difference_trace(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("ricci_difference_trace", CheckKind::Identity, {1.0, -1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           const int n = geo.dim();
                           Tensor diff = o.curvature(geo, -1.0).Ric - o.curvature(geo, 1.0).Ric;
                           Tensor dq = levi_civita_dq(geo);
                           // A(x,y,z,w) = (nabla0_x Q)(y,z,w) - (nabla0_y Q)(x,z,w)
                           Tensor alt = Tensor::lower(n, 4);
                           for (int x = 0; x < n; ++x)
                             for (int y = 0; y < n; ++y)
                               for (int z = 0; z < n; ++z)
                                 for (int w = 0; w < n; ++w) alt(x, y, z, w) = dq(x, y, z, w) - dq(y, x, z, w);
                           Tensor traced = trace_g(alt, 0, 3, geo.ginv);  // (y,z)
                           return max_abs_diff(diff, traced);
                         });
}

// ---------------------------------------------------------------------------
// Properties

CheckResult check_conjugate_symmetry(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("conjugate_symmetry", CheckKind::Property, {1.0, -1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           return max_abs_diff(o.curvature(geo, 1.0).R, o.curvature(geo, -1.0).R);
                         });
}

CheckResult check_conjugate_ricci_symmetry(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("conjugate_ricci_symmetry", CheckKind::Property, {1.0, -1.0}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) {
                           return max_abs_diff(o.curvature(geo, 1.0).Ric, o.curvature(geo, -1.0).Ric);
                         });
}

namespace {

ConstantCurvatureFit sample_fit(const SampledGeometry& s, const CheckOptions& o) {
  std::vector<Tensor> rlow(s.geometry.size());
  std::vector<Tensor> metrics(s.geometry.size());
  for_each_index(s.geometry.size(), o.exec, [&](std::size_t i) {
    rlow[i] = o.curvature(s.geometry[i], 1.0).Rlow;
    metrics[i] = s.geometry[i].g;
  });
  return constant_curvature_fit(rlow, metrics);
}

}  // namespace

CheckResult check_constant_curvature(const SampledGeometry& s, const CheckOptions& o) {
  CheckResult r = header("constant_curvature", CheckKind::Property, {1.0}, s, o);
  if (!s.ok) return skipped(std::move(r), "geometry unavailable: " + s.failure);
  ConstantCurvatureFit fit = sample_fit(s, o);
  r.max_residual = fit.residual;
  r.verdict = fit.residual <= o.tol ? Verdict::Pass : Verdict::Fail;
  r.note = "K=" + fmt(fit.k_hat);
  return r;
}

EquiaffineCheck check_equiaffine(const SampledGeometry& s, double alpha, const CheckOptions& o) {
  EquiaffineCheck out;
  out.ricci_symmetry = pointwise_check(header("equiaffine.ricci_symmetry", CheckKind::Property, {alpha}, s, o), s, o,
                                       [&](const GeometryAtPoint& geo) { return ricci_asymmetry(o.curvature(geo, alpha).Ric); });
  out.tau_closedness = pointwise_check(header("equiaffine.tau_closedness", CheckKind::Property, {alpha}, s, o), s, o,
                                       [&](const GeometryAtPoint& geo) { return tau_closedness(geo, alpha); });
  if (out.ricci_symmetry.verdict == Verdict::Skip || out.tau_closedness.verdict == Verdict::Skip) {
    out.verdict = Verdict::Skip;
  } else if (out.ricci_symmetry.verdict == Verdict::Pass && out.tau_closedness.verdict == Verdict::Pass) {
    out.verdict = Verdict::Pass;
  } else {
    out.verdict = Verdict::Fail;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Implications

CheckResult check_equiaffine_criteria_agree(const SampledGeometry& s, const std::vector<double>& alphas,
                                            const CheckOptions& o) {
  CheckResult r = header("equiaffine_criteria_agree", CheckKind::Implication, alphas, s, o);
  if (!s.ok) return skipped(std::move(r), "geometry unavailable: " + s.failure);
  double disagree = 0.0;
  std::string which;
  for (double a : alphas) {
    EquiaffineCheck e = check_equiaffine(s, a, o);
    if (e.ricci_symmetry.verdict != e.tau_closedness.verdict) {
      disagree += 1.0;
      which += (which.empty() ? "" : ",") + fmt(a);
    }
  }
  r.max_residual = disagree;
  r.verdict = disagree <= o.tol ? Verdict::Pass : Verdict::Fail;
  if (!which.empty()) r.note = "disagree_at_alpha=" + which;
  return r;
}

CheckResult check_constant_curvature_conjugate(const SampledGeometry& s, const CheckOptions& o) {
  CheckResult r = header("constant_curvature_conjugate", CheckKind::Implication, {1.0, -1.0}, s, o);
  if (!s.ok) return skipped(std::move(r), "geometry unavailable: " + s.failure);
  ConstantCurvatureFit fit = sample_fit(s, o);
  if (!(fit.residual <= o.tol)) return skipped(std::move(r), "precondition: not of constant curvature");
  r = reduce(std::move(r), s, per_point(s, o, [&](const GeometryAtPoint& geo) {
               auto [rs, rr] = conjugate_residuals(geo, o);
               return std::max(rs, rr);
             }));
  r.note = "K=" + fmt(fit.k_hat);
  return r;
}

namespace {

double equiaffine_residual(const GeometryAtPoint& geo, double alpha, const CheckOptions& o) {
  return std::max(ricci_asymmetry(o.curvature(geo, alpha).Ric), tau_closedness(geo, alpha));
}

}  // namespace

CheckResult check_ricci_symmetric_equiaffine(const SampledGeometry& s, const std::vector<double>& alpha_grid,
                                             const CheckOptions& o) {
  CheckResult r = header("ricci_symmetric_equiaffine", CheckKind::Implication, alpha_grid, s, o);
  if (!s.ok) return skipped(std::move(r), "geometry unavailable: " + s.failure);
  if (check_conjugate_ricci_symmetry(s, o).verdict != Verdict::Pass)
    return skipped(std::move(r), "precondition: not conjugate Ricci-symmetric");
  return reduce(std::move(r), s, per_point(s, o, [&](const GeometryAtPoint& geo) {
                  double worst = 0.0;
                  for (double a : alpha_grid) worst = std::max(worst, equiaffine_residual(geo, a, o));
                  return worst;
                }));
}

CheckResult check_alpha_pair_equiaffine(const SampledGeometry& s, double alpha0, const std::vector<double>& alpha_grid,
                                        const CheckOptions& o) {
  if (alpha0 == 0.0) throw std::invalid_argument("alpha_pair_equiaffine: alpha0 must be nonzero");
  std::vector<double> alphas{alpha0};
  alphas.insert(alphas.end(), alpha_grid.begin(), alpha_grid.end());
  CheckResult r = header("alpha_pair_equiaffine", CheckKind::Implication, alphas, s, o);
  if (!s.ok) return skipped(std::move(r), "geometry unavailable: " + s.failure);
  auto pre = per_point(s, o, [&](const GeometryAtPoint& geo) {
    return max_abs_diff(o.curvature(geo, alpha0).Ric, o.curvature(geo, -alpha0).Ric);
  });
  double pre_max = *std::max_element(pre.begin(), pre.end());
  if (!(pre_max <= o.tol)) return skipped(std::move(r), "precondition: Ric^(a0) != Ric^(-a0)");
  return reduce(std::move(r), s, per_point(s, o, [&](const GeometryAtPoint& geo) {
                  double worst = 0.0;
                  for (double a : alpha_grid) {
                    worst = std::max(worst, max_abs_diff(o.curvature(geo, a).Ric, o.curvature(geo, -a).Ric));
                    worst = std::max(worst, equiaffine_residual(geo, a, o));
                  }
                  return worst;
                }));
}

CheckResult check_two_dim_equivalence(const SampledGeometry& s, const CheckOptions& o) {
  if (s.dim != 2) throw std::invalid_argument("two_dim_equivalence: manifold dimension must be 2");
  CheckResult r = header("two_dim_equivalence", CheckKind::Implication, {1.0, -1.0}, s, o);
  if (!s.ok) return skipped(std::move(r), "geometry unavailable: " + s.failure);
  return count_disagreements(std::move(r), s, per_point(s, o, [&](const GeometryAtPoint& geo) {
                               return agreement_code(conjugate_residuals(geo, o), o);
                             }));
}

// ---------------------------------------------------------------------------
// Recurrent metrics

RecurrentOneForm recover_recurrent_one_form(const GeometryAtPoint& geo) {
  const int n = geo.dim();
  RecurrentOneForm out;
  out.omega = Tensor::lower(n, 1);
  out.domega = Tensor::lower(n, 2);
  const double scale = 1.0 / (n + 2.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += geo.ginv(j, k) * geo.Q(i, j, k);
    out.omega(i) = scale * s;
  }
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double dginv = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dginv -= geo.ginv(j, a) * geo.dg(m, a, b) * geo.ginv(b, k);
          s += dginv * geo.Q(i, j, k) + geo.ginv(j, k) * geo.dQ(m, i, j, k);
        }
      out.domega(m, i) = scale * s;
    }
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double model = out.omega(i) * geo.g(j, k) + out.omega(j) * geo.g(i, k) + out.omega(k) * geo.g(i, j);
        worst = std::max(worst, std::fabs(geo.Q(i, j, k) - model));
      }
  out.residual = worst;
  return out;
}

RecurrentOneForm recover_recurrent_one_form(const ManifoldSpec& spec, std::span<const double> p) {
  return recover_recurrent_one_form(geometry_at(spec, p));
}

CheckResult check_recurrent_metric(const SampledGeometry& s, const CheckOptions& o) {
  return pointwise_check(header("recurrent_metric", CheckKind::Property, {}, s, o), s, o,
                         [&](const GeometryAtPoint& geo) { return recover_recurrent_one_form(geo).residual; });
}

namespace {

double omega_closedness(const RecurrentOneForm& w) {
  const int n = w.omega.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::fabs(w.domega(i, j) - w.domega(j, i)));
  return worst;
}

double alternation_residual(const GeometryAtPoint& geo) {
  const int n = geo.dim();
  RecurrentOneForm w = recover_recurrent_one_form(geo);
  Tensor dq = levi_civita_dq(geo);
  Tensor dw = Tensor::lower(n, 2);  // (m,i) = (nabla0_m omega)_i
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      double v = w.domega(m, i);
      for (int l = 0; l < n; ++l) v -= geo.gamma0(l, m, i) * w.omega(l);
      dw(m, i) = v;
    }
  double worst = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int ww = 0; ww < n; ++ww) {
          double lhs = dq(x, y, z, ww) - dq(y, x, z, ww);
          double rhs = geo.g(ww, y) * dw(x, z) - geo.g(ww, x) * dw(y, z) + geo.g(y, z) * dw(x, ww) -
                       geo.g(x, z) * dw(y, ww);
          worst = std::max(worst, std::fabs(lhs - rhs));
        }
  return worst;
}

}  // namespace

RecurrentCheck check_recurrent_equivalence(const SampledGeometry& s, const CheckOptions& o) {
  RecurrentCheck out;
  out.equivalence = header("recurrent_equivalence", CheckKind::Implication, {1.0, -1.0}, s, o);
  out.alternation = header("recurrent_alternation_identity", CheckKind::Implication, {}, s, o);
  if (!s.ok) {
    out.equivalence = skipped(std::move(out.equivalence), "geometry unavailable: " + s.failure);
    out.alternation = skipped(std::move(out.alternation), "geometry unavailable: " + s.failure);
    return out;
  }
  auto pre = per_point(s, o, [&](const GeometryAtPoint& geo) {
    RecurrentOneForm w = recover_recurrent_one_form(geo);
    return std::max(w.residual, omega_closedness(w));
  });
  double pre_max = *std::max_element(pre.begin(), pre.end());
  if (!(pre_max <= o.tol)) {
    out.equivalence = skipped(std::move(out.equivalence), "precondition: not recurrent with a closed one-form");
    out.alternation = skipped(std::move(out.alternation), "precondition: not recurrent with a closed one-form");
    return out;
  }
  out.equivalence = count_disagreements(std::move(out.equivalence), s, per_point(s, o, [&](const GeometryAtPoint& geo) {
                                          return agreement_code(conjugate_residuals(geo, o), o);
                                        }));
  out.alternation = reduce(std::move(out.alternation), s, per_point(s, o, alternation_residual));
  return out;
}

// ---------------------------------------------------------------------------
// Suite

DiagnosticReport run_suite(const SampledGeometry& s, const SuiteOptions& opts) {
  const CheckOptions& o = opts.check;
  DiagnosticReport report;
  report.manifold = s.manifold;
  report.seed = s.seed;
  report.tolerance = o.tol;

  const std::vector<double> all = merged_alphas(opts.alphas);
  auto& c = report.checks;
  c.push_back(check_statistical(s, o));
  c.push_back(check_torsion_free(s, all, o));
  c.push_back(check_connection_duality(s, o));
  c.push_back(check_first_bianchi(s, all, o));
  c.push_back(check_curvature_pair_symmetry(s, o));
  c.push_back(check_dual_curvature_duality(s, o));
  c.push_back(check_summed_curvature_pair_symmetry(s, o));
  c.push_back(check_summed_ricci_symmetry(s, o));
  c.push_back(check_levi_civita_ricci_symmetry(s, o));
  c.push_back(check_ricci_alpha_closed_form(s, all, o));
  c.push_back(check_ricci_alpha_antisymmetry(s, all, o));
  c.push_back(check_ricci_difference_trace(s, o));

  c.push_back(check_conjugate_symmetry(s, o));
  c.push_back(check_conjugate_ricci_symmetry(s, o));
  c.push_back(check_constant_curvature(s, o));
  for (double a : opts.alphas) {
    EquiaffineCheck e = check_equiaffine(s, a, o);
    c.push_back(std::move(e.ricci_symmetry));
    c.push_back(std::move(e.tau_closedness));
  }
  c.push_back(check_recurrent_metric(s, o));

  c.push_back(check_equiaffine_criteria_agree(s, opts.alphas, o));
  c.push_back(check_constant_curvature_conjugate(s, o));
  c.push_back(check_ricci_symmetric_equiaffine(s, opts.alphas, o));
  if (opts.alpha0 != 0.0) c.push_back(check_alpha_pair_equiaffine(s, opts.alpha0, opts.alphas, o));
  if (s.dim == 2) {
    c.push_back(check_two_dim_equivalence(s, o));
  } else {
    c.push_back(skipped(header("two_dim_equivalence", CheckKind::Implication, {1.0, -1.0}, s, o),
                        "precondition: dimension is not 2"));
  }
  RecurrentCheck rc = check_recurrent_equivalence(s, o);
  c.push_back(std::move(rc.equivalence));
  c.push_back(std::move(rc.alternation));

  std::stable_sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return report;
}

DiagnosticReport run_suite(const ManifoldSpec& spec, const Sampling& sampling, const SuiteOptions& opts) {
  return run_suite(SampledGeometry::build(spec, sampling, opts.check.exec), opts);
}

}  // namespace igeo
