#pragma once

// Residual-based checks over sampled points. Each check reduces a per-point
// residual to its maximum and compares it against a tolerance.
//
// Check kinds:
//   identity    - holds on every statistical manifold; a failure is a bug.
//   property    - classifies the manifold (may legitimately fail).
//   implication - asserts a consequence when its hypothesis holds on the
//                 sample; skips otherwise.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "igeo/curvature.hpp"
#include "igeo/manifold.hpp"
#include "igeo/parallel.hpp"

namespace igeo {

enum class Verdict { Pass, Fail, Skip };
enum class CheckKind { Identity, Property, Implication };

std::string_view to_string(Verdict v);
std::string_view to_string(CheckKind k);

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::Identity;
  std::vector<double> alpha;
  int points = 0;
  double max_residual = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::Skip;
  std::vector<double> worst_point;
  std::string note;
};

struct DiagnosticReport {
  std::string manifold;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<CheckResult> checks;

  /// True when an identity or implication check failed.
  bool has_failure() const;
  const CheckResult* find(std::string_view name) const;
};

void write_json(const DiagnosticReport& report, std::ostream& out);
void write_text(const DiagnosticReport& report, std::ostream& out);

struct CheckOptions {
  double tol = 1e-8;
  Execution exec = Execution::Parallel;
  CurvatureFn curvature = riemann;
  /// Points whose two compared residuals fall within [tol/band, tol*band]
  /// are excluded from verdict-agreement counts.
  double margin_band = 10.0;
};

/// Geometry evaluated once per sample point and shared by every check.
struct SampledGeometry {
  std::string manifold;
  int dim = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> points;
  std::vector<GeometryAtPoint> geometry;
  bool ok = true;
  std::string failure;

  static SampledGeometry build(const ManifoldSpec& spec, const Sampling& sampling,
                               Execution exec = Execution::Parallel);
  static SampledGeometry from_points(const ManifoldSpec& spec, std::vector<std::vector<double>> points,
                                     Execution exec = Execution::Parallel);
};

// Unconditional identities -------------------------------------------------

CheckResult check_statistical(const SampledGeometry& s, const CheckOptions& o = {});
CheckResult check_torsion_free(const SampledGeometry& s, const std::vector<double>& alphas, const CheckOptions& o = {});
CheckResult check_connection_duality(const SampledGeometry& s, const CheckOptions& o = {});
CheckResult check_first_bianchi(const SampledGeometry& s, const std::vector<double>& alphas, const CheckOptions& o = {});
/// g(R(X,Y)Z,W) + g(R(Y,X)W,Z) = g(R(Z,W)X,Y) + g(R(W,Z)Y,X) for the primal connection.
CheckResult check_curvature_pair_symmetry(const SampledGeometry& s, const CheckOptions& o = {});
/// g(R(X,Y)Z,W) + g(R*(X,Y)W,Z) = 0.
CheckResult check_dual_curvature_duality(const SampledGeometry& s, const CheckOptions& o = {});
/// (R + R*) lowered is symmetric under the pair swap (XY) <-> (ZW).
CheckResult check_summed_curvature_pair_symmetry(const SampledGeometry& s, const CheckOptions& o = {});
/// Ric + Ric* is symmetric.
CheckResult check_summed_ricci_symmetry(const SampledGeometry& s, const CheckOptions& o = {});
CheckResult check_levi_civita_ricci_symmetry(const SampledGeometry& s, const CheckOptions& o = {});
CheckResult check_ricci_alpha_closed_form(const SampledGeometry& s, const std::vector<double>& alphas,
                                          const CheckOptions& o = {});
CheckResult check_ricci_alpha_antisymmetry(const SampledGeometry& s, const std::vector<double>& alphas,
                                           const CheckOptions& o = {});
/// Ric* - Ric = tr_g{(X,W) -> (nabla0_X Q)(Y,Z,W) - (nabla0_Y Q)(X,Z,W)}.
CheckResult check_ricci_difference_trace(const SampledGeometry& s, const CheckOptions& o = {});

// Properties ------------------------------------------------------------------

/// R = R* componentwise.
CheckResult check_conjugate_symmetry(const SampledGeometry& s, const CheckOptions& o = {});
/// Ric = Ric*.
CheckResult check_conjugate_ricci_symmetry(const SampledGeometry& s, const CheckOptions& o = {});
/// Minimax constant-curvature fit of the primal connection; the note holds K.
CheckResult check_constant_curvature(const SampledGeometry& s, const CheckOptions& o = {});

struct EquiaffineCheck {
  CheckResult ricci_symmetry;  // sym_residual(Ric^(alpha))
  CheckResult tau_closedness;  // max |d_i tau_j - d_j tau_i|
  Verdict verdict = Verdict::Skip;
};
EquiaffineCheck check_equiaffine(const SampledGeometry& s, double alpha, const CheckOptions& o = {});

// Implications -----------------------------------------------------------------

/// The two equiaffinity criteria give the same verdict at every alpha;
/// residual = number of disagreeing alphas.
CheckResult check_equiaffine_criteria_agree(const SampledGeometry& s, const std::vector<double>& alphas,
                                            const CheckOptions& o = {});
/// Constant curvature on the sample implies R = R* and Ric = Ric*.
CheckResult check_constant_curvature_conjugate(const SampledGeometry& s, const CheckOptions& o = {});
/// Ric = Ric* implies every alpha-connection in the grid is equiaffine.
CheckResult check_ricci_symmetric_equiaffine(const SampledGeometry& s, const std::vector<double>& alpha_grid,
                                             const CheckOptions& o = {});
/// Ric^(a0) = Ric^(-a0) for some a0 != 0 implies Ric^(a) = Ric^(-a) and
/// equiaffinity for every a in the grid. Throws std::invalid_argument for a0 = 0.
CheckResult check_alpha_pair_equiaffine(const SampledGeometry& s, double alpha0, const std::vector<double>& alpha_grid,
                                        const CheckOptions& o = {});
/// In dimension 2, pointwise R = R* iff Ric = Ric*; residual = number of
/// points where the verdicts disagree. Throws std::invalid_argument if dim != 2.
CheckResult check_two_dim_equivalence(const SampledGeometry& s, const CheckOptions& o = {});

// Recurrent metrics -------------------------------------------------------------

struct RecurrentOneForm {
  Tensor omega;   // omega_i
  Tensor domega;  // (m,i) = d_m omega_i
  double residual = 0.0;
};

/// omega_i = g^jk Q_ijk / (n + 2); residual of Q against the recurrent form.
RecurrentOneForm recover_recurrent_one_form(const GeometryAtPoint& geo);
RecurrentOneForm recover_recurrent_one_form(const ManifoldSpec& spec, std::span<const double> p);

/// Recovery residual over the sample.
CheckResult check_recurrent_metric(const SampledGeometry& s, const CheckOptions& o = {});

struct RecurrentCheck {
  CheckResult equivalence;  // disagreeing points between R = R* and Ric = Ric*
  CheckResult alternation;  // residual of the alternated nabla0 Q identity
};
/// For a recurrent metric with closed one-form: conjugate symmetry and
/// conjugate Ricci-symmetry verdicts agree pointwise, and the alternation of
/// nabla0 Q is expressed through nabla0 omega. Skips when not recurrent or
/// omega is not closed.
RecurrentCheck check_recurrent_equivalence(const SampledGeometry& s, const CheckOptions& o = {});

// Suite --------------------------------------------------------------------------

struct SuiteOptions {
  CheckOptions check;
  std::vector<double> alphas{-1.0, 0.0, 1.0};
  double alpha0 = 0.7;
};

/// Every check above, ordered by name.
DiagnosticReport run_suite(const ManifoldSpec& spec, const Sampling& sampling, const SuiteOptions& opts = {});
DiagnosticReport run_suite(const SampledGeometry& s, const SuiteOptions& opts = {});

}  // namespace igeo
