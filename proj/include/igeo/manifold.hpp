#pragma once

// Statistical manifolds on a single coordinate chart, given by a metric g and
// a totally symmetric cubic form Q, and the pointwise connection data derived
// from them.
//
// Connection convention: the alpha-connection has Christoffel symbols
//   Gamma^(alpha)^k_ij = Gamma0^k_ij - (alpha/2) K^k_ij,   K^k_ij = g^kl Q_lij,
// so alpha = +1 is the primal connection (with nabla g = Q), alpha = -1 its
// dual, and alpha = 0 the Levi-Civita connection of g.

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "igeo/expr.hpp"
#include "igeo/sampling.hpp"
#include "igeo/tensor.hpp"

namespace igeo {

/// g(p) failed the Cholesky test (not positive definite or near-singular).
class SpdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Manifold file syntax/semantic error with its 1-based line number.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ManifoldSpec {
 public:
  ManifoldSpec() = default;
  ManifoldSpec(std::string name, Domain domain);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return domain_.dim(); }
  const Domain& domain() const noexcept { return domain_; }

  /// Entries are addressed with 0-based indices in any order; storage keeps
  /// one field per unordered index set, so symmetry holds structurally.
  const std::optional<ScalarField>& metric(int i, int j) const;
  const std::optional<ScalarField>& cubic(int i, int j, int k) const;
  void set_metric(int i, int j, ScalarField f);
  void set_cubic(int i, int j, int k, ScalarField f);
  void clear_cubic();

 private:
  std::size_t metric_slot(int i, int j) const;
  std::size_t cubic_slot(int i, int j, int k) const;

  std::string name_;
  Domain domain_;
  std::vector<std::optional<ScalarField>> metric_;  // n*n, canonical i <= j
  std::vector<std::optional<ScalarField>> cubic_;   // n*n*n, canonical i <= j <= k
};

/// Pointwise geometry package. Index layout (all 0-based):
///   g(i,j), ginv(i,j), dg(m,i,j) = d_m g_ij, d2g(m,l,i,j) = d_m d_l g_ij,
///   Q(i,j,k), dQ(m,i,j,k) = d_m Q_ijk,
///   gamma0(k,i,j) = Gamma0^k_ij, dgamma0(m,k,i,j) = d_m Gamma0^k_ij,
///   K(k,i,j) = K^k_ij, dK(m,k,i,j) = d_m K^k_ij.
struct GeometryAtPoint {
  std::vector<double> p;
  Tensor g, ginv, dg, d2g;
  Tensor Q, dQ;
  Tensor gamma0, dgamma0;
  Tensor K, dK;

  int dim() const noexcept { return g.dim(); }
};

struct PointValidation {
  std::vector<double> point;
  bool ok = true;
  std::string message;
};

struct ValidationReport {
  bool domain_ok = true;
  std::string domain_message;
  std::vector<PointValidation> points;

  bool ok() const;
  std::size_t failures() const;
};

/// Checks the domain box and, at low-discrepancy sample points, that every
/// entry evaluates and g is positive definite. Never throws for per-point
/// failures.
ValidationReport validate(const ManifoldSpec& spec, int sample_count, std::uint64_t seed);

/// Cholesky-based SPD test: every pivot positive and the smallest at least
/// 1e-10 times the largest.
bool is_spd(const Tensor& g);

/// Throws SpdError or DomainError.
GeometryAtPoint geometry_at(const ManifoldSpec& spec, std::span<const double> p);

/// Gamma^(alpha)(k,i,j).
Tensor christoffel_alpha(const GeometryAtPoint& geo, double alpha);
/// d_m Gamma^(alpha)^k_ij laid out (m,k,i,j).
Tensor christoffel_alpha_derivative(const GeometryAtPoint& geo, double alpha);

/// (nabla^(alpha) g)_ijk = d_i g_jk - Gamma^l_ij g_lk - Gamma^l_ik g_jl.
Tensor nabla_g(const GeometryAtPoint& geo, double alpha);

/// g_kl K^l_ij laid out (k,i,j).
Tensor lowered_difference(const GeometryAtPoint& geo);

// File format I/O (indices 1-based in the file).
ManifoldSpec read_manifold(std::istream& in);
ManifoldSpec read_manifold_file(const std::string& path);
ManifoldSpec parse_manifold(std::string_view text);
void write_manifold(const ManifoldSpec& spec, std::ostream& out);
std::string to_manifold_text(const ManifoldSpec& spec);

}  // namespace igeo
