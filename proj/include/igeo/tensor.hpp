#pragma once

// Small dense multi-index arrays (dim <= 8, rank <= 4).
//
// Index positions are 0-based in this API. Manifold files and CLI flags use
// 1-based indices; conversion happens in the file reader/writer.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace igeo {

enum class Variance : unsigned char { Lower, Upper };

class TensorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major dense tensor; element (i0, i1, ...) lives at ((i0*n + i1)*n + ...).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, std::vector<Variance> variance);

  static Tensor scalar(double v);
  static Tensor lower(int dim, int rank) { return {dim, std::vector<Variance>(static_cast<std::size_t>(rank), Variance::Lower)}; }
  /// Identity (1,1)-tensor delta^i_j.
  static Tensor identity(int dim);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const noexcept { return variance_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  template <class... I>
  double& operator()(I... idx) noexcept {
    return data_[offset(idx...)];
  }
  template <class... I>
  double operator()(I... idx) const noexcept {
    return data_[offset(idx...)];
  }

  double at(std::span<const int> idx) const;
  double& at(std::span<const int> idx);

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(double s);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

 private:
  template <class... I>
  std::size_t offset(I... idx) const noexcept {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_;
};

/// A permutation of tensor slots: perm[k] is the source slot for slot k.
using Permutation = std::vector<int>;

/// {identity, swap(i, j)} on a tensor of the given rank.
std::vector<Permutation> swap_group(int rank, int i, int j);
/// All permutations of `slots` (other slots fixed), identity included.
std::vector<Permutation> symmetric_group(int rank, std::vector<int> slots);

/// Einstein contraction of one upper and one lower slot.
Tensor contract(const Tensor& t, int i, int j);

/// Flips the variance of slot i by contracting with `metric`: pass g (all
/// lower) to lower an upper slot, g^{-1} (all upper) to raise a lower slot.
Tensor raise_lower(const Tensor& t, int i, const Tensor& metric);

/// Metric trace over two lower slots: contraction with g^{-1}.
Tensor trace_g(const Tensor& t, int i, int j, const Tensor& ginv);

/// Max-abs of t minus its average over the permutation set.
double sym_residual(const Tensor& t, const std::vector<Permutation>& perms);

/// Max-abs componentwise difference (shapes must agree).
double max_abs_diff(const Tensor& a, const Tensor& b);
double max_abs(const Tensor& t);

/// Apply a slot permutation: out(k...) = t(k[perm[0]], ...).
Tensor permute(const Tensor& t, const Permutation& perm);

}  // namespace igeo
