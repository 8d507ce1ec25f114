#include "igeo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "igeo/expr.hpp"

namespace igeo {

namespace {

std::size_t power(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Decode a flat offset into a multi-index.
void decode(std::size_t off, int dim, std::vector<int>& idx) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    idx[k] = static_cast<int>(off % static_cast<std::size_t>(dim));
    off /= static_cast<std::size_t>(dim);
  }
}

std::size_t encode(std::span<const int> idx, int dim) {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return off;
}

void check_slot(const Tensor& t, int i) {
  if (i < 0 || i >= t.rank()) throw TensorError("tensor slot index out of range");
}

void check_same_shape(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim() || a.variance() != b.variance()) throw TensorError("tensor shape mismatch");
}

}  // namespace

Tensor::Tensor(int dim, std::vector<Variance> variance) : dim_(dim), variance_(std::move(variance)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw TensorError("tensor dimension out of range");
  if (variance_.size() > 4) throw TensorError("tensor rank above 4");
  data_.assign(power(dim_, rank()), 0.0);
}

Tensor Tensor::scalar(double v) {
  Tensor t(1, {});
  t.data_[0] = v;
  return t;
}

Tensor Tensor::identity(int dim) {
  Tensor t(dim, {Variance::Upper, Variance::Lower});
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

double Tensor::at(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw TensorError("index arity mismatch");
  return data_[encode(idx, dim_)];
}

double& Tensor::at(std::span<const int> idx) {
  if (static_cast<int>(idx.size()) != rank()) throw TensorError("index arity mismatch");
  return data_[encode(idx, dim_)];
}

Tensor& Tensor::operator+=(const Tensor& o) {
  check_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  check_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

std::vector<Permutation> swap_group(int rank, int i, int j) {
  Permutation id(static_cast<std::size_t>(rank));
  std::iota(id.begin(), id.end(), 0);
  Permutation sw = id;
  std::swap(sw[static_cast<std::size_t>(i)], sw[static_cast<std::size_t>(j)]);
  return {id, sw};
}

std::vector<Permutation> symmetric_group(int rank, std::vector<int> slots) {
  std::sort(slots.begin(), slots.end());
  std::vector<Permutation> out;
  std::vector<int> order = slots;
  do {
    Permutation p(static_cast<std::size_t>(rank));
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t k = 0; k < slots.size(); ++k) p[static_cast<std::size_t>(slots[k])] = order[k];
    out.push_back(std::move(p));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

Tensor contract(const Tensor& t, int i, int j) {
  check_slot(t, i);
  check_slot(t, j);
  if (i == j) throw TensorError("contract: slots must be distinct");
  if (t.variance()[static_cast<std::size_t>(i)] == t.variance()[static_cast<std::size_t>(j)])
    throw TensorError("contract: variance mismatch (need one upper and one lower slot)");

  std::vector<Variance> var;
  for (int k = 0; k < t.rank(); ++k)
    if (k != i && k != j) var.push_back(t.variance()[static_cast<std::size_t>(k)]);
  Tensor out = var.empty() ? Tensor::scalar(0.0) : Tensor(t.dim(), var);

  std::vector<int> oidx(var.size());
  std::vector<int> tidx(static_cast<std::size_t>(t.rank()));
  auto odata = out.data();
  for (std::size_t off = 0; off < odata.size(); ++off) {
    decode(off, t.dim(), oidx);
    double sum = 0.0;
    for (int s = 0; s < t.dim(); ++s) {
      std::size_t q = 0;
      for (int k = 0; k < t.rank(); ++k) tidx[static_cast<std::size_t>(k)] = (k == i || k == j) ? s : oidx[q++];
      sum += t.at(tidx);
    }
    odata[off] = sum;
  }
  return out;
}

Tensor raise_lower(const Tensor& t, int i, const Tensor& metric) {
  check_slot(t, i);
  if (metric.rank() != 2 || metric.dim() != t.dim()) throw TensorError("raise_lower: metric must be square rank-2 of matching dim");
  Variance from = t.variance()[static_cast<std::size_t>(i)];
  Variance need = from == Variance::Upper ? Variance::Lower : Variance::Upper;
  if (metric.variance()[0] != need || metric.variance()[1] != need)
    throw TensorError("raise_lower: metric variance does not flip the slot");

  std::vector<Variance> var = t.variance();
  var[static_cast<std::size_t>(i)] = need;
  Tensor out(t.dim(), var);
  std::vector<int> idx(static_cast<std::size_t>(t.rank()));
  auto odata = out.data();
  for (std::size_t off = 0; off < odata.size(); ++off) {
    decode(off, t.dim(), idx);
    int a = idx[static_cast<std::size_t>(i)];
    double sum = 0.0;
    for (int b = 0; b < t.dim(); ++b) {
      idx[static_cast<std::size_t>(i)] = b;
      sum += metric(a, b) * t.at(idx);
    }
    odata[off] = sum;
  }
  return out;
}

Tensor trace_g(const Tensor& t, int i, int j, const Tensor& ginv) {
  check_slot(t, i);
  check_slot(t, j);
  if (t.variance()[static_cast<std::size_t>(i)] != Variance::Lower || t.variance()[static_cast<std::size_t>(j)] != Variance::Lower)
    throw TensorError("trace_g: both slots must be lower");
  return contract(raise_lower(t, i, ginv), i, j);
}

Tensor permute(const Tensor& t, const Permutation& perm) {
  if (static_cast<int>(perm.size()) != t.rank()) throw TensorError("permute: arity mismatch");
  Tensor out(t.dim(), t.variance());
  std::vector<int> idx(perm.size());
  std::vector<int> src(perm.size());
  auto odata = out.data();
  for (std::size_t off = 0; off < odata.size(); ++off) {
    decode(off, t.dim(), idx);
    for (std::size_t k = 0; k < perm.size(); ++k) src[k] = idx[static_cast<std::size_t>(perm[k])];
    odata[off] = t.at(src);
  }
  return out;
}

double sym_residual(const Tensor& t, const std::vector<Permutation>& perms) {
  if (perms.empty()) return 0.0;
  for (const auto& p : perms) {
    if (static_cast<int>(p.size()) != t.rank()) throw TensorError("sym_residual: arity mismatch");
    for (std::size_t k = 0; k < p.size(); ++k)
      if (t.variance()[k] != t.variance()[static_cast<std::size_t>(p[k])])
        throw TensorError("sym_residual: permuted slots must share variance");
  }
  Tensor avg(t.dim(), t.variance());
  for (const auto& p : perms) avg += permute(t, p);
  avg *= 1.0 / static_cast<double>(perms.size());
  return max_abs_diff(t, avg);
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) throw TensorError("max_abs_diff: shape mismatch");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) {
    double d = std::fabs(da[k] - db[k]);
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double v : t.data()) {
    double d = std::fabs(v);
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

}  // namespace igeo
