#include "igeo/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "igeo/expr.hpp"

namespace igeo {

namespace {

constexpr int kPrimes[kMaxDim] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(int base, std::uint64_t i) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

bool Domain::contains(std::span<const double> p) const {
  if (p.size() != axes.size()) return false;
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (!(p[i] >= axes[i].lo && p[i] <= axes[i].hi)) return false;
  return true;
}

std::vector<double> Domain::center() const {
  std::vector<double> c;
  c.reserve(axes.size());
  for (const auto& a : axes) c.push_back(0.5 * (a.lo + a.hi));
  return c;
}

bool Domain::nondegenerate() const {
  if (axes.empty()) return false;
  for (const auto& a : axes)
    if (!(std::isfinite(a.lo) && std::isfinite(a.hi) && a.lo < a.hi)) return false;
  return true;
}

std::vector<std::vector<double>> sample_points(const Domain& domain, const Sampling& sampling) {
  if (sampling.points < 1) throw std::invalid_argument("sampling: need at least one point");
  const int n = domain.dim();
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("sampling: dimension out of range");

  std::uint64_t state = sampling.seed;
  std::vector<double> shift(static_cast<std::size_t>(n));
  for (double& s : shift) s = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;

  std::vector<std::vector<double>> pts(static_cast<std::size_t>(sampling.points));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    auto& p = pts[k];
    p.resize(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
      double u = radical_inverse(kPrimes[d], k + 1) + shift[static_cast<std::size_t>(d)];
      u -= std::floor(u);
      const auto& ax = domain.axes[static_cast<std::size_t>(d)];
      p[static_cast<std::size_t>(d)] = ax.lo + u * (ax.hi - ax.lo);
    }
  }
  return pts;
}

}  // namespace igeo
