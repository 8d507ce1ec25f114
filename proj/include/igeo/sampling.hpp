#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace igeo {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Closed coordinate box.
struct Domain {
  std::vector<Interval> axes;

  int dim() const noexcept { return static_cast<int>(axes.size()); }
  bool contains(std::span<const double> p) const;
  std::vector<double> center() const;
  /// Every axis has lo < hi (finite).
  bool nondegenerate() const;
};

struct Sampling {
  int points = 200;
  std::uint64_t seed = 0;
};

/// Halton sequence with a seeded Cranley-Patterson rotation, mapped into the
/// box. Deterministic for a given (domain, sampling).
std::vector<std::vector<double>> sample_points(const Domain& domain, const Sampling& sampling);

}  // namespace igeo
