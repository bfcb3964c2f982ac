#pragma once

#include <vector>

#include "qcx/complex.hpp"

namespace qcx {

/// Disc {|z - center| < radius} removed from a sampling grid.
struct Exclusion {
  Complex center;
  double radius;
};

enum class Region { disc, exterior_annulus, sphere };

/// Polar sampling grid. `sphere` is an exterior annulus plus the point at
/// infinity.
///
/// Radii: with r_lo == 0 they are r_hi * j / n_r for j = 1..n_r (the origin
/// is never sampled); otherwise n_r evenly spaced values covering
/// [r_lo, r_hi] inclusive. Angles are 2*pi*k / n_theta.
struct GridSpec {
  Region region = Region::disc;
  int n_r = 64;
  int n_theta = 64;
  double r_lo = 0.0;
  double r_hi = 0.999;
  std::vector<Exclusion> exclusions;

  static constexpr long long kMaxPoints = 1LL << 24;

  static GridSpec disc(int n_r, int n_theta, double r_max = 0.999);
  static GridSpec annulus(int n_r, int n_theta, double r_lo, double r_hi);
  static GridSpec exterior(int n_r, int n_theta, double r_lo = 1.001, double r_hi = 10.0);

  /// Throws PreconditionError on unordered bounds, empty or oversized grids.
  void validate() const;

  std::vector<double> radii() const;
  bool excluded(Complex z) const;

  /// Non-excluded sample points in (radius, angle) order.
  std::vector<ExtComplex> points() const;
};

/// Deterministic order used to break ties in max reductions.
bool lexicographic_less(const ExtComplex& a, const ExtComplex& b);

struct PointMax {
  double value = 0.0;
  ExtComplex point;
  std::size_t index = 0;
};

/// Largest value with ties broken by lexicographic point order. NaN counts
/// as +infinity. Throws PreconditionError on empty input.
PointMax max_over(const std::vector<ExtComplex>& points, const std::vector<double>& values);

}  // namespace qcx
