#include "qcx/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qcx/errors.hpp"

namespace qcx {

GridSpec GridSpec::disc(int n_r, int n_theta, double r_max) {
  GridSpec g;
  g.region = Region::disc;
  g.n_r = n_r;
  g.n_theta = n_theta;
  g.r_lo = 0.0;
  g.r_hi = r_max;
  return g;
}

GridSpec GridSpec::annulus(int n_r, int n_theta, double r_lo, double r_hi) {
  GridSpec g;
  g.region = Region::exterior_annulus;
  g.n_r = n_r;
  g.n_theta = n_theta;
  g.r_lo = r_lo;
  g.r_hi = r_hi;
  return g;
}

GridSpec GridSpec::exterior(int n_r, int n_theta, double r_lo, double r_hi) {
  GridSpec g = annulus(n_r, n_theta, r_lo, r_hi);
  g.region = Region::sphere;
  return g;
}

void GridSpec::validate() const {
  if (n_r < 1 || n_theta < 1) throw PreconditionError("grid needs at least one radius and one angle");
  if (static_cast<long long>(n_r) * n_theta > kMaxPoints) throw PreconditionError("grid exceeds 2^24 points");
  if (!(r_lo >= 0.0) || !(r_hi >= r_lo)) throw PreconditionError("grid radius bounds are not ordered");
  if (region == Region::disc && r_hi >= 1.0) {
    throw PreconditionError("disc grid must stay inside the unit disc");
  }
  if (region != Region::disc && r_lo <= 1.0) throw PreconditionError("exterior grid must start outside |z| = 1");
  for (const Exclusion& e : exclusions) {
    if (!(e.radius > 0.0)) throw PreconditionError("exclusion radius must be positive");
  }
}

std::vector<double> GridSpec::radii() const {
  std::vector<double> r(static_cast<std::size_t>(n_r));
  for (int j = 0; j < n_r; ++j) {
    if (r_lo == 0.0) {
      r[static_cast<std::size_t>(j)] = r_hi * (j + 1) / n_r;
    } else if (n_r == 1) {
      r[static_cast<std::size_t>(j)] = r_lo;
    } else {
      r[static_cast<std::size_t>(j)] = r_lo + (r_hi - r_lo) * j / (n_r - 1);
    }
  }
  return r;
}

bool GridSpec::excluded(Complex z) const {
  for (const Exclusion& e : exclusions) {
    if (std::abs(z - e.center) < e.radius) return true;
  }
  return false;
}

std::vector<ExtComplex> GridSpec::points() const {
  validate();
  std::vector<ExtComplex> pts;
  pts.reserve(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta) + 1);
  for (double r : radii()) {
    for (int k = 0; k < n_theta; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / n_theta;
      const Complex z = std::polar(r, theta);
      if (!excluded(z)) pts.emplace_back(z);
    }
  }
  if (region == Region::sphere) pts.push_back(ExtComplex::infinity());
  return pts;
}

bool lexicographic_less(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_finite() && b.is_infinite();
  const Complex x = a.value();
  const Complex y = b.value();
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

PointMax max_over(const std::vector<ExtComplex>& points, const std::vector<double>& values) {
  if (points.empty() || points.size() != values.size()) throw PreconditionError("max over an empty grid");
  PointMax best{-1.0, points[0], 0};
  bool first = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = std::isnan(values[i]) ? std::numeric_limits<double>::infinity() : values[i];
    if (first || v > best.value || (v == best.value && lexicographic_less(points[i], best.point))) {
      best = {v, points[i], i};
      first = false;
    }
  }
  return best;
}

}  // namespace qcx
