#pragma once

#include <utility>
#include <vector>

#include "qcx/complex.hpp"
#include "qcx/mapexpr.hpp"

namespace qcx {

/// Truncated Laurent series sum_k c_k t^k about some center, where t = z - c
/// (or t = 1/z at infinity). Coefficients are stored for exponents in
/// [valuation, precision); everything at or beyond `precision` is unknown.
/// A series with no stored coefficient is zero to the stated precision.
class LaurentSeries {
 public:
  static constexpr int kExact = 1 << 20;

  LaurentSeries() = default;
  LaurentSeries(int valuation, int precision, std::vector<Complex> coeffs);

  static LaurentSeries zero(int precision = kExact);

  int valuation() const { return valuation_; }
  int precision() const { return precision_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Coefficient of t^e; zero below the valuation. Throws EvalError when e
  /// is at or beyond the known precision.
  Complex coeff(int e) const;

 private:
  int valuation_ = kExact;
  int precision_ = kExact;
  std::vector<Complex> coeffs_;
};

/// Laurent expansion of m about `center`, keeping `terms` coefficients past
/// the valuation. Leading coefficients that cancel to 1e-13 of their inputs
/// are treated as exact zeros.
LaurentSeries expand(const MapExpr& m, const ExtComplex& center, int terms);

/// Taylor coefficients c_0..c_J of m at a regular point.
struct SeriesJet {
  Complex center;
  std::vector<Complex> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex operator[](int k) const { return coeffs.at(static_cast<std::size_t>(k)); }
};

/// Throws PreconditionError if `order` < 2, SingularityError at a pole.
SeriesJet taylor_jet(const MapExpr& m, int order, Complex center = Complex(0.0));

/// m and m' for a map regular at 0, summed from an order-40 jet on |z|
/// below a quarter of the estimated convergence radius (capped at 1) and
/// evaluated from the tree elsewhere. Keeps relative accuracy for maps
/// that vanish to high order at 0, where the tree cancels.
class SmallArgumentSeries {
 public:
  static constexpr int kOrder = 40;

  explicit SmallArgumentSeries(const MapExpr& m);

  ExtComplex value(Complex z) const;
  std::pair<ExtComplex, ExtComplex> value_and_derivative(Complex z) const;
  double switch_radius() const { return radius_; }

 private:
  MapExpr m_;
  MapExpr dm_;
  SeriesJet jet_;
  double radius_ = 0.0;
};

/// Coefficient of (z-center)^-1. Informational; zero at regular points.
Complex residue(const MapExpr& m, Complex center);

/// Limit of m at infinity via the chart w = 1/z.
ExtComplex value_at_infinity(const MapExpr& m);

}  // namespace qcx
