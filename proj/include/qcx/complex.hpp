#pragma once

#include <cmath>
#include <complex>
#include <string>

namespace qcx {

using Complex = std::complex<double>;

/// Denominators with |den| < kPoleTolerance * |num| evaluate to infinity.
inline constexpr double kPoleTolerance = 1e-12;

/// A point of the extended plane C u {inf}.
class ExtComplex {
 public:
  constexpr ExtComplex() = default;
  constexpr ExtComplex(Complex v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  constexpr ExtComplex(double re) : v_(re, 0.0) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtComplex infinity() {
    ExtComplex p;
    p.inf_ = true;
    return p;
  }

  constexpr bool is_infinite() const { return inf_; }
  constexpr bool is_finite() const { return !inf_; }

  /// Finite value; throws EvalError for the point at infinity.
  Complex value() const;

  /// Finite value, or throws SingularityError naming `where`.
  Complex finite_or_throw(const char* where) const;

  friend constexpr bool operator==(const ExtComplex& a, const ExtComplex& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.v_ == b.v_;
  }

 private:
  Complex v_{};
  bool inf_ = false;
};

ExtComplex operator-(const ExtComplex& a);
ExtComplex operator+(const ExtComplex& a, const ExtComplex& b);
ExtComplex operator-(const ExtComplex& a, const ExtComplex& b);
ExtComplex operator*(const ExtComplex& a, const ExtComplex& b);
ExtComplex operator/(const ExtComplex& a, const ExtComplex& b);
ExtComplex pow(const ExtComplex& a, int n);

/// Quotient with the pole rule: |den| < kPoleTolerance*|num| gives infinity.
ExtComplex divide(Complex num, Complex den);

/// |a-b| / max(1,|a|,|b|); zero when both are infinite, 1/max(1,|a|) when
/// exactly one is.
double scaled_gap(const ExtComplex& a, const ExtComplex& b);

/// Chordal distance on the Riemann sphere (diameter 2).
double chordal_distance(const ExtComplex& a, const ExtComplex& b);

/// Shortest round-trip decimal form of a double.
std::string format_real(double v);

/// "inf" or "re+imi" with 17 significant digits, for diagnostics.
std::string to_string(const ExtComplex& p);

}  // namespace qcx
