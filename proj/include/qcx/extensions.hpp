#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcx/complex.hpp"
#include "qcx/grid.hpp"
#include "qcx/mapexpr.hpp"

namespace qcx {

/// One side of a piecewise sphere map. Holomorphic branches keep their
/// expression tree; the others are closed forms in z, conj(z) and |z|.
struct Branch {
  std::string formula;
  std::optional<MapExpr> expr;
  std::function<ExtComplex(Complex)> fn;

  bool holomorphic() const { return expr.has_value(); }
  ExtComplex operator()(Complex z) const { return fn(z); }

  static Branch analytic(const MapExpr& m);
  static Branch closed_form(std::string formula, std::function<ExtComplex(Complex)> fn);
};

enum class SeamOwner { inner, outer };

struct SpecialPoint {
  ExtComplex source;
  ExtComplex image;
};

/// Homeomorphism candidate of the sphere: `inner` on |z| < 1, `outer` on
/// |z| > 1, the unit circle going to `seam_owner`. The point at infinity
/// is evaluated through the declared special points.
struct ExtendedMap {
  std::string builder;
  Branch inner;
  Branch outer;
  SeamOwner seam_owner = SeamOwner::outer;
  std::vector<std::pair<std::string, Complex>> params;
  std::vector<SpecialPoint> special_points;
  /// Neighbourhoods of finite poles, kept out of dilatation sampling.
  std::vector<Exclusion> exclusions;
  std::optional<double> claimed_k;
  std::vector<std::string> warnings;

  ExtComplex operator()(const ExtComplex& z) const;
  /// Image of infinity; throws PreconditionError when undeclared.
  ExtComplex at_infinity() const;
};

/// Largest chordal distance between each declared image and the map's
/// value at the source. Infinity is probed on a circle of radius 1e7.
double special_point_error(const ExtendedMap& F);

/// Piecewise radial stretch psi(r) = M r - (M - 1) on [1, inf).
struct RadialProfile {
  double M = 2.0;

  double psi(double r) const { return M * r - (M - 1.0); }
  double dpsi(double) const { return M; }
  /// (M^2 - 1) / (M^2 + 1).
  double claimed_bound() const { return (M * M - 1.0) / (M * M + 1.0); }
  /// Throws PreconditionError unless M > 1 and finite.
  void validate() const;
};

/// Outer branch z / (1 - a2 z + |z|^2 phi(1/conj z)). `poles` lists the
/// poles of f on the closed disc; each is checked and becomes a special
/// point with image infinity.
ExtendedMap ext_huang_owa(const MapExpr& f, std::optional<double> claimed_k = std::nullopt,
                          const std::vector<Complex>& poles = {});

/// Outer branch z f(1/conj z) / (z - (|z|^2 - 1) f(1/conj z)); f must have
/// a2 = 0.
ExtendedMap ext_thm2(const MapExpr& f, std::optional<double> claimed_k = std::nullopt,
                     const std::vector<Complex>& poles = {});

/// Inner z / (1 - a2 z), outer z (|z|^2 - a2 z) / (|z| - a2 z)^2.
ExtendedMap ext_mobius_convex(Complex a2);

/// Unimodular coefficient: inner z / (1 - a2 z) with |a2| = 1.
/// Pole inside: inner p z / (p - z) with 0 < p < 1.
/// Outer branches replace r by psi(r) in polar form.
struct PsiStyle {
  enum class Kind { unimodular_a2, vp_pole } kind = Kind::vp_pole;
  Complex value{0.5, 0.0};

  static PsiStyle unimodular(Complex a2) { return {Kind::unimodular_a2, a2}; }
  static PsiStyle pole(double p) { return {Kind::vp_pole, Complex(p, 0.0)}; }
};
ExtendedMap ext_radial_psi(const PsiStyle& style, const RadialProfile& profile);

enum class ExteriorFormula { thm4, cor1, krzyz, krzyz_decay };
enum class ExteriorMode { chain, formula };

/// Outer branch g on |zeta| > 1 and the selected formula on the closed disc.
/// krzyz requires w(0) = 0 in chain mode and only warns in formula mode.
ExtendedMap ext_exterior(const MapExpr& g, ExteriorFormula which, std::optional<double> claimed_k = std::nullopt,
                         ExteriorMode mode = ExteriorMode::chain);

/// Outer branch f(1/conj z) + (z - 1/conj z) / lambda.
ExtendedMap ext_brown(const MapExpr& f, Complex brown_lambda, std::optional<double> claimed_k = std::nullopt);

/// Outer branch f(1/conj z) - z + 1/conj z.
ExtendedMap ext_thm5(const MapExpr& f, std::optional<double> claimed_k = std::nullopt);

std::string_view exterior_formula_id(ExteriorFormula which);

}  // namespace qcx
