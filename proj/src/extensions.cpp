#include "qcx/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcx/classifiers.hpp"
#include "qcx/errors.hpp"
#include "qcx/series.hpp"

namespace qcx {

namespace {

constexpr double kPoleRadius = 0.02;
constexpr double kSpecialTolerance = 1e-6;
constexpr double kProbeRadius = 1e7;

MapExpr mobius_inner(Complex a2) {
  const MapExpr z;
  return z / (MapExpr::number(1.0) - MapExpr::constant(a2) * z);
}

// Quotient without the relative pole rule, for intermediate terms whose
// size is far from that of the final value.
ExtComplex plain_div(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) throw EvalError("indeterminate inf / inf");
  if (b.is_infinite()) return Complex(0.0);
  if (a.is_infinite()) return a;
  if (b.value() == Complex(0.0)) {
    if (a.value() == Complex(0.0)) throw EvalError("indeterminate 0 / 0");
    return ExtComplex::infinity();
  }
  return a.value() / b.value();
}

void add_pole(ExtendedMap& F, Complex p) {
  F.special_points.push_back({p, ExtComplex::infinity()});
  F.exclusions.push_back({p, kPoleRadius});
}

void add_declared_poles(ExtendedMap& F, const std::vector<Complex>& poles) {
  for (Complex p : poles) {
    if (std::abs(p) > 1.0 + 1e-12) throw PreconditionError("declared pole lies outside the closed disc");
    if (chordal_distance(F(p), ExtComplex::infinity()) > kSpecialTolerance) {
      throw PreconditionError("declared pole " + to_string(ExtComplex(p)) + " is not a pole of the map");
    }
    add_pole(F, p);
  }
}

}  // namespace

Branch Branch::analytic(const MapExpr& m) {
  return {"holomorphic", m, [m](Complex z) { return m(z); }};
}

Branch Branch::closed_form(std::string formula, std::function<ExtComplex(Complex)> fn) {
  return {std::move(formula), std::nullopt, std::move(fn)};
}

ExtComplex ExtendedMap::operator()(const ExtComplex& z) const {
  if (z.is_infinite()) return at_infinity();
  const Complex v = z.value();
  const double r = std::abs(v);
  if (r < 1.0) return inner(v);
  if (r > 1.0) return outer(v);
  return seam_owner == SeamOwner::inner ? inner(v) : outer(v);
}

ExtComplex ExtendedMap::at_infinity() const {
  for (const SpecialPoint& sp : special_points) {
    if (sp.source.is_infinite()) return sp.image;
  }
  throw PreconditionError("image of infinity is not declared for " + builder);
}

double special_point_error(const ExtendedMap& F) {
  double worst = 0.0;
  for (const SpecialPoint& sp : F.special_points) {
    if (sp.source.is_finite()) {
      worst = std::max(worst, chordal_distance(F(sp.source), sp.image));
      continue;
    }
    for (int k = 0; k < 8; ++k) {
      const Complex z = std::polar(kProbeRadius, 2.0 * std::numbers::pi * (k + 0.5) / 8.0);
      worst = std::max(worst, chordal_distance(F(z), sp.image));
    }
  }
  return worst;
}

void RadialProfile::validate() const {
  if (!(M > 1.0) || !std::isfinite(M)) throw PreconditionError("radial profile needs M > 1");
}

ExtendedMap ext_huang_owa(const MapExpr& f, std::optional<double> claimed_k, const std::vector<Complex>& poles) {
  const Complex a2 = normalized_a2(f);
  const auto phi = std::make_shared<const SmallArgumentSeries>(phi_from_map(f));
  ExtendedMap F;
  F.builder = "huang_owa";
  F.inner = Branch::analytic(f);
  F.outer = Branch::closed_form("z/(1-a2*z+|z|^2*phi(1/conj(z)))", [phi, a2](Complex z) {
    const ExtComplex ph = phi->value(1.0 / std::conj(z));
    return ExtComplex(z) / (ExtComplex(1.0 - a2 * z) + ExtComplex(std::norm(z)) * ph);
  });
  F.seam_owner = SeamOwner::outer;
  F.params = {{"a2", a2}};
  F.special_points.push_back(
      {ExtComplex::infinity(), std::abs(a2) < 1e-14 ? ExtComplex::infinity() : ExtComplex(-1.0 / a2)});
  F.claimed_k = claimed_k;
  add_declared_poles(F, poles);
  return F;
}

ExtendedMap ext_thm2(const MapExpr& f, std::optional<double> claimed_k, const std::vector<Complex>& poles) {
  const Complex a2 = normalized_a2(f);
  if (std::abs(a2) > 1e-12) {
    throw PreconditionError("second coefficient must vanish, found a2 = " + to_string(ExtComplex(a2)));
  }
  const auto phi = std::make_shared<const SmallArgumentSeries>(phi_from_map(f));
  ExtendedMap F;
  F.builder = "thm2";
  F.inner = Branch::analytic(f);
  // evaluated as z / (1 + |z|^2 phi(1/conj z)), equal when a2 = 0; the
  // literal denominator cancels to O(1/|z|) at large |z|
  F.outer = Branch::closed_form("z*f(1/conj(z))/(z-(|z|^2-1)*f(1/conj(z)))", [phi](Complex z) {
    const ExtComplex ph = phi->value(1.0 / std::conj(z));
    return ExtComplex(z) / (ExtComplex(1.0) + ExtComplex(std::norm(z)) * ph);
  });
  F.seam_owner = SeamOwner::outer;
  F.special_points.push_back({ExtComplex::infinity(), ExtComplex::infinity()});
  F.claimed_k = claimed_k;
  add_declared_poles(F, poles);
  return F;
}

ExtendedMap ext_mobius_convex(Complex a2) {
  const double m = std::abs(a2);
  if (!(m > 0.0 && m < 1.0)) throw PreconditionError("Mobius coefficient needs 0 < |a2| < 1");
  ExtendedMap F;
  F.builder = "mobius_convex";
  F.inner = Branch::analytic(mobius_inner(a2));
  F.outer = Branch::closed_form("z*(|z|^2-a2*z)/(|z|-a2*z)^2", [a2](Complex z) {
    const Complex d = std::abs(z) - a2 * z;
    return divide(z * (std::norm(z) - a2 * z), d * d);
  });
  F.seam_owner = SeamOwner::outer;
  F.params = {{"a2", a2}};
  F.special_points.push_back({ExtComplex::infinity(), ExtComplex::infinity()});
  F.claimed_k = m;
  return F;
}

ExtendedMap ext_radial_psi(const PsiStyle& style, const RadialProfile& profile) {
  profile.validate();
  ExtendedMap F;
  F.builder = "radial_psi";
  F.seam_owner = SeamOwner::outer;
  F.claimed_k = profile.claimed_bound();
  const Complex c = style.value;
  auto stretch = [profile](Complex z) {
    const double r = std::abs(z);
    return z / r * profile.psi(r);
  };
  if (style.kind == PsiStyle::Kind::unimodular_a2) {
    if (std::abs(std::abs(c) - 1.0) > 1e-12) throw PreconditionError("unimodular style needs |a2| = 1");
    F.inner = Branch::analytic(mobius_inner(c));
    F.outer = Branch::closed_form("s/(1-a2*s), s=psi(|z|)*z/|z|", [c, stretch](Complex z) {
      const Complex s = stretch(z);
      return divide(s, 1.0 - c * s);
    });
    F.params = {{"a2", c}, {"M", profile.M}};
    F.special_points.push_back({ExtComplex::infinity(), ExtComplex(-1.0 / c)});
    add_pole(F, 1.0 / c);
  } else {
    const double p = c.real();
    if (!(p > 0.0 && p < 1.0) || c.imag() != 0.0) throw PreconditionError("pole style needs 0 < p < 1");
    const MapExpr z;
    F.inner = Branch::analytic(MapExpr::number(p) * z / (MapExpr::number(p) - z));
    F.outer = Branch::closed_form("p*s/(p-s), s=psi(|z|)*z/|z|", [p, stretch](Complex z) {
      const Complex s = stretch(z);
      return divide(p * s, p - s);
    });
    F.params = {{"p", p}, {"M", profile.M}};
    F.special_points.push_back({ExtComplex::infinity(), ExtComplex(-p)});
    add_pole(F, p);
  }
  return F;
}

std::string_view exterior_formula_id(ExteriorFormula which) {
  switch (which) {
    case ExteriorFormula::thm4:
      return "thm4";
    case ExteriorFormula::cor1:
      return "cor1";
    case ExteriorFormula::krzyz:
      return "krzyz";
    case ExteriorFormula::krzyz_decay:
      return "krzyz_decay";
  }
  return "unknown";
}

ExtendedMap ext_exterior(const MapExpr& g, ExteriorFormula which, std::optional<double> claimed_k,
                         ExteriorMode mode) {
  const Complex lead = leading_coefficient_at_infinity(g);
  const bool plus = std::abs(lead - 1.0) <= 1e-12;
  const bool minus = std::abs(lead + 1.0) <= 1e-12;
  if (!(plus || (which == ExteriorFormula::cor1 && minus))) {
    throw PreconditionError("exterior map has leading coefficient " + to_string(ExtComplex(lead)) +
                            ", expected " + (which == ExteriorFormula::cor1 ? "+1 or -1" : "1"));
  }
  ExtendedMap F;
  F.builder = std::string("exterior_") + std::string(exterior_formula_id(which));
  F.outer = Branch::analytic(g);
  F.seam_owner = SeamOwner::inner;
  F.claimed_k = claimed_k;
  ExtComplex origin_image(0.0);
  switch (which) {
    case ExteriorFormula::thm4:
    case ExteriorFormula::cor1: {
      const double sign = which == ExteriorFormula::thm4 ? 1.0 : -1.0;
      F.inner = Branch::closed_form(sign > 0 ? "1/(1/g(1/conj(z))+1/z-conj(z))" : "1/(1/g(1/conj(z))-1/z+conj(z))",
                                    [g, sign](Complex z) -> ExtComplex {
                                      if (z == Complex(0.0)) return Complex(0.0);
                                      const ExtComplex inv = plain_div(ExtComplex(1.0), g(1.0 / std::conj(z)));
                                      return ExtComplex(1.0) / (inv + ExtComplex(sign * (1.0 / z - std::conj(z))));
                                    });
      break;
    }
    case ExteriorFormula::krzyz:
    case ExteriorFormula::krzyz_decay: {
      const MapExpr w = krzyz_w_from_g(g);
      const Complex w0 = taylor_jet(w, 2)[0];
      if (std::abs(w0) > 1e-12) {
        const std::string msg = "w(0) = " + to_string(ExtComplex(w0)) + " is nonzero";
        if (mode == ExteriorMode::chain) throw PreconditionError(msg);
        F.warnings.push_back(msg + "; chain checks do not apply");
      }
      F.inner = Branch::closed_form("z+w(conj(z)), w(z)=g(1/z)-1/z", [w, w0](Complex z) -> ExtComplex {
        if (z == Complex(0.0)) return w0;
        return ExtComplex(z) + w(std::conj(z));
      });
      F.params = {{"w0", w0}};
      origin_image = w0;
      break;
    }
  }
  F.special_points.push_back({ExtComplex::infinity(), ExtComplex::infinity()});
  F.special_points.push_back({Complex(0.0), origin_image});
  return F;
}

ExtendedMap ext_brown(const MapExpr& f, Complex brown_lambda, std::optional<double> claimed_k) {
  if (brown_lambda == Complex(0.0)) throw PreconditionError("Brown's constant must be nonzero");
  ExtendedMap F;
  F.builder = "brown";
  F.inner = Branch::analytic(f);
  F.outer = Branch::closed_form("f(1/conj(z))+(z-1/conj(z))/lambda", [f, brown_lambda](Complex z) {
    const Complex w = 1.0 / std::conj(z);
    return f(w) + ExtComplex((z - w) / brown_lambda);
  });
  F.seam_owner = SeamOwner::outer;
  F.params = {{"lambda", brown_lambda}};
  F.special_points.push_back({ExtComplex::infinity(), ExtComplex::infinity()});
  F.claimed_k = claimed_k;
  return F;
}

ExtendedMap ext_thm5(const MapExpr& f, std::optional<double> claimed_k) {
  ExtendedMap F;
  F.builder = "thm5";
  F.inner = Branch::analytic(f);
  F.outer = Branch::closed_form("f(1/conj(z))-z+1/conj(z)", [f](Complex z) {
    const Complex w = 1.0 / std::conj(z);
    return f(w) + ExtComplex(w - z);
  });
  F.seam_owner = SeamOwner::outer;
  F.special_points.push_back({ExtComplex::infinity(), ExtComplex::infinity()});
  F.claimed_k = claimed_k;
  return F;
}

}  // namespace qcx
