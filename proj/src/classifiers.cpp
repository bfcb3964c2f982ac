#include "qcx/classifiers.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "qcx/errors.hpp"
#include "qcx/parallel.hpp"
#include "qcx/series.hpp"

namespace qcx {

namespace {

constexpr double kNormTolerance = 1e-12;

constexpr std::array<std::pair<ClassName, std::string_view>, 8> kIds = {{
    {ClassName::U_lambda, "U_lambda"},
    {ClassName::V_p_lambda, "V_p_lambda"},
    {ClassName::M_Ug, "M_Ug"},
    {ClassName::M_corollary1, "M_corollary1"},
    {ClassName::M_krzyz_decay, "M_krzyz_decay"},
    {ClassName::brown, "brown"},
    {ClassName::krzyz_w, "krzyz_w"},
    {ClassName::thm5, "thm5"},
}};

void require_unit_leading(const MapExpr& g, bool allow_negative) {
  const Complex c = leading_coefficient_at_infinity(g);
  const bool ok = std::abs(c - 1.0) <= kNormTolerance || (allow_negative && std::abs(c + 1.0) <= kNormTolerance);
  if (!ok) {
    throw PreconditionError("exterior map must behave like " + std::string(allow_negative ? "+-z" : "z") +
                            " at infinity, leading coefficient is " + to_string(ExtComplex(c)));
  }
}

}  // namespace

void ClassParams::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw PreconditionError("lambda must lie in (0,1]");
  if (!(k > 0.0 && k < 1.0)) throw PreconditionError("k must lie in (0,1)");
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("p must lie in (0,1)");
  if (!(theta >= 0.0 && theta < 2.0 * std::numbers::pi)) throw PreconditionError("theta must lie in [0,2pi)");
  if (brown_lambda == Complex(0.0)) throw PreconditionError("Brown's constant must be nonzero");
}

std::string_view class_id(ClassName c) {
  for (const auto& [name, id] : kIds) {
    if (name == c) return id;
  }
  return "unknown";
}

std::optional<ClassName> class_from_id(std::string_view id) {
  for (const auto& [name, text] : kIds) {
    if (text == id) return name;
  }
  return std::nullopt;
}

MapExpr u_operator_expr(const MapExpr& f) {
  const MapExpr z;
  return MapExpr::power(z / f, 2) * derive(f) - MapExpr::number(1.0);
}

Complex u_operator(const MapExpr& f, Complex z) {
  if (z == Complex(0.0)) {
    (void)normalized_a2(f);
    return Complex(0.0);
  }
  const ExtComplex fv = f(z);
  if (fv.is_finite() && fv.value() == Complex(0.0)) {
    throw EvalError("U_f undefined: f vanishes at " + to_string(ExtComplex(z)));
  }
  const ExtComplex q = ExtComplex(z) / fv;
  const ExtComplex u = q * q * derive(f)(z) - ExtComplex(1.0);
  return u.finite_or_throw("U_f");
}

Complex normalized_a2(const MapExpr& f) {
  const SeriesJet jet = taylor_jet(f, 2);
  if (std::abs(jet[0]) > kNormTolerance || std::abs(jet[1] - 1.0) > kNormTolerance) {
    throw PreconditionError("map is not normalized: f(0) = " + to_string(ExtComplex(jet[0])) +
                            ", f'(0) = " + to_string(ExtComplex(jet[1])));
  }
  return jet[2];
}

MapExpr phi_from_map(const MapExpr& f) {
  const Complex a2 = normalized_a2(f);
  const MapExpr z;
  MapExpr phi = z / f;
  if (a2 != Complex(0.0)) phi = phi + MapExpr::constant(a2) * z;
  phi = phi - MapExpr::number(1.0);
  const SeriesJet jet = taylor_jet(phi, 2);
  if (std::abs(jet[0]) > 1e-10 || std::abs(jet[1]) > 1e-10) {
    throw EvalError("phi does not vanish to second order at the origin");
  }
  return phi;
}

Complex leading_coefficient_at_infinity(const MapExpr& g) {
  const LaurentSeries s = expand(g, ExtComplex::infinity(), 4);
  if (s.is_zero() || s.valuation() != -1) {
    throw PreconditionError("exterior map must have a simple pole at infinity");
  }
  return s.coeff(-1);
}

MapExpr krzyz_w_from_g(const MapExpr& g) {
  const MapExpr inv = MapExpr::number(1.0) / MapExpr();
  return substitute(g, inv) - inv;
}

ClassFunctional class_functional(const MapExpr& f, ClassName which, const ClassParams& params) {
  const MapExpr z;
  switch (which) {
    case ClassName::U_lambda:
    case ClassName::V_p_lambda:
      (void)normalized_a2(f);
      return {u_operator_expr(f) / MapExpr::power(z, 2), params.lambda, false};
    case ClassName::M_Ug:
      require_unit_leading(f, false);
      return {u_operator_expr(f), params.k, true};
    case ClassName::M_corollary1:
      require_unit_leading(f, true);
      return {MapExpr::power(z / f, 2) * derive(f) + MapExpr::number(1.0), params.k, true};
    case ClassName::M_krzyz_decay:
      require_unit_leading(f, false);
      return {MapExpr::power(z, 2) * (derive(f) - MapExpr::number(1.0)), params.k, true};
    case ClassName::brown:
      return {MapExpr::constant(params.brown_lambda) * derive(f) - MapExpr::number(1.0), params.k, false};
    case ClassName::krzyz_w:
      require_unit_leading(f, false);
      return {derive(krzyz_w_from_g(f)), params.k, false};
    case ClassName::thm5:
      return {derive(f) + MapExpr::number(1.0), params.k, false};
  }
  throw PreconditionError("unknown class");
}

ClassVerdict check_class(const MapExpr& f_or_g, ClassName which, const ClassParams& params, const GridSpec& grid) {
  params.validate();
  const ClassFunctional cf = class_functional(f_or_g, which, params);
  if (cf.exterior == (grid.region == Region::disc)) {
    throw PreconditionError(std::string("class ") + std::string(class_id(which)) + " needs " +
                            (cf.exterior ? "an exterior" : "a disc") + " grid");
  }
  GridSpec g = grid;
  if (which == ClassName::V_p_lambda) g.exclusions.push_back({Complex(params.p), kPoleExclusion});
  const std::vector<ExtComplex> pts = g.points();
  const std::vector<double> values = parallel_map<double>(pts.size(), [&](std::size_t i) {
    ExtComplex v;
    try {
      v = cf.functional(pts[i]);
    } catch (const EvalError&) {
      v = ExtComplex::infinity();
    }
    if (v.is_infinite()) {
      throw SingularityError("class functional is singular at grid point " + to_string(pts[i]));
    }
    return std::abs(v.value());
  });
  const PointMax worst = max_over(pts, values);
  ClassVerdict verdict;
  verdict.class_name = which;
  verdict.worst_point = worst.point;
  verdict.worst_value = worst.value;
  verdict.bound = cf.bound;
  verdict.margin = cf.bound - worst.value;
  verdict.holds = worst.value <= cf.bound + kClassTolerance;
  verdict.samples = pts.size();
  return verdict;
}

SchwarzReport schwarz_equivalence(const MapExpr& f, const GridSpec& grid) {
  if (grid.region != Region::disc) throw PreconditionError("Schwarz comparison needs a disc grid");
  const MapExpr u = u_operator_expr(f);
  const SeriesJet jet = taylor_jet(u, 2);
  if (std::abs(jet[0]) > 1e-10 || std::abs(jet[1]) > 1e-10) {
    throw PreconditionError("U_f must vanish to second order at the origin");
  }
  const std::vector<ExtComplex> pts = grid.points();
  const std::vector<double> mods = parallel_map<double>(pts.size(), [&](std::size_t i) {
    return std::abs(u(pts[i]).finite_or_throw("U_f"));
  });
  std::vector<double> ratios(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ratios[i] = mods[i] / std::norm(pts[i].value());
  SchwarzReport r;
  r.sup_u = max_over(pts, mods).value;
  r.sup_ratio = max_over(pts, ratios).value;
  r.equivalent = !(r.sup_u < 1.0) || r.sup_ratio <= 1.0 + kClassTolerance;
  return r;
}

}  // namespace qcx
