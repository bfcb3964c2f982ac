#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "qcx/complex.hpp"
#include "qcx/grid.hpp"
#include "qcx/mapexpr.hpp"

namespace qcx {

/// Slack allowed on every sampled inequality.
inline constexpr double kClassTolerance = 1e-9;

/// Radius of the disc removed around the pole p for the V_p class.
inline constexpr double kPoleExclusion = 0.02;

struct ClassParams {
  double lambda = 0.5;
  double k = 0.5;
  double p = 0.5;
  double theta = 0.0;
  Complex brown_lambda{1.0, 0.0};

  /// Throws PreconditionError when a field is out of range.
  void validate() const;
};

enum class ClassName { U_lambda, V_p_lambda, M_Ug, M_corollary1, M_krzyz_decay, brown, krzyz_w, thm5 };

std::string_view class_id(ClassName c);
std::optional<ClassName> class_from_id(std::string_view id);

struct ClassVerdict {
  ClassName class_name = ClassName::U_lambda;
  bool holds = false;
  ExtComplex worst_point;
  double worst_value = 0.0;
  double bound = 0.0;
  /// bound - worst_value; negative when the inequality fails.
  double margin = 0.0;
  std::size_t samples = 0;
};

/// (z/f)^2 f' - 1 as an expression tree.
MapExpr u_operator_expr(const MapExpr& f);

/// U_f(z). At z = 0 returns the limit 0 when f(0) = 0 and f'(0) = 1.
/// Throws EvalError when f(z) = 0 at z != 0, PreconditionError at z = 0
/// for a non-normalized f.
Complex u_operator(const MapExpr& f, Complex z);

/// Second Taylor coefficient of a normalized f; throws PreconditionError
/// unless f(0) = 0 and f'(0) = 1.
Complex normalized_a2(const MapExpr& f);

/// phi = z/f + a2 z - 1 for normalized f, with phi(0) = phi'(0) = 0
/// confirmed by its jet.
MapExpr phi_from_map(const MapExpr& f);

/// Coefficient c of g(z) = c z + O(1) at infinity. Throws PreconditionError
/// unless g has a simple pole there.
Complex leading_coefficient_at_infinity(const MapExpr& g);

/// w(z) = g(1/z) - 1/z for g in the exterior class.
MapExpr krzyz_w_from_g(const MapExpr& g);

/// Holomorphic functional whose modulus the class bounds, and that bound.
/// The disc classes take f (for krzyz_w: g, from which w is derived) on
/// the unit disc; the M classes take g on the exterior of the disc.
struct ClassFunctional {
  MapExpr functional;
  double bound;
  bool exterior;
};
ClassFunctional class_functional(const MapExpr& f_or_g, ClassName which, const ClassParams& params);

/// Supremum of the class functional over the grid and the sampled verdict.
/// Throws SingularityError when the functional has a pole at a sample.
ClassVerdict check_class(const MapExpr& f_or_g, ClassName which, const ClassParams& params, const GridSpec& grid);

struct SchwarzReport {
  bool equivalent = false;
  double sup_u = 0.0;
  double sup_ratio = 0.0;
};

/// Compares sup |U_f| < 1 against sup |U_f|/|z|^2 <= 1 on a disc grid.
SchwarzReport schwarz_equivalence(const MapExpr& f, const GridSpec& grid);

}  // namespace qcx
