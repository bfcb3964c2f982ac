#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qcx/complex.hpp"
#include "qcx/extensions.hpp"
#include "qcx/mapexpr.hpp"

namespace qcx {

/// Pointwise tolerance on the Loewner-Kufarev residual |fdot - z f' p|.
inline constexpr double kPdeTolerance = 1e-6;

enum class ChainKind { thm2_eq3, exterior_eq7a1, cor1_chain, thm5_chain, krzyz_eq9, convex_chain };

std::string_view chain_id(ChainKind kind);
std::optional<ChainKind> chain_from_id(std::string_view id);

/// A closed-form Loewner chain f(z, t) built from a base map, together with
/// its first coefficient a1(t) = alpha e^-t + beta e^t.
///
/// Base maps: f normalized with a2 = 0 (thm2_eq3), g with g ~ z at infinity
/// (exterior_eq7a1, krzyz_eq9; the latter needs w(0) = 0 for
/// w(z) = g(1/z) - 1/z), g ~ +-z at infinity (cor1_chain), any f analytic
/// on the closed disc with f(0) = 0 (thm5_chain), normalized f
/// (convex_chain).
class LoewnerChainSpec {
 public:
  static LoewnerChainSpec make(ChainKind kind, const MapExpr& base);

  ChainKind kind() const { return kind_; }
  const MapExpr& base() const { return base_.expr(); }

  Complex a1(double t) const;
  Complex a1_dot(double t) const;
  /// True when alpha = 0, so a1 is a multiple of e^t.
  bool standard() const { return alpha_ == Complex(0.0); }
  /// Time interval excluded around a zero of a1, if any.
  std::optional<std::pair<double, double>> excluded_window() const;
  bool in_window(double t) const;

  /// f(., 0) as an expression tree.
  MapExpr time_zero_map() const;

  /// f(z, t). Throws SingularityError naming (z, t) when a denominator
  /// vanishes.
  Complex eval(Complex z, double t) const;
  /// p(z, t) = fdot / (z f'), closed form. At z = 0 the limit a1'/a1.
  Complex herglotz(Complex z, double t) const;

 private:
  struct SmallArgument;

  ChainKind kind_ = ChainKind::thm2_eq3;
  std::shared_ptr<const SmallArgument> small_;
  AnalyticMap base_{MapExpr()};
  Complex alpha_{0.0};
  Complex beta_{1.0};
};

Complex chain_eval(const LoewnerChainSpec& c, Complex z, double t);
Complex herglotz_eval(const LoewnerChainSpec& c, Complex z, double t);

/// (z, t) sampling. z covers radii r_max * j / n_r; t covers [0, t_max]
/// with n_t evenly spaced values, minus the chain's excluded window.
struct ChainGrid {
  int n_r = 16;
  int n_theta = 32;
  int n_t = 64;
  double t_max = 5.0;
  double r_max = 0.999;

  void validate() const;
  std::vector<double> times(const LoewnerChainSpec& c) const;
  std::vector<Complex> points(double radius) const;
};

struct ChainCheckReport {
  double r0 = 0.0;
  double K0 = 0.0;
  /// sup |f| / |a1| on the refined grid; must stay below K0.
  double K0_refined = 0.0;
  bool growth_ok = false;
  double herglotz_min_re = 0.0;
  double dk_radius_sup = 0.0;
  double pde_residual_sup = 0.0;
  std::optional<double> k;
  std::optional<std::pair<double, double>> excluded_window;
  std::size_t samples = 0;
  bool passed = false;
};

/// Pommerenke-condition evidence on a (z, t) grid. Without k the D(k) part
/// requires dk_radius_sup < 1.
ChainCheckReport check_theorem_A(const LoewnerChainSpec& c, const ChainGrid& grid,
                                 std::optional<double> k = std::nullopt);

struct DkReport {
  double sup = 0.0;
  /// sup of |(p-1)/(p+1)| / |z|^2.
  double sup_over_r2 = 0.0;
  /// thm2_eq3 only: sup of | |(p-1)/(p+1)| - e^{2t} |U_f(e^-t z)| |.
  std::optional<double> equality_residual;
  bool holds = false;
};

DkReport check_dk(const LoewnerChainSpec& c, double k, const ChainGrid& grid);

/// Radius at which f(., 0) first fails to evaluate, halved, floored at
/// 0.05 and capped at 1.
double working_radius(const LoewnerChainSpec& c);

/// First Taylor coefficient of f(., t) from a discrete Fourier sum on
/// |z| = radius.
Complex fitted_first_coefficient(const LoewnerChainSpec& c, double t, double radius, int n = 64);

/// Whether f(r e^{i theta}, t1) lies inside the curve f(r e^{i theta}, t2)
/// at every sampled angle (winding number one).
bool subordinate_on_circle(const LoewnerChainSpec& c, double t1, double t2, double r = 0.9, int n = 256);

/// Winding number of a closed polygon around a point.
int winding_number(const std::vector<Complex>& polygon, Complex point);

/// F(z) = f(z, 0) on the disc and f(z/|z|, log|z|) outside.
ExtendedMap becker_extend(const LoewnerChainSpec& c);

}  // namespace qcx
