#include "qcx/loewner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qcx/classifiers.hpp"
#include "qcx/errors.hpp"
#include "qcx/parallel.hpp"
#include "qcx/series.hpp"

namespace qcx {

namespace {

constexpr double kGrowthMargin = 1.1;
constexpr double kTimeStep = 1e-4;
constexpr double kSpaceStep = 1e-4;

constexpr std::array<std::pair<ChainKind, std::string_view>, 6> kIds = {{
    {ChainKind::thm2_eq3, "thm2"},
    {ChainKind::exterior_eq7a1, "exterior"},
    {ChainKind::cor1_chain, "cor1"},
    {ChainKind::thm5_chain, "thm5"},
    {ChainKind::krzyz_eq9, "krzyz"},
    {ChainKind::convex_chain, "convex"},
}};

[[noreturn]] void singular(Complex z, double t) {
  throw SingularityError("chain is singular at z = " + to_string(ExtComplex(z)) + ", t = " + format_real(t));
}

Complex fin(const ExtComplex& v, Complex z, double t) {
  if (v.is_infinite()) singular(z, t);
  return v.value();
}

Complex quotient(Complex num, Complex den, Complex z, double t) {
  try {
    return fin(divide(num, den), z, t);
  } catch (const EvalError&) {
    singular(z, t);
  }
}

MapExpr reciprocal_of_inverted(const MapExpr& g) {
  return MapExpr::number(1.0) / substitute(g, MapExpr::number(1.0) / MapExpr());
}

}  // namespace

// The chain formulas subtract quantities that agree to O(z^2) for small z.
struct LoewnerChainSpec::SmallArgument {
  SmallArgumentSeries series;

  explicit SmallArgument(const MapExpr& m) : series(m) {}

  std::pair<Complex, Complex> at(Complex z, double t) const {
    const auto [v, d] = series.value_and_derivative(z);
    return {fin(v, z, t), fin(d, z, t)};
  }
};

std::string_view chain_id(ChainKind kind) {
  for (const auto& [k, id] : kIds) {
    if (k == kind) return id;
  }
  return "unknown";
}

std::optional<ChainKind> chain_from_id(std::string_view id) {
  for (const auto& [k, text] : kIds) {
    if (text == id) return k;
  }
  return std::nullopt;
}

LoewnerChainSpec LoewnerChainSpec::make(ChainKind kind, const MapExpr& base) {
  LoewnerChainSpec c;
  c.kind_ = kind;
  c.base_ = AnalyticMap(base);
  switch (kind) {
    case ChainKind::thm2_eq3:
      if (std::abs(normalized_a2(base)) > 1e-12) throw PreconditionError("chain needs a2 = 0");
      c.small_ = std::make_shared<const SmallArgument>(phi_from_map(base));
      break;
    case ChainKind::convex_chain:
      (void)normalized_a2(base);
      break;
    case ChainKind::exterior_eq7a1:
    case ChainKind::krzyz_eq9: {
      const Complex lead = leading_coefficient_at_infinity(base);
      if (std::abs(lead - 1.0) > 1e-12) throw PreconditionError("exterior chain needs g ~ z at infinity");
      if (kind == ChainKind::krzyz_eq9) {
        const MapExpr w = krzyz_w_from_g(base);
        const Complex w0 = taylor_jet(w, 2)[0];
        if (std::abs(w0) > 1e-12) {
          throw PreconditionError("chain needs w(0) = 0, found " + to_string(ExtComplex(w0)));
        }
        c.small_ = std::make_shared<const SmallArgument>(w);
      }
      break;
    }
    case ChainKind::cor1_chain: {
      const Complex lead = leading_coefficient_at_infinity(base);
      if (std::abs(std::abs(lead) - 1.0) > 1e-12 || std::abs(lead.imag()) > 1e-12) {
        throw PreconditionError("chain needs g ~ +-z at infinity");
      }
      c.alpha_ = 1.0 / lead.real() + 1.0;
      c.beta_ = -1.0;
      break;
    }
    case ChainKind::thm5_chain: {
      const SeriesJet jet = taylor_jet(base, 2);
      if (std::abs(jet[0]) > 1e-12) throw PreconditionError("chain needs f(0) = 0");
      c.alpha_ = jet[1] + 1.0;
      c.beta_ = -1.0;
      break;
    }
  }
  if (std::abs(c.alpha_) < 1e-14) c.alpha_ = 0.0;
  return c;
}

Complex LoewnerChainSpec::a1(double t) const { return alpha_ * std::exp(-t) + beta_ * std::exp(t); }

Complex LoewnerChainSpec::a1_dot(double t) const { return -alpha_ * std::exp(-t) + beta_ * std::exp(t); }

std::optional<std::pair<double, double>> LoewnerChainSpec::excluded_window() const {
  if (standard()) return std::nullopt;
  const Complex r = -alpha_ / beta_;
  if (std::abs(r.imag()) > 1e-12 || r.real() < 1.0) return std::nullopt;
  const double t_zero = 0.5 * std::log(r.real());
  if (t_zero > 0.3 && t_zero < 0.4) return std::make_pair(0.3, 0.4);
  return std::make_pair(t_zero - 0.05, t_zero + 0.05);
}

bool LoewnerChainSpec::in_window(double t) const {
  const auto w = excluded_window();
  return w && t >= w->first && t <= w->second;
}

MapExpr LoewnerChainSpec::time_zero_map() const {
  switch (kind_) {
    case ChainKind::exterior_eq7a1:
    case ChainKind::cor1_chain:
    case ChainKind::krzyz_eq9:
      return reciprocal_of_inverted(base_.expr());
    default:
      return base_.expr();
  }
}

Complex LoewnerChainSpec::eval(Complex z, double t) const {
  if (z == Complex(0.0)) return Complex(0.0);
  const double et = std::exp(t);
  const double emt = std::exp(-t);
  const double s = et - emt;
  switch (kind_) {
    case ChainKind::thm2_eq3: {
      // z f(e^-t z) / (z - s f(e^-t z)) rewritten through phi = z/f - 1
      const Complex phi = small_->at(emt * z, t).first;
      return quotient(z, emt + et * phi, z, t);
    }
    case ChainKind::exterior_eq7a1:
    case ChainKind::cor1_chain: {
      const Complex gw = fin(base_(et / z), z, t);
      if (gw == Complex(0.0)) singular(z, t);
      const double sign = kind_ == ChainKind::exterior_eq7a1 ? 1.0 : -1.0;
      return 1.0 / gw + sign * s * z;
    }
    case ChainKind::thm5_chain:
      return fin(base_(emt * z), z, t) - s * z;
    case ChainKind::krzyz_eq9: {
      const Complex d = small_->at(emt * z, t).first + emt / z;
      return quotient(Complex(1.0), d, z, t);
    }
    case ChainKind::convex_chain:
      return fin(base_(z), z, t) + (et - 1.0) * z * fin(base_.d1(z), z, t);
  }
  throw PreconditionError("unknown chain kind");
}

Complex LoewnerChainSpec::herglotz(Complex z, double t) const {
  if (z == Complex(0.0)) return a1_dot(t) / a1(t);
  const double et = std::exp(t);
  const double emt = std::exp(-t);
  const double s = et - emt;
  const double c = et + emt;
  switch (kind_) {
    case ChainKind::thm2_eq3: {
      // divided through by f^2, with U_f = phi - z phi'
      const Complex zeta = emt * z;
      const auto [phi, dphi] = small_->at(zeta, t);
      const Complex u = phi - zeta * dphi;
      return quotient(emt - et * u, emt + et * u, z, t);
    }
    case ChainKind::exterior_eq7a1:
    case ChainKind::cor1_chain: {
      const Complex W = et / z;
      const Complex g = fin(base_(W), z, t);
      const Complex dg = fin(base_.d1(W), z, t);
      const Complex lead = dg * et / z;
      const Complex zg2 = z * g * g;
      if (kind_ == ChainKind::exterior_eq7a1) return quotient(-lead + c * zg2, lead + s * zg2, z, t);
      return quotient(-lead - c * zg2, lead - s * zg2, z, t);
    }
    case ChainKind::thm5_chain: {
      const Complex df = fin(base_.d1(emt * z), z, t);
      return quotient(-df * emt - c, df * emt - s, z, t);
    }
    case ChainKind::krzyz_eq9: {
      const Complex q = z * z * small_->at(emt * z, t).second;
      return quotient(1.0 + q, 1.0 - q, z, t);
    }
    case ChainKind::convex_chain: {
      const Complex d1 = fin(base_.d1(z), z, t);
      const Complex d2 = fin(base_.d2(z), z, t);
      return quotient(et * d1, et * d1 + (et - 1.0) * z * d2, z, t);
    }
  }
  throw PreconditionError("unknown chain kind");
}

Complex chain_eval(const LoewnerChainSpec& c, Complex z, double t) { return c.eval(z, t); }

Complex herglotz_eval(const LoewnerChainSpec& c, Complex z, double t) { return c.herglotz(z, t); }

void ChainGrid::validate() const {
  if (n_r < 1 || n_theta < 1 || n_t < 2) throw PreconditionError("chain grid is empty");
  if (!(t_max > 0.0) || !(r_max > 0.0 && r_max < 1.0)) throw PreconditionError("chain grid bounds out of range");
}

std::vector<double> ChainGrid::times(const LoewnerChainSpec& c) const {
  std::vector<double> ts;
  for (int j = 0; j < n_t; ++j) {
    const double t = t_max * j / (n_t - 1);
    if (!c.in_window(t)) ts.push_back(t);
  }
  return ts;
}

std::vector<Complex> ChainGrid::points(double radius) const {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta));
  for (int j = 1; j <= n_r; ++j) {
    for (int k = 0; k < n_theta; ++k) {
      pts.push_back(std::polar(radius * j / n_r, 2.0 * std::numbers::pi * k / n_theta));
    }
  }
  return pts;
}

double working_radius(const LoewnerChainSpec& c) {
  const int order = 40;
  const SeriesJet jet = taylor_jet(c.time_zero_map(), order);
  double radius = std::numeric_limits<double>::infinity();
  for (int n = order - 10; n <= order; ++n) {
    const double m = std::abs(jet[n]);
    if (m > 1e-300) radius = std::min(radius, std::pow(m, -1.0 / n));
  }
  return std::clamp(radius / 2.0, 0.05, 1.0);
}

namespace {

double growth_sup(const LoewnerChainSpec& c, const std::vector<Complex>& pts, const std::vector<double>& ts) {
  const std::vector<double> per_t = parallel_map<double>(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    const double a = std::abs(c.a1(t));
    double m = 0.0;
    for (Complex z : pts) m = std::max(m, std::abs(c.eval(z, t)) / a);
    return m;
  });
  return *std::max_element(per_t.begin(), per_t.end());
}

// Refinement that never moves closer to the excluded window: midpoints
// are only inserted between neighbours that do not straddle it.
std::vector<double> refine_times(const LoewnerChainSpec& c, const std::vector<double>& ts) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.push_back(ts[i]);
    if (i + 1 < ts.size()) {
      const double mid = 0.5 * (ts[i] + ts[i + 1]);
      const auto w = c.excluded_window();
      const bool straddles = w && ts[i] < w->first && ts[i + 1] > w->second;
      if (!straddles && !c.in_window(mid)) out.push_back(mid);
    }
  }
  return out;
}

// Fourth-order central stencils. The second-order one has truncation error
// h^2 |f_ttt| / 6, which reaches 1e-6 at t = 5 once |f| e^-t is about 4.
Complex time_derivative(const LoewnerChainSpec& c, Complex z, double t) {
  const double h = kTimeStep;
  if (t < h) return (-3.0 * c.eval(z, t) + 4.0 * c.eval(z, t + h) - c.eval(z, t + 2 * h)) / (2 * h);
  if (t < 2 * h) return (c.eval(z, t + h) - c.eval(z, t - h)) / (2 * h);
  return (8.0 * (c.eval(z, t + h) - c.eval(z, t - h)) - (c.eval(z, t + 2 * h) - c.eval(z, t - 2 * h))) / (12 * h);
}

Complex space_derivative(const LoewnerChainSpec& c, Complex z, double t) {
  const double h = kSpaceStep * std::max(1.0, std::abs(z));
  return (8.0 * (c.eval(z + h, t) - c.eval(z - h, t)) - (c.eval(z + 2 * h, t) - c.eval(z - 2 * h, t))) / (12 * h);
}

struct HerglotzSweep {
  double min_re = std::numeric_limits<double>::infinity();
  double dk_sup = 0.0;
  double residual_sup = 0.0;
  std::size_t samples = 0;
};

HerglotzSweep herglotz_sweep(const LoewnerChainSpec& c, const std::vector<Complex>& pts,
                             const std::vector<double>& ts) {
  struct Row {
    double min_re;
    double dk;
    double residual;
  };
  const std::vector<Row> rows = parallel_map<Row>(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    Row r{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (Complex z : pts) {
      const Complex p = c.herglotz(z, t);
      if (p == Complex(-1.0)) singular(z, t);
      r.min_re = std::min(r.min_re, p.real());
      r.dk = std::max(r.dk, std::abs((p - 1.0) / (p + 1.0)));
      const Complex res = time_derivative(c, z, t) - z * space_derivative(c, z, t) * p;
      r.residual = std::max(r.residual, std::abs(res));
    }
    return r;
  });
  HerglotzSweep s;
  for (const Row& r : rows) {
    s.min_re = std::min(s.min_re, r.min_re);
    s.dk_sup = std::max(s.dk_sup, r.dk);
    s.residual_sup = std::max(s.residual_sup, r.residual);
  }
  s.samples = pts.size() * ts.size();
  return s;
}

}  // namespace

ChainCheckReport check_theorem_A(const LoewnerChainSpec& c, const ChainGrid& grid, std::optional<double> k) {
  grid.validate();
  ChainCheckReport r;
  r.k = k;
  r.excluded_window = c.excluded_window();
  r.r0 = working_radius(c);

  const std::vector<double> ts = grid.times(c);
  ChainGrid growth = grid;
  growth.r_max = r.r0;
  r.K0 = kGrowthMargin * growth_sup(c, growth.points(r.r0), ts);
  ChainGrid fine = growth;
  fine.n_r *= 2;
  fine.n_theta *= 2;
  r.K0_refined = growth_sup(c, fine.points(r.r0), refine_times(c, ts));
  r.growth_ok = r.K0_refined <= r.K0;

  const HerglotzSweep s = herglotz_sweep(c, grid.points(grid.r_max), ts);
  r.herglotz_min_re = s.min_re;
  r.dk_radius_sup = s.dk_sup;
  r.pde_residual_sup = s.residual_sup;
  r.samples = s.samples;
  const bool dk_ok = k ? r.dk_radius_sup <= *k + kClassTolerance : r.dk_radius_sup < 1.0;
  r.passed = r.herglotz_min_re > 0.0 && dk_ok && r.pde_residual_sup <= kPdeTolerance && r.growth_ok;
  return r;
}

DkReport check_dk(const LoewnerChainSpec& c, double k, const ChainGrid& grid) {
  grid.validate();
  const std::vector<double> ts = grid.times(c);
  const std::vector<Complex> pts = grid.points(grid.r_max);
  const bool equality = c.kind() == ChainKind::thm2_eq3;
  const MapExpr u = equality ? u_operator_expr(c.base()) : MapExpr();
  struct Row {
    double sup;
    double ratio;
    double eq;
  };
  const std::vector<Row> rows = parallel_map<Row>(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    Row row{0.0, 0.0, 0.0};
    for (Complex z : pts) {
      const Complex p = c.herglotz(z, t);
      if (p == Complex(-1.0)) singular(z, t);
      const double q = std::abs((p - 1.0) / (p + 1.0));
      row.sup = std::max(row.sup, q);
      row.ratio = std::max(row.ratio, q / std::norm(z));
      if (equality) {
        const Complex uz = fin(u(std::exp(-t) * z), z, t);
        row.eq = std::max(row.eq, std::abs(q - std::exp(2 * t) * std::abs(uz)));
      }
    }
    return row;
  });
  DkReport d;
  for (const Row& row : rows) {
    d.sup = std::max(d.sup, row.sup);
    d.sup_over_r2 = std::max(d.sup_over_r2, row.ratio);
    if (equality) d.equality_residual = std::max(d.equality_residual.value_or(0.0), row.eq);
  }
  d.holds = d.sup <= k + kClassTolerance;
  return d;
}

Complex fitted_first_coefficient(const LoewnerChainSpec& c, double t, double radius, int n) {
  Complex acc(0.0);
  for (int j = 0; j < n; ++j) {
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    acc += c.eval(radius * w, t) * std::conj(w);
  }
  return acc / (static_cast<double>(n) * radius);
}

int winding_number(const std::vector<Complex>& polygon, Complex point) {
  double total = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Complex a = polygon[i] - point;
    const Complex b = polygon[(i + 1) % polygon.size()] - point;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

bool subordinate_on_circle(const LoewnerChainSpec& c, double t1, double t2, double r, int n) {
  std::vector<Complex> outer(static_cast<std::size_t>(n));
  std::vector<Complex> inner(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Complex z = std::polar(r, 2.0 * std::numbers::pi * k / n);
    outer[static_cast<std::size_t>(k)] = c.eval(z, t2);
    inner[static_cast<std::size_t>(k)] = c.eval(z, t1);
  }
  return std::all_of(inner.begin(), inner.end(), [&](Complex p) { return winding_number(outer, p) == 1; });
}

ExtendedMap becker_extend(const LoewnerChainSpec& c) {
  ExtendedMap F;
  F.builder = "becker_" + std::string(chain_id(c.kind()));
  F.inner = Branch::analytic(c.time_zero_map());
  F.outer = Branch::closed_form("f(z/|z|, log|z|)", [c](Complex z) -> ExtComplex {
    const double r = std::abs(z);
    return c.eval(z / r, std::log(r));
  });
  F.seam_owner = SeamOwner::outer;
  F.special_points.push_back({ExtComplex::infinity(), ExtComplex::infinity()});
  return F;
}

}  // namespace qcx
