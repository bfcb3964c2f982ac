#include "qcx/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qcx/errors.hpp"

namespace qcx {

namespace {

constexpr double kCancellation = 1e-13;

int sat(long long v) {
  return static_cast<int>(std::clamp<long long>(v, -LaurentSeries::kExact, LaurentSeries::kExact));
}

struct Ctx {
  int cap;
};

// Drops leading coefficients flagged as cancelled, then applies the cap.
LaurentSeries finish(int val, int prec, std::vector<Complex> c, const std::vector<bool>& cancelled,
                     const Ctx& ctx) {
  std::size_t skip = 0;
  while (skip < c.size() && (c[skip] == Complex(0.0) || (skip < cancelled.size() && cancelled[skip]))) {
    ++skip;
  }
  if (skip == c.size()) return LaurentSeries::zero(prec);
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(skip));
  val += static_cast<int>(skip);
  prec = std::min(prec, val + ctx.cap);
  c.resize(static_cast<std::size_t>(prec - val));
  return {val, prec, std::move(c)};
}

LaurentSeries exact_constant(Complex v, const Ctx& ctx) {
  if (v == Complex(0.0)) return LaurentSeries::zero();
  return finish(0, ctx.cap, {v}, {}, ctx);
}

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b, double sign, const Ctx& ctx) {
  const int prec = std::min(a.precision(), b.precision());
  const int val = std::min(a.valuation(), b.valuation());
  if (val >= prec) return LaurentSeries::zero(prec);
  const int n = std::min(prec - val, ctx.cap + 1);
  std::vector<Complex> c(static_cast<std::size_t>(n));
  std::vector<bool> cancelled(static_cast<std::size_t>(n), false);
  for (int k = 0; k < n; ++k) {
    const int e = val + k;
    const Complex x = e < a.valuation() ? Complex(0.0) : a.coeff(e);
    const Complex y = e < b.valuation() ? Complex(0.0) : b.coeff(e);
    c[static_cast<std::size_t>(k)] = x + sign * y;
    const double scale = std::max(std::abs(x), std::abs(y));
    cancelled[static_cast<std::size_t>(k)] = std::abs(c[static_cast<std::size_t>(k)]) <= kCancellation * scale;
  }
  return finish(val, std::min(prec, val + n), std::move(c), cancelled, ctx);
}

LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b, const Ctx& ctx) {
  const int val = sat(static_cast<long long>(a.valuation()) + b.valuation());
  const int na = a.precision() - a.valuation();
  const int nb = b.precision() - b.valuation();
  const int n = std::min({na, nb, ctx.cap});
  if (a.is_zero() || b.is_zero() || n <= 0) {
    const long long pa = static_cast<long long>(a.precision()) + b.valuation();
    const long long pb = static_cast<long long>(b.precision()) + a.valuation();
    return LaurentSeries::zero(sat(std::min(pa, pb)));
  }
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<Complex> c(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Complex s(0.0);
    for (int i = 0; i <= k; ++i) s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(k - i)];
    c[static_cast<std::size_t>(k)] = s;
  }
  return finish(val, val + n, std::move(c), {}, ctx);
}

LaurentSeries div(const LaurentSeries& a, const LaurentSeries& b, const Ctx& ctx) {
  if (b.is_zero()) throw EvalError("division by a series that vanishes to working precision");
  if (a.is_zero()) return LaurentSeries::zero(sat(static_cast<long long>(a.precision()) - b.valuation()));
  const int val = a.valuation() - b.valuation();
  const int n = std::min({a.precision() - a.valuation(), b.precision() - b.valuation(), ctx.cap});
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<Complex> q(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Complex s = x[static_cast<std::size_t>(k)];
    for (int j = 1; j <= k; ++j) s -= y[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(k - j)];
    q[static_cast<std::size_t>(k)] = s / y[0];
  }
  return finish(val, val + n, std::move(q), {}, ctx);
}

LaurentSeries power(const LaurentSeries& a, int n, const Ctx& ctx) {
  if (n == 0) return exact_constant(1.0, ctx);
  if (n < 0) return div(exact_constant(1.0, ctx), power(a, -n, ctx), ctx);
  LaurentSeries acc = exact_constant(1.0, ctx);
  LaurentSeries sq = a;
  for (unsigned m = static_cast<unsigned>(n); m != 0; m >>= 1) {
    if (m & 1U) acc = mul(acc, sq, ctx);
    if (m > 1) sq = mul(sq, sq, ctx);
  }
  return acc;
}

LaurentSeries walk(const MapExpr& m, const LaurentSeries& var, const Ctx& ctx) {
  using Op = MapExpr::Op;
  switch (m.op()) {
    case Op::number:
      return exact_constant(m.number_value(), ctx);
    case Op::imag_unit:
      return exact_constant(Complex(0.0, 1.0), ctx);
    case Op::variable:
      return var;
    case Op::negate: {
      LaurentSeries s = walk(m.lhs(), var, ctx);
      std::vector<Complex> c = s.coeffs();
      for (auto& v : c) v = -v;
      if (s.is_zero()) return s;
      return {s.valuation(), s.precision(), std::move(c)};
    }
    case Op::add:
      return add(walk(m.lhs(), var, ctx), walk(m.rhs(), var, ctx), 1.0, ctx);
    case Op::sub:
      return add(walk(m.lhs(), var, ctx), walk(m.rhs(), var, ctx), -1.0, ctx);
    case Op::mul:
      return mul(walk(m.lhs(), var, ctx), walk(m.rhs(), var, ctx), ctx);
    case Op::div:
      return div(walk(m.lhs(), var, ctx), walk(m.rhs(), var, ctx), ctx);
    case Op::power:
      return power(walk(m.lhs(), var, ctx), m.exponent(), ctx);
  }
  throw EvalError("unknown expression node");
}

}  // namespace

LaurentSeries::LaurentSeries(int valuation, int precision, std::vector<Complex> coeffs)
    : valuation_(valuation), precision_(precision), coeffs_(std::move(coeffs)) {}

LaurentSeries LaurentSeries::zero(int precision) { return LaurentSeries(precision, precision, {}); }

Complex LaurentSeries::coeff(int e) const {
  if (e >= precision_) throw EvalError("series coefficient beyond working precision");
  if (e < valuation_) return Complex(0.0);
  return coeffs_[static_cast<std::size_t>(e - valuation_)];
}

LaurentSeries expand(const MapExpr& m, const ExtComplex& center, int terms) {
  const Ctx ctx{std::max(terms, 2)};
  LaurentSeries var;
  if (center.is_infinite()) {
    var = LaurentSeries(-1, -1 + ctx.cap, {Complex(1.0)});
  } else if (center.value() == Complex(0.0)) {
    var = LaurentSeries(1, 1 + ctx.cap, {Complex(1.0)});
  } else {
    var = LaurentSeries(0, ctx.cap, {center.value(), Complex(1.0)});
  }
  // keep the stored vector in step with the declared precision
  std::vector<Complex> c = var.coeffs();
  c.resize(static_cast<std::size_t>(var.precision() - var.valuation()), Complex(0.0));
  var = LaurentSeries(var.valuation(), var.precision(), std::move(c));
  return walk(m, var, ctx);
}

SeriesJet taylor_jet(const MapExpr& m, int order, Complex center) {
  if (order < 2) throw PreconditionError("jet order must be at least 2");
  const LaurentSeries s = expand(m, center, order + 24);
  if (!s.is_zero() && s.valuation() < 0) throw SingularityError("pole at jet center " + to_string(center));
  if (s.precision() <= order) throw EvalError("jet precision lost to cancellation");
  SeriesJet jet{center, std::vector<Complex>(static_cast<std::size_t>(order) + 1)};
  for (int k = 0; k <= order; ++k) jet.coeffs[static_cast<std::size_t>(k)] = s.coeff(k);
  return jet;
}

Complex residue(const MapExpr& m, Complex center) {
  const LaurentSeries s = expand(m, center, 24);
  if (s.is_zero() || s.valuation() > -1) return Complex(0.0);
  return s.coeff(-1);
}

ExtComplex value_at_infinity(const MapExpr& m) {
  const LaurentSeries s = expand(m, ExtComplex::infinity(), 24);
  if (s.is_zero() || s.valuation() > 0) return Complex(0.0);
  if (s.valuation() < 0) return ExtComplex::infinity();
  return s.coeff(0);
}

SmallArgumentSeries::SmallArgumentSeries(const MapExpr& m)
    : m_(m), dm_(derive(m)), jet_(taylor_jet(m, kOrder)) {
  double r = std::numeric_limits<double>::infinity();
  for (int n = kOrder - 10; n <= kOrder; ++n) {
    const double c = std::abs(jet_[n]);
    if (c > 1e-300) r = std::min(r, std::pow(c, -1.0 / n));
  }
  radius_ = std::min(r / 4.0, 1.0);
}

ExtComplex SmallArgumentSeries::value(Complex z) const {
  if (std::abs(z) > radius_) return m_(ExtComplex(z));
  Complex v(0.0);
  for (int n = kOrder; n >= 0; --n) v = v * z + jet_[n];
  return v;
}

std::pair<ExtComplex, ExtComplex> SmallArgumentSeries::value_and_derivative(Complex z) const {
  if (std::abs(z) > radius_) return {m_(ExtComplex(z)), dm_(ExtComplex(z))};
  Complex v(0.0);
  Complex d(0.0);
  for (int n = kOrder; n >= 1; --n) {
    v = v * z + jet_[n];
    d = d * z + static_cast<double>(n) * jet_[n];
  }
  return {v * z + jet_[0], d};
}

}  // namespace qcx
