#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qcx/complex.hpp"

namespace qcx {

/// Immutable expression tree for a rational map of one complex variable z.
///
/// Grammar (whitespace insignificant):
///
///     expr   := term (('+'|'-') term)*
///     term   := factor (('*'|'/') factor)*
///     factor := base ('^' signed-integer)?
///     base   := decimal-literal | 'i' | 'z' | '(' expr ')' | '-' base
///
/// Number nodes hold non-negative finite doubles; negative constants are
/// negate nodes. Every tree is therefore expressible in the grammar and
/// parse(to_string(t)) == t holds for all trees, not only parsed ones.
/// Note that '-' binds tighter than '^': "-z^2" is (-z)^2.
class MapExpr {
 public:
  enum class Op : std::uint8_t { number, imag_unit, variable, negate, add, sub, mul, div, power };

  static constexpr int kMaxExponent = 64;

  /// The identity map z.
  MapExpr();

  static MapExpr variable();
  static MapExpr imag_unit();
  /// Non-negative finite literal.
  static MapExpr number(double v);
  /// Grammar-expressible constant a + b*i (negative parts become negate nodes).
  static MapExpr constant(Complex c);
  static MapExpr power(const MapExpr& base, int exponent);

  friend MapExpr operator-(const MapExpr& a);
  friend MapExpr operator+(const MapExpr& a, const MapExpr& b);
  friend MapExpr operator-(const MapExpr& a, const MapExpr& b);
  friend MapExpr operator*(const MapExpr& a, const MapExpr& b);
  friend MapExpr operator/(const MapExpr& a, const MapExpr& b);

  Op op() const;
  double number_value() const;
  int exponent() const;
  /// Operand of negate/power, left operand of binary nodes.
  MapExpr lhs() const;
  MapExpr rhs() const;

  bool is_constant_zero() const;
  bool is_constant_one() const;

  /// Text this expression was parsed from, or its canonical form.
  std::string source_text() const;

  /// Evaluate at z. Poles give infinity; z = infinity is handled through
  /// the chart w = 1/z by a Laurent expansion at w = 0.
  ExtComplex operator()(const ExtComplex& z) const;

  std::size_t node_count() const;

  friend bool operator==(const MapExpr& a, const MapExpr& b);

  struct Node;
  struct Impl;

 private:
  explicit MapExpr(std::shared_ptr<const Impl> impl);
  static MapExpr make(std::shared_ptr<const Node> node);

  std::shared_ptr<const Impl> impl_;

  friend MapExpr parse_map(std::string_view text);
  friend std::string to_string(const MapExpr& m);
};

/// Parse grammar text. Throws ParseError carrying the byte offset.
/// At end of input inside an open group the offset is that of the innermost
/// unclosed '('.
MapExpr parse_map(std::string_view text);

/// Canonical form: fully parenthesised, literals with 17 significant digits.
std::string to_string(const MapExpr& m);

/// Grammar text for a constant, e.g. "0.5", "(-2)", "(0.5+0.25*i)".
std::string format_literal(Complex c);

ExtComplex eval(const MapExpr& m, const ExtComplex& z);

/// Exact symbolic derivative d/dz (zero/one pruning only).
MapExpr derive(const MapExpr& m);

/// m(r(z)): every occurrence of z replaced by r.
MapExpr substitute(const MapExpr& m, const MapExpr& r);

/// A map bundled with its first two derivatives. Immutable.
class AnalyticMap {
 public:
  explicit AnalyticMap(MapExpr f);

  const MapExpr& expr() const { return f_; }
  const MapExpr& derivative(int order = 1) const;

  ExtComplex operator()(const ExtComplex& z) const { return f_(z); }
  ExtComplex d1(const ExtComplex& z) const { return df_(z); }
  ExtComplex d2(const ExtComplex& z) const { return d2f_(z); }

 private:
  MapExpr f_;
  MapExpr df_;
  MapExpr d2f_;
};

}  // namespace qcx
