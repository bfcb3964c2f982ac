#include "qcx/complex.hpp"

#include <algorithm>
#include <charconv>

#include "qcx/errors.hpp"

namespace qcx {

Complex ExtComplex::value() const {
  if (inf_) throw EvalError("value requested at the point at infinity");
  return v_;
}

Complex ExtComplex::finite_or_throw(const char* where) const {
  if (inf_) throw SingularityError(std::string("pole encountered in ") + where);
  return v_;
}

ExtComplex operator-(const ExtComplex& a) {
  if (a.is_infinite()) return a;
  return -a.value();
}

ExtComplex operator+(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) throw EvalError("indeterminate inf + inf");
  if (a.is_infinite() || b.is_infinite()) return ExtComplex::infinity();
  return a.value() + b.value();
}

ExtComplex operator-(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) throw EvalError("indeterminate inf - inf");
  if (a.is_infinite() || b.is_infinite()) return ExtComplex::infinity();
  return a.value() - b.value();
}

ExtComplex operator*(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() || b.is_infinite()) {
    const ExtComplex& other = a.is_infinite() ? b : a;
    if (other.is_finite() && other.value() == Complex(0.0)) throw EvalError("indeterminate 0 * inf");
    return ExtComplex::infinity();
  }
  return a.value() * b.value();
}

ExtComplex divide(Complex num, Complex den) {
  const double dn = std::norm(den);
  const double nn = std::norm(num);
  if (dn == 0.0 && nn == 0.0) throw EvalError("indeterminate 0 / 0");
  if (dn < kPoleTolerance * kPoleTolerance * nn) return ExtComplex::infinity();
  // a / b = a * conj(b) / |b|^2; cheaper than the libgcc routine.
  return num * std::conj(den) / dn;
}

ExtComplex operator/(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) throw EvalError("indeterminate inf / inf");
  if (a.is_infinite()) return a;
  if (b.is_infinite()) return Complex(0.0);
  return divide(a.value(), b.value());
}

ExtComplex pow(const ExtComplex& a, int n) {
  if (n == 0) return Complex(1.0);
  if (a.is_infinite()) return n > 0 ? a : ExtComplex(Complex(0.0));
  const Complex base = a.value();
  if (base == Complex(0.0)) return n > 0 ? ExtComplex(Complex(0.0)) : ExtComplex::infinity();
  Complex acc(1.0);
  Complex sq = base;
  for (unsigned m = static_cast<unsigned>(n > 0 ? n : -n); m != 0; m >>= 1) {
    if (m & 1U) acc *= sq;
    sq *= sq;
  }
  if (n > 0) return acc;
  return divide(Complex(1.0), acc);
}

double scaled_gap(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return 1.0 / std::max(1.0, std::abs(b.value()));
  if (b.is_infinite()) return 1.0 / std::max(1.0, std::abs(a.value()));
  const Complex x = a.value();
  const Complex y = b.value();
  return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

double chordal_distance(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite() || b.is_infinite()) {
    const Complex x = a.is_infinite() ? b.value() : a.value();
    return 2.0 / std::sqrt(1.0 + std::norm(x));
  }
  const Complex x = a.value();
  const Complex y = b.value();
  return 2.0 * std::abs(x - y) / std::sqrt((1.0 + std::norm(x)) * (1.0 + std::norm(y)));
}

namespace {

std::string format17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_string(const ExtComplex& p) {
  if (p.is_infinite()) return "inf";
  const Complex v = p.value();
  std::string s = format17(v.real());
  s += v.imag() < 0 || std::signbit(v.imag()) ? "-" : "+";
  s += format17(std::abs(v.imag()));
  s += "i";
  return s;
}

}  // namespace qcx
