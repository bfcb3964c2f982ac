#include "qcx/mapexpr.hpp"

#include <charconv>
#include <cmath>
#include <mutex>
#include <utility>

#include "qcx/errors.hpp"
#include "qcx/series.hpp"

namespace qcx {

struct MapExpr::Node {
  Op op;
  double number = 0.0;
  int exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const MapExpr::Node>;
using Op = MapExpr::Op;

struct Instr {
  Op op;
  double number;
  int exponent;
};

void compile(const NodePtr& n, std::vector<Instr>& out, int depth, int& max_depth) {
  switch (n->op) {
    case Op::number:
    case Op::imag_unit:
    case Op::variable:
      max_depth = std::max(max_depth, depth + 1);
      break;
    case Op::negate:
    case Op::power:
      compile(n->lhs, out, depth, max_depth);
      break;
    default:
      compile(n->lhs, out, depth, max_depth);
      compile(n->rhs, out, depth + 1, max_depth);
      break;
  }
  out.push_back({n->op, n->number, n->exponent});
}

bool same_tree(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  switch (a->op) {
    case Op::number:
      return a->number == b->number;
    case Op::imag_unit:
    case Op::variable:
      return true;
    case Op::negate:
      return same_tree(a->lhs, b->lhs);
    case Op::power:
      return a->exponent == b->exponent && same_tree(a->lhs, b->lhs);
    default:
      return same_tree(a->lhs, b->lhs) && same_tree(a->rhs, b->rhs);
  }
}

std::size_t count_nodes(const NodePtr& n) {
  if (!n) return 0;
  return 1 + count_nodes(n->lhs) + count_nodes(n->rhs);
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void print(const NodePtr& n, std::string& out) {
  switch (n->op) {
    case Op::number:
      out += format_number(n->number);
      return;
    case Op::imag_unit:
      out += 'i';
      return;
    case Op::variable:
      out += 'z';
      return;
    case Op::negate:
      out += "(-";
      print(n->lhs, out);
      out += ')';
      return;
    case Op::power:
      out += '(';
      print(n->lhs, out);
      out += '^';
      out += std::to_string(n->exponent);
      out += ')';
      return;
    default:
      break;
  }
  static constexpr char kSymbol[] = {0, 0, 0, 0, '+', '-', '*', '/'};
  out += '(';
  print(n->lhs, out);
  out += kSymbol[static_cast<int>(n->op)];
  print(n->rhs, out);
  out += ')';
}

NodePtr leaf(Op op, double v = 0.0) { return std::make_shared<const MapExpr::Node>(MapExpr::Node{op, v, 0, {}, {}}); }

}  // namespace

struct MapExpr::Impl {
  NodePtr root;
  std::string source;
  mutable std::once_flag compiled;
  mutable std::vector<Instr> program;
  mutable int stack_depth = 0;

  void ensure_compiled() const {
    std::call_once(compiled, [this] {
      int depth = 0;
      compile(root, program, 0, depth);
      stack_depth = depth;
    });
  }
};

MapExpr::MapExpr(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

MapExpr MapExpr::make(std::shared_ptr<const Node> node) {
  auto impl = std::make_shared<Impl>();
  impl->root = std::move(node);
  return MapExpr(std::move(impl));
}

MapExpr::MapExpr() : MapExpr(variable()) {}

MapExpr MapExpr::variable() { return make(leaf(Op::variable)); }
MapExpr MapExpr::imag_unit() { return make(leaf(Op::imag_unit)); }

MapExpr MapExpr::number(double v) {
  if (!std::isfinite(v) || v < 0.0) throw PreconditionError("number literal must be finite and non-negative");
  return make(leaf(Op::number, v == 0.0 ? 0.0 : v));
}

MapExpr MapExpr::constant(Complex c) {
  auto real_part = [](double x) { return x < 0.0 ? -number(-x) : number(x); };
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) return real_part(re);
  const MapExpr imag = std::abs(im) == 1.0 ? imag_unit() : number(std::abs(im)) * imag_unit();
  if (re == 0.0) return im < 0.0 ? -imag : imag;
  return im < 0.0 ? real_part(re) - imag : real_part(re) + imag;
}

MapExpr MapExpr::power(const MapExpr& base, int exponent) {
  if (exponent > kMaxExponent || exponent < -kMaxExponent) {
    throw PreconditionError("exponent " + std::to_string(exponent) + " exceeds +/-64");
  }
  return make(std::make_shared<const Node>(Node{Op::power, 0.0, exponent, base.impl_->root, {}}));
}

MapExpr operator-(const MapExpr& a) {
  return MapExpr::make(std::make_shared<const MapExpr::Node>(MapExpr::Node{Op::negate, 0.0, 0, a.impl_->root, {}}));
}

namespace {

MapExpr::Node binary_node(Op op, const NodePtr& a, const NodePtr& b) { return {op, 0.0, 0, a, b}; }

}  // namespace

MapExpr operator+(const MapExpr& a, const MapExpr& b) {
  return MapExpr::make(std::make_shared<const MapExpr::Node>(binary_node(Op::add, a.impl_->root, b.impl_->root)));
}

MapExpr operator-(const MapExpr& a, const MapExpr& b) {
  return MapExpr::make(std::make_shared<const MapExpr::Node>(binary_node(Op::sub, a.impl_->root, b.impl_->root)));
}

MapExpr operator*(const MapExpr& a, const MapExpr& b) {
  return MapExpr::make(std::make_shared<const MapExpr::Node>(binary_node(Op::mul, a.impl_->root, b.impl_->root)));
}

MapExpr operator/(const MapExpr& a, const MapExpr& b) {
  if (b.is_constant_zero()) throw PreconditionError("division by the constant zero expression");
  return MapExpr::make(std::make_shared<const MapExpr::Node>(binary_node(Op::div, a.impl_->root, b.impl_->root)));
}

MapExpr::Op MapExpr::op() const { return impl_->root->op; }
double MapExpr::number_value() const { return impl_->root->number; }
int MapExpr::exponent() const { return impl_->root->exponent; }

MapExpr MapExpr::lhs() const {
  if (!impl_->root->lhs) throw PreconditionError("leaf node has no operand");
  return make(impl_->root->lhs);
}

MapExpr MapExpr::rhs() const {
  if (!impl_->root->rhs) throw PreconditionError("node has no right operand");
  return make(impl_->root->rhs);
}

bool MapExpr::is_constant_zero() const {
  const Node* n = impl_->root.get();
  if (n->op == Op::negate) n = n->lhs.get();
  return n->op == Op::number && n->number == 0.0;
}

bool MapExpr::is_constant_one() const { return op() == Op::number && number_value() == 1.0; }

std::string MapExpr::source_text() const { return impl_->source.empty() ? to_string(*this) : impl_->source; }

std::size_t MapExpr::node_count() const { return count_nodes(impl_->root); }

bool operator==(const MapExpr& a, const MapExpr& b) { return same_tree(a.impl_->root, b.impl_->root); }

ExtComplex MapExpr::operator()(const ExtComplex& z) const {
  if (z.is_infinite()) return value_at_infinity(*this);
  impl_->ensure_compiled();
  const Complex zv = z.value();
  constexpr int kInline = 32;
  ExtComplex inline_stack[kInline];
  std::vector<ExtComplex> heap;
  ExtComplex* stack = inline_stack;
  if (impl_->stack_depth > kInline) {
    heap.resize(static_cast<std::size_t>(impl_->stack_depth));
    stack = heap.data();
  }
  int top = 0;
  for (const Instr& in : impl_->program) {
    switch (in.op) {
      case Op::number:
        stack[top++] = Complex(in.number);
        break;
      case Op::imag_unit:
        stack[top++] = Complex(0.0, 1.0);
        break;
      case Op::variable:
        stack[top++] = zv;
        break;
      case Op::negate:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::power:
        stack[top - 1] = pow(stack[top - 1], in.exponent);
        break;
      case Op::add:
        --top;
        stack[top - 1] = stack[top - 1] + stack[top];
        break;
      case Op::sub:
        --top;
        stack[top - 1] = stack[top - 1] - stack[top];
        break;
      case Op::mul:
        --top;
        stack[top - 1] = stack[top - 1] * stack[top];
        break;
      case Op::div:
        --top;
        stack[top - 1] = stack[top - 1] / stack[top];
        break;
    }
  }
  return stack[0];
}

ExtComplex eval(const MapExpr& m, const ExtComplex& z) { return m(z); }

std::string to_string(const MapExpr& m) {
  std::string out;
  print(m.impl_->root, out);
  return out;
}

std::string format_literal(Complex c) { return to_string(MapExpr::constant(c)); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty expression", 0);
    NodePtr n = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') throw ParseError("unmatched ')'", pos_);
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return n;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  [[noreturn]] void fail_at_end(const std::string& what) const {
    if (!open_.empty()) throw ParseError(what + " (unclosed '(')", open_.back());
    throw ParseError(what, text_.size());
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      NodePtr rhs = term();
      lhs = std::make_shared<const MapExpr::Node>(binary_node(c == '+' ? Op::add : Op::sub, lhs, rhs));
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      skip_ws();
      const std::size_t rhs_at = pos_;
      NodePtr rhs = factor();
      if (c == '/') {
        const MapExpr::Node* d = rhs.get();
        if (d->op == Op::negate) d = d->lhs.get();
        if (d->op == Op::number && d->number == 0.0) throw ParseError("division by constant zero", rhs_at);
      }
      lhs = std::make_shared<const MapExpr::Node>(binary_node(c == '*' ? Op::mul : Op::div, lhs, rhs));
    }
    return lhs;
  }

  NodePtr factor() {
    NodePtr b = base();
    if (peek() != '^') return b;
    ++pos_;
    skip_ws();
    const std::size_t at = pos_;
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    if (pos_ == text_.size()) fail_at_end("expected integer exponent");
    const std::size_t digits_at = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (pos_ == digits_at) throw ParseError("expected integer exponent", digits_at);
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      throw ParseError("exponent must be an integer", pos_);
    }
    long long value = 0;
    for (std::size_t k = digits_at; k < pos_; ++k) {
      value = value * 10 + (text_[k] - '0');
      if (value > MapExpr::kMaxExponent) throw ParseError("exponent overflow", at);
    }
    const int e = static_cast<int>(negative ? -value : value);
    return std::make_shared<const MapExpr::Node>(MapExpr::Node{Op::power, 0.0, e, b, {}});
  }

  NodePtr base() {
    const char c = peek();
    if (c == '\0') fail_at_end("expected operand");
    if (c == 'z') {
      ++pos_;
      return leaf(Op::variable);
    }
    if (c == 'i') {
      ++pos_;
      return leaf(Op::imag_unit);
    }
    if (c == '-') {
      ++pos_;
      NodePtr inner = base();
      return std::make_shared<const MapExpr::Node>(MapExpr::Node{Op::negate, 0.0, 0, inner, {}});
    }
    if (c == '(') {
      open_.push_back(pos_);
      ++pos_;
      NodePtr inner = expr();
      const char close = peek();
      if (close == '\0') fail_at_end("expected ')'");
      if (close != ')') throw ParseError(std::string("expected ')' but found '") + close + "'", pos_);
      ++pos_;
      open_.pop_back();
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return literal();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr literal() {
    const std::size_t start = pos_;
    auto digits = [this] {
      const std::size_t s = pos_;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      return pos_ - s;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
      if (probe < text_.size() && text_[probe] >= '0' && text_[probe] <= '9') {
        pos_ = probe;
        digits();
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
      throw ParseError("number literal out of range", start);
    }
    return leaf(Op::number, v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> open_;
};

}  // namespace

MapExpr parse_map(std::string_view text) {
  Parser parser(text);
  auto impl = std::make_shared<MapExpr::Impl>();
  impl->root = parser.parse();
  impl->source = std::string(text);
  return MapExpr(std::move(impl));
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

MapExpr zero() { return MapExpr::number(0.0); }
MapExpr one() { return MapExpr::number(1.0); }

MapExpr integer(int n) { return n < 0 ? -MapExpr::number(-n) : MapExpr::number(n); }

MapExpr mk_neg(const MapExpr& a) {
  if (a.is_constant_zero()) return zero();
  if (a.op() == Op::negate) return a.lhs();
  return -a;
}

MapExpr mk_add(const MapExpr& a, const MapExpr& b) {
  if (a.is_constant_zero()) return b;
  if (b.is_constant_zero()) return a;
  return a + b;
}

MapExpr mk_sub(const MapExpr& a, const MapExpr& b) {
  if (b.is_constant_zero()) return a;
  if (a.is_constant_zero()) return mk_neg(b);
  return a - b;
}

MapExpr mk_mul(const MapExpr& a, const MapExpr& b) {
  if (a.is_constant_zero() || b.is_constant_zero()) return zero();
  if (a.is_constant_one()) return b;
  if (b.is_constant_one()) return a;
  return a * b;
}

MapExpr mk_div(const MapExpr& a, const MapExpr& b) {
  if (a.is_constant_zero()) return zero();
  if (b.is_constant_one()) return a;
  return a / b;
}

MapExpr mk_pow(const MapExpr& a, int n) {
  if (n == 0) return one();
  if (n == 1) return a;
  if (n < -MapExpr::kMaxExponent) return mk_div(mk_pow(a, n + 1), a);
  if (n > MapExpr::kMaxExponent) return mk_mul(mk_pow(a, n - 1), a);
  return MapExpr::power(a, n);
}

}  // namespace

MapExpr derive(const MapExpr& m) {
  switch (m.op()) {
    case Op::number:
    case Op::imag_unit:
      return zero();
    case Op::variable:
      return one();
    case Op::negate:
      return mk_neg(derive(m.lhs()));
    case Op::add:
      return mk_add(derive(m.lhs()), derive(m.rhs()));
    case Op::sub:
      return mk_sub(derive(m.lhs()), derive(m.rhs()));
    case Op::mul: {
      const MapExpr a = m.lhs();
      const MapExpr b = m.rhs();
      return mk_add(mk_mul(derive(a), b), mk_mul(a, derive(b)));
    }
    case Op::div: {
      const MapExpr a = m.lhs();
      const MapExpr b = m.rhs();
      return mk_div(mk_sub(mk_mul(derive(a), b), mk_mul(a, derive(b))), mk_pow(b, 2));
    }
    case Op::power: {
      const int n = m.exponent();
      if (n == 0) return zero();
      const MapExpr a = m.lhs();
      return mk_mul(mk_mul(integer(n), mk_pow(a, n - 1)), derive(a));
    }
  }
  throw EvalError("unknown expression node");
}

MapExpr substitute(const MapExpr& m, const MapExpr& r) {
  switch (m.op()) {
    case Op::number:
    case Op::imag_unit:
      return m;
    case Op::variable:
      return r;
    case Op::negate:
      return -substitute(m.lhs(), r);
    case Op::power:
      return MapExpr::power(substitute(m.lhs(), r), m.exponent());
    case Op::add:
      return substitute(m.lhs(), r) + substitute(m.rhs(), r);
    case Op::sub:
      return substitute(m.lhs(), r) - substitute(m.rhs(), r);
    case Op::mul:
      return substitute(m.lhs(), r) * substitute(m.rhs(), r);
    case Op::div:
      return substitute(m.lhs(), r) / substitute(m.rhs(), r);
  }
  throw EvalError("unknown expression node");
}

AnalyticMap::AnalyticMap(MapExpr f) : f_(std::move(f)), df_(derive(f_)), d2f_(derive(df_)) {}

const MapExpr& AnalyticMap::derivative(int order) const {
  switch (order) {
    case 0:
      return f_;
    case 1:
      return df_;
    case 2:
      return d2f_;
    default:
      throw PreconditionError("AnalyticMap carries derivatives up to order 2");
  }
}

}  // namespace qcx
