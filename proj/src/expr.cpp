#include "igeo/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace igeo {

// ---------------------------------------------------------------------------
// Jet2 arithmetic

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim_, a.value_ + b.value_);
  for (int i = 0; i < a.dim_; ++i) {
    r.grad(i) = a.grad(i) + b.grad(i);
    for (int j = i; j < a.dim_; ++j) r.hess(i, j) = a.hess(i, j) + b.hess(i, j);
  }
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim_, a.value_ - b.value_);
  for (int i = 0; i < a.dim_; ++i) {
    r.grad(i) = a.grad(i) - b.grad(i);
    for (int j = i; j < a.dim_; ++j) r.hess(i, j) = a.hess(i, j) - b.hess(i, j);
  }
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r(a.dim_, -a.value_);
  for (int i = 0; i < a.dim_; ++i) {
    r.grad(i) = -a.grad(i);
    for (int j = i; j < a.dim_; ++j) r.hess(i, j) = -a.hess(i, j);
  }
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim_, a.value_ * b.value_);
  for (int i = 0; i < a.dim_; ++i) {
    r.grad(i) = a.grad(i) * b.value_ + a.value_ * b.grad(i);
    for (int j = i; j < a.dim_; ++j) {
      r.hess(i, j) = a.hess(i, j) * b.value_ + a.value_ * b.hess(i, j) +
                     a.grad(i) * b.grad(j) + b.grad(i) * a.grad(j);
    }
  }
  return r;
}

Jet2 operator*(double s, const Jet2& a) {
  Jet2 r(a.dim_, s * a.value_);
  for (int i = 0; i < a.dim_; ++i) {
    r.grad(i) = s * a.grad(i);
    for (int j = i; j < a.dim_; ++j) r.hess(i, j) = s * a.hess(i, j);
  }
  return r;
}

Jet2 Jet2::compose(double f, double df, double d2f) const {
  Jet2 r(dim_, f);
  for (int i = 0; i < dim_; ++i) {
    r.grad(i) = df * grad(i);
    for (int j = i; j < dim_; ++j) r.hess(i, j) = df * hess(i, j) + d2f * grad(i) * grad(j);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Node construction

namespace expr {

namespace {

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
  Node n;
  n.kind = k;
  n.constant = a->constant && b->constant;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make(std::move(n));
}

}  // namespace

NodePtr number(double v) {
  Node n;
  n.kind = Kind::Number;
  n.number = v;
  return make(std::move(n));
}

NodePtr pi() {
  Node n;
  n.kind = Kind::Constant;
  n.number = std::numbers::pi;
  n.constant_name = 'p';
  return make(std::move(n));
}

NodePtr euler() {
  Node n;
  n.kind = Kind::Constant;
  n.number = std::numbers::e;
  n.constant_name = 'e';
  return make(std::move(n));
}

NodePtr coord(int index0) {
  Node n;
  n.kind = Kind::Coord;
  n.coord = index0;
  n.constant = false;
  return make(std::move(n));
}

NodePtr neg(NodePtr a) {
  Node n;
  n.kind = Kind::Neg;
  n.constant = a->constant;
  n.lhs = std::move(a);
  return make(std::move(n));
}

NodePtr add(NodePtr a, NodePtr b) { return binary(Kind::Add, std::move(a), std::move(b)); }
NodePtr sub(NodePtr a, NodePtr b) { return binary(Kind::Sub, std::move(a), std::move(b)); }
NodePtr mul(NodePtr a, NodePtr b) { return binary(Kind::Mul, std::move(a), std::move(b)); }
NodePtr div(NodePtr a, NodePtr b) { return binary(Kind::Div, std::move(a), std::move(b)); }
NodePtr pow(NodePtr a, NodePtr b) { return binary(Kind::Pow, std::move(a), std::move(b)); }

NodePtr call(Func f, NodePtr a) {
  Node n;
  n.kind = Kind::Call;
  n.func = f;
  n.constant = a->constant;
  n.lhs = std::move(a);
  return make(std::move(n));
}

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
  }
  return "?";
}

bool is_number(const NodePtr& n, double v) { return n && n->kind == Kind::Number && n->number == v; }

}  // namespace expr

ScalarField::ScalarField(expr::NodePtr root, int dim) : root_(std::move(root)), dim_(dim) {
  if (!root_) throw std::invalid_argument("ScalarField: null expression");
  if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("ScalarField: dimension out of range");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

using expr::Kind;
using expr::Node;
using expr::NodePtr;

std::string format_number(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot print non-finite literal");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::fabs(v));
  if (std::signbit(v)) return std::string("(-") + buf + ")";
  return buf;
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: out += format_number(n.number); return;
    case Kind::Constant: out += (n.constant_name == 'p' ? "pi" : "e"); return;
    case Kind::Coord:
      out += 't';
      out += std::to_string(n.coord + 1);
      return;
    case Kind::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Call:
      out += expr::func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    default: break;
  }
  char op = '+';
  switch (n.kind) {
    case Kind::Add: op = '+'; break;
    case Kind::Sub: op = '-'; break;
    case Kind::Mul: op = '*'; break;
    case Kind::Div: op = '/'; break;
    case Kind::Pow: op = '^'; break;
    default: break;
  }
  out += '(';
  print_node(*n.lhs, out);
  out += ' ';
  out += op;
  out += ' ';
  print_node(*n.rhs, out);
  out += ')';
}

std::string node_text(const Node& n) {
  std::string s;
  print_node(n, s);
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

[[noreturn]] void domain_fail(const Node& n, const char* what, double at) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", at);
  throw DomainError(std::string(what) + " in '" + node_text(n) + "' (argument " + buf + ")");
}

double eval_value(const Node& n, std::span<const double> p);

Jet2 eval_node(const Node& n, std::span<const double> p, int dim) {
  switch (n.kind) {
    case Kind::Number:
    case Kind::Constant: return Jet2(dim, n.number);
    case Kind::Coord: return Jet2::variable(dim, n.coord, p[static_cast<std::size_t>(n.coord)]);
    case Kind::Neg: return -eval_node(*n.lhs, p, dim);
    case Kind::Add: return eval_node(*n.lhs, p, dim) + eval_node(*n.rhs, p, dim);
    case Kind::Sub: return eval_node(*n.lhs, p, dim) - eval_node(*n.rhs, p, dim);
    case Kind::Mul: return eval_node(*n.lhs, p, dim) * eval_node(*n.rhs, p, dim);
    case Kind::Div: {
      Jet2 a = eval_node(*n.lhs, p, dim);
      Jet2 b = eval_node(*n.rhs, p, dim);
      double u = b.value();
      if (u == 0.0) domain_fail(n, "division by zero", u);
      if (n.rhs->constant) return (1.0 / u) * a;
      return a * b.compose(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u));
    }
    case Kind::Pow: {
      Jet2 a = eval_node(*n.lhs, p, dim);
      double u = a.value();
      if (n.rhs->constant) {
        double c = eval_value(*n.rhs, p);
        bool integral = c == std::floor(c) && std::fabs(c) < 1e9;
        if (!integral && u <= 0.0) domain_fail(n, "non-integer power of nonpositive base", u);
        if (integral && u == 0.0 && c < 0.0) domain_fail(n, "division by zero", u);
        double df = c == 0.0 ? 0.0 : c * std::pow(u, c - 1.0);
        double d2f = (c == 0.0 || c == 1.0) ? 0.0 : c * (c - 1.0) * std::pow(u, c - 2.0);
        return a.compose(std::pow(u, c), df, d2f);
      }
      if (u <= 0.0) domain_fail(n, "variable power of nonpositive base", u);
      Jet2 b = eval_node(*n.rhs, p, dim);
      Jet2 e = b * a.compose(std::log(u), 1.0 / u, -1.0 / (u * u));
      double v = std::exp(e.value());
      return e.compose(v, v, v);
    }
    case Kind::Call: {
      Jet2 a = eval_node(*n.lhs, p, dim);
      double u = a.value();
      switch (n.func) {
        case expr::Func::Sin: return a.compose(std::sin(u), std::cos(u), -std::sin(u));
        case expr::Func::Cos: return a.compose(std::cos(u), -std::sin(u), -std::cos(u));
        case expr::Func::Tan: {
          double c = std::cos(u);
          if (c == 0.0) domain_fail(n, "tan pole", u);
          double t = std::tan(u);
          double sec2 = 1.0 / (c * c);
          return a.compose(t, sec2, 2.0 * t * sec2);
        }
        case expr::Func::Exp: {
          double v = std::exp(u);
          return a.compose(v, v, v);
        }
        case expr::Func::Log:
          if (u <= 0.0) domain_fail(n, "log of nonpositive value", u);
          return a.compose(std::log(u), 1.0 / u, -1.0 / (u * u));
        case expr::Func::Sqrt: {
          if (u <= 0.0) domain_fail(n, "sqrt of nonpositive value", u);
          double s = std::sqrt(u);
          return a.compose(s, 0.5 / s, -0.25 / (s * u));
        }
        case expr::Func::Sinh: return a.compose(std::sinh(u), std::cosh(u), std::sinh(u));
        case expr::Func::Cosh: return a.compose(std::cosh(u), std::sinh(u), std::cosh(u));
        case expr::Func::Tanh: {
          double t = std::tanh(u);
          double s2 = 1.0 - t * t;
          return a.compose(t, s2, -2.0 * t * s2);
        }
      }
      break;
    }
  }
  throw std::logic_error("eval_node: unknown node kind");
}

double eval_value(const Node& n, std::span<const double> p) {
  switch (n.kind) {
    case Kind::Number:
    case Kind::Constant: return n.number;
    case Kind::Coord: return p[static_cast<std::size_t>(n.coord)];
    case Kind::Neg: return -eval_value(*n.lhs, p);
    case Kind::Add: return eval_value(*n.lhs, p) + eval_value(*n.rhs, p);
    case Kind::Sub: return eval_value(*n.lhs, p) - eval_value(*n.rhs, p);
    case Kind::Mul: return eval_value(*n.lhs, p) * eval_value(*n.rhs, p);
    case Kind::Div: {
      double b = eval_value(*n.rhs, p);
      if (b == 0.0) domain_fail(n, "division by zero", b);
      return eval_value(*n.lhs, p) / b;
    }
    case Kind::Pow: {
      double u = eval_value(*n.lhs, p);
      double c = eval_value(*n.rhs, p);
      bool integral = n.rhs->constant && c == std::floor(c) && std::fabs(c) < 1e9;
      if (!integral && u <= 0.0) domain_fail(n, "non-integer power of nonpositive base", u);
      if (u == 0.0 && c < 0.0) domain_fail(n, "division by zero", u);
      return std::pow(u, c);
    }
    case Kind::Call: {
      double u = eval_value(*n.lhs, p);
      switch (n.func) {
        case expr::Func::Sin: return std::sin(u);
        case expr::Func::Cos: return std::cos(u);
        case expr::Func::Tan:
          if (std::cos(u) == 0.0) domain_fail(n, "tan pole", u);
          return std::tan(u);
        case expr::Func::Exp: return std::exp(u);
        case expr::Func::Log:
          if (u <= 0.0) domain_fail(n, "log of nonpositive value", u);
          return std::log(u);
        case expr::Func::Sqrt:
          if (u <= 0.0) domain_fail(n, "sqrt of nonpositive value", u);
          return std::sqrt(u);
        case expr::Func::Sinh: return std::sinh(u);
        case expr::Func::Cosh: return std::cosh(u);
        case expr::Func::Tanh: return std::tanh(u);
      }
      break;
    }
  }
  throw std::logic_error("eval_value: unknown node kind");
}

void check_point(const ScalarField& f, std::span<const double> p) {
  if (p.size() != static_cast<std::size_t>(f.dim()))
    throw std::invalid_argument("point dimension does not match field dimension");
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError("syntax error at byte " + std::to_string(at) + ": " + msg, at);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = expr::add(lhs, parse_term());
      } else if (accept('-')) {
        lhs = expr::sub(lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = expr::mul(lhs, parse_factor());
      } else if (accept('/')) {
        lhs = expr::div(lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (accept('-')) return expr::neg(parse_factor());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return expr::pow(base, parse_factor());
    return base;
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ - start == 1 && text_[start] == '.') fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && is_digit(text_[q])) {
        pos_ = q;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) fail_at("malformed number", start);
    return expr::number(v);
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (is_digit(c) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if (!is_alpha(c)) fail("unexpected character '" + std::string(1, c) + "'");

    std::size_t start = pos_;
    while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]))) ++pos_;
    std::string_view id = text_.substr(start, pos_ - start);

    if (id == "pi") return expr::pi();
    if (id == "e") return expr::euler();
    if (id.size() >= 2 && id[0] == 't' && id[1] >= '1' && id[1] <= '9') {
      bool digits = true;
      for (std::size_t i = 1; i < id.size(); ++i) digits = digits && is_digit(id[i]);
      if (digits) {
        long idx = 0;
        auto res = std::from_chars(id.data() + 1, id.data() + id.size(), idx);
        if (res.ec != std::errc() || idx > dim_) {
          throw ParseError("coordinate index out of range at byte " + std::to_string(start) + ": '" +
                               std::string(id) + "' with dimension " + std::to_string(dim_),
                           start);
        }
        return expr::coord(static_cast<int>(idx - 1));
      }
    }
    static constexpr expr::Func kFuncs[] = {expr::Func::Sin,  expr::Func::Cos,  expr::Func::Tan,
                                            expr::Func::Exp,  expr::Func::Log,  expr::Func::Sqrt,
                                            expr::Func::Sinh, expr::Func::Cosh, expr::Func::Tanh};
    for (expr::Func f : kFuncs) {
      if (id == expr::func_name(f)) {
        expect('(');
        NodePtr arg = parse_expr();
        expect(')');
        return expr::call(f, arg);
      }
    }
    throw ParseError("unknown identifier '" + std::string(id) + "' at byte " + std::to_string(start), start);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Symbolic differentiation

bool is_zero(const NodePtr& n) { return expr::is_number(n, 0.0); }
bool is_one(const NodePtr& n) { return expr::is_number(n, 1.0); }
bool is_num(const NodePtr& n) { return n->kind == Kind::Number; }

NodePtr s_add(NodePtr a, NodePtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_num(a) && is_num(b)) return expr::number(a->number + b->number);
  return expr::add(std::move(a), std::move(b));
}

NodePtr s_neg(NodePtr a) {
  if (is_num(a)) return expr::number(-a->number);
  return expr::neg(std::move(a));
}

NodePtr s_sub(NodePtr a, NodePtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return s_neg(std::move(b));
  if (is_num(a) && is_num(b)) return expr::number(a->number - b->number);
  return expr::sub(std::move(a), std::move(b));
}

NodePtr s_mul(NodePtr a, NodePtr b) {
  if (is_zero(a) || is_zero(b)) return expr::number(0.0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (is_num(a) && is_num(b)) return expr::number(a->number * b->number);
  return expr::mul(std::move(a), std::move(b));
}

NodePtr s_div(NodePtr a, NodePtr b) {
  if (is_zero(a)) return expr::number(0.0);
  if (is_one(b)) return a;
  return expr::div(std::move(a), std::move(b));
}

NodePtr derive(const NodePtr& n, int k) {
  if (n->constant) return expr::number(0.0);
  switch (n->kind) {
    case Kind::Coord: return expr::number(n->coord == k ? 1.0 : 0.0);
    case Kind::Neg: return s_neg(derive(n->lhs, k));
    case Kind::Add: return s_add(derive(n->lhs, k), derive(n->rhs, k));
    case Kind::Sub: return s_sub(derive(n->lhs, k), derive(n->rhs, k));
    case Kind::Mul:
      return s_add(s_mul(derive(n->lhs, k), n->rhs), s_mul(n->lhs, derive(n->rhs, k)));
    case Kind::Div: {
      NodePtr da = derive(n->lhs, k);
      NodePtr db = derive(n->rhs, k);
      NodePtr first = s_div(da, n->rhs);
      if (is_zero(db)) return first;
      return s_sub(first, s_div(s_mul(n->lhs, db), expr::pow(n->rhs, expr::number(2.0))));
    }
    case Kind::Pow: {
      NodePtr da = derive(n->lhs, k);
      if (n->rhs->constant) {
        if (is_zero(da)) return expr::number(0.0);
        NodePtr reduced = is_num(n->rhs) ? expr::number(n->rhs->number - 1.0) : expr::sub(n->rhs, expr::number(1.0));
        NodePtr base_pow = is_one(reduced) ? n->lhs : expr::pow(n->lhs, reduced);
        if (is_zero(reduced)) base_pow = expr::number(1.0);
        return s_mul(s_mul(n->rhs, base_pow), da);
      }
      NodePtr db = derive(n->rhs, k);
      NodePtr inner = s_add(s_mul(db, expr::call(expr::Func::Log, n->lhs)), s_div(s_mul(n->rhs, da), n->lhs));
      return s_mul(n, inner);
    }
    case Kind::Call: {
      NodePtr du = derive(n->lhs, k);
      if (is_zero(du)) return expr::number(0.0);
      const NodePtr& u = n->lhs;
      NodePtr outer;
      switch (n->func) {
        case expr::Func::Sin: outer = expr::call(expr::Func::Cos, u); break;
        case expr::Func::Cos: outer = expr::neg(expr::call(expr::Func::Sin, u)); break;
        case expr::Func::Tan:
          return s_div(du, expr::pow(expr::call(expr::Func::Cos, u), expr::number(2.0)));
        case expr::Func::Exp: outer = n; break;
        case expr::Func::Log: return s_div(du, u);
        case expr::Func::Sqrt: return s_div(du, expr::mul(expr::number(2.0), n));
        case expr::Func::Sinh: outer = expr::call(expr::Func::Cosh, u); break;
        case expr::Func::Cosh: outer = expr::call(expr::Func::Sinh, u); break;
        case expr::Func::Tanh:
          return s_div(du, expr::pow(expr::call(expr::Func::Cosh, u), expr::number(2.0)));
      }
      return s_mul(outer, du);
    }
    default: break;
  }
  return expr::number(0.0);
}

}  // namespace

ScalarField parse(std::string_view text, int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("parse: dimension out of range");
  return {Parser(text, dim).parse_all(), dim};
}

Jet2 eval_jet2(const ScalarField& f, std::span<const double> p) {
  check_point(f, p);
  return eval_node(*f.root(), p, f.dim());
}

double eval(const ScalarField& f, std::span<const double> p) {
  check_point(f, p);
  return eval_value(*f.root(), p);
}

std::string print(const ScalarField& f) { return node_text(*f.root()); }

ScalarField differentiate(const ScalarField& f, int index0) {
  if (index0 < 0 || index0 >= f.dim()) throw std::invalid_argument("differentiate: coordinate out of range");
  return {derive(f.root(), index0), f.dim()};
}

}  // namespace igeo
