#pragma once

// Closed-form scalar fields over chart coordinates t1..tn, evaluated together
// with exact first and second partial derivatives.

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace igeo {

/// Largest chart dimension supported anywhere in the library.
inline constexpr int kMaxDim = 8;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  /// Byte offset into the parsed text.
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised at evaluation time (log of a nonpositive value, division by zero, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Value, gradient and Hessian of a scalar field at a point.
///
/// The Hessian is stored as a packed upper triangle, so it is symmetric
/// by construction.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(int dim, double value = 0.0) : dim_(dim), value_(value) {}

  static Jet2 variable(int dim, int index, double value) {
    Jet2 j(dim, value);
    j.grad_[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  int dim() const noexcept { return dim_; }
  double value() const noexcept { return value_; }
  double grad(int i) const noexcept { return grad_[static_cast<std::size_t>(i)]; }
  double hess(int i, int j) const noexcept { return hess_[packed(i, j)]; }

  double& value() noexcept { return value_; }
  double& grad(int i) noexcept { return grad_[static_cast<std::size_t>(i)]; }
  double& hess(int i, int j) noexcept { return hess_[packed(i, j)]; }

  friend Jet2 operator+(const Jet2& a, const Jet2& b);
  friend Jet2 operator-(const Jet2& a, const Jet2& b);
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator*(double s, const Jet2& a);
  friend Jet2 operator-(const Jet2& a);

  /// Composition f(u) given f(u), f'(u), f''(u).
  Jet2 compose(double f, double df, double d2f) const;

 private:
  static std::size_t packed(int i, int j) noexcept {
    if (i > j) std::swap(i, j);
    // Row i of the upper triangle starts after rows 0..i-1.
    return static_cast<std::size_t>(i * kMaxDim - i * (i - 1) / 2 + (j - i));
  }

  int dim_ = 0;
  double value_ = 0.0;
  std::array<double, kMaxDim> grad_{};
  std::array<double, kMaxDim*(kMaxDim + 1) / 2> hess_{};
};

namespace expr {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

enum class Kind { Number, Constant, Coord, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression node. `constant` is true when no coordinate occurs
/// anywhere below this node.
struct Node {
  Kind kind = Kind::Number;
  double number = 0.0;     // Number, Constant
  int coord = 0;           // Coord (0-based)
  Func func = Func::Sin;   // Call
  char constant_name = 0;  // Constant: 'p' (pi) or 'e'
  NodePtr lhs;             // unary operand / left operand / call argument
  NodePtr rhs;
  bool constant = true;
};

NodePtr number(double v);
NodePtr pi();
NodePtr euler();
NodePtr coord(int index0);
NodePtr neg(NodePtr a);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr pow(NodePtr a, NodePtr b);
NodePtr call(Func f, NodePtr a);

std::string_view func_name(Func f);

/// True when `n` is a Number node holding exactly `v`.
bool is_number(const NodePtr& n, double v);

}  // namespace expr

/// A parsed scalar field bound to a chart dimension.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(expr::NodePtr root, int dim);

  static ScalarField constant(double v, int dim) { return {expr::number(v), dim}; }

  const expr::NodePtr& root() const noexcept { return root_; }
  int dim() const noexcept { return dim_; }
  bool is_zero() const { return expr::is_number(root_, 0.0); }

 private:
  expr::NodePtr root_;
  int dim_ = 0;
};

/// Parses `text` with coordinates t1..t<dim>.
///
/// Grammar (whitespace insignificant, '#' starts a line comment):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' factor)?
///   atom   := NUMBER | COORD | FUNC '(' expr ')' | '(' expr ')' | 'pi' | 'e'
ScalarField parse(std::string_view text, int dim);

/// Exact value, gradient and Hessian at `p` (size dim).
Jet2 eval_jet2(const ScalarField& f, std::span<const double> p);

/// Value only.
double eval(const ScalarField& f, std::span<const double> p);

/// Fully parenthesized text that parses back to an equivalent tree.
std::string print(const ScalarField& f);

/// Symbolic partial derivative with respect to coordinate `index0` (0-based),
/// with zero/one folding.
ScalarField differentiate(const ScalarField& f, int index0);

}  // namespace igeo
