#pragma once

#include "conf/jet.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace conf {

enum class Func { Sin, Cos, Tan, Atan, Tanh, Sinh, Cosh, Exp, Log, Sqrt, Abs };

const char* to_string(Func f) noexcept;

namespace detail {
struct Node;
}

/// Smooth real function of an ordered list of named coordinates, held as an
/// immutable expression tree. Subtrees are shared between expressions, so
/// copies and substitutions are cheap.
///
/// Grammar (whitespace insignificant):
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := ("-")? power
///   power  := atom ("^" factor)?
///   atom   := number | name | name "(" expr ")" | "(" expr ")"
/// Names resolve to coordinates first, then to the constant `pi`; function
/// names are sin cos tan atan tanh sinh cosh exp log sqrt abs.
class ScalarExpr {
 public:
  /// Throws SyntaxError (with byte offset) or UnknownIdentifier.
  static ScalarExpr parse(std::string_view src, std::vector<std::string> vars);

  static ScalarExpr constant(double c, std::vector<std::string> vars);
  static ScalarExpr variable(std::string_view name, std::vector<std::string> vars);
  static ScalarExpr call(Func f, const ScalarExpr& arg);

  const std::vector<std::string>& vars() const noexcept { return vars_; }
  int arity() const noexcept { return static_cast<int>(vars_.size()); }

  /// True when the tree references no coordinate.
  bool is_constant() const;

  /// Plain value. Throws DomainError where the value itself is undefined.
  double eval(const Vec& point) const;

  /// Value, gradient and Hessian by second-order jet propagation. Stricter
  /// than eval: points where a derivative does not exist (abs at 0, sqrt at
  /// 0) also raise DomainError.
  Jet2 eval_jet(const Vec& point) const;

  /// Text that parses back to an expression evaluating identically.
  std::string to_string() const;

  /// Replaces coordinate i by replacements[i]. All replacements must share
  /// one coordinate list, which becomes the coordinate list of the result.
  ScalarExpr substitute(const std::vector<ScalarExpr>& replacements) const;

  /// Same tree over a renamed coordinate list of equal length.
  ScalarExpr with_vars(std::vector<std::string> vars) const;

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a);
  friend ScalarExpr operator*(double s, const ScalarExpr& a);
  friend ScalarExpr operator+(const ScalarExpr& a, double c);

 private:
  using NodePtr = std::shared_ptr<const detail::Node>;
  ScalarExpr(NodePtr root, std::vector<std::string> vars);

  NodePtr root_;
  std::vector<std::string> vars_;
};

/// Default coordinate names for an n-dimensional space: n == 2 gives
/// (x, t) for Lorentzian and (x, y) otherwise; larger n gives x1..xn.
std::vector<std::string> default_coordinate_names(int n, int nu);

}  // namespace conf
