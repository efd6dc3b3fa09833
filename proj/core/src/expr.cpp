#include "conf/expr.hpp"

#include "conf/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <unordered_set>

namespace conf {

namespace detail {

enum class Op { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Node {
  Op op = Op::Constant;
  double value = 0.0;  // Constant
  int var = -1;        // Variable
  Func func = Func::Sin;
  std::shared_ptr<const Node> lhs;  // operand for Neg and Call
  std::shared_ptr<const Node> rhs;
};

}  // namespace detail

using detail::Node;
using detail::Op;
using NodePtr = std::shared_ptr<const Node>;

namespace {

constexpr std::array<std::pair<const char*, Func>, 11> kFunctions{{
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
    {"atan", Func::Atan}, {"tanh", Func::Tanh}, {"sinh", Func::Sinh},
    {"cosh", Func::Cosh}, {"exp", Func::Exp},   {"log", Func::Log},
    {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (name == n) return f;
  return std::nullopt;
}

NodePtr make_constant(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = c;
  return n;
}

NodePtr make_variable(int i) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->var = i;
  return n;
}

NodePtr make_unary(Op op, NodePtr a, Func f = Func::Sin) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), end);
  if (v < 0 || s.starts_with('-')) return "(" + s + ")";
  return s;
}

void print(const Node& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.op) {
    case Op::Constant: out += format_number(n.value); return;
    case Op::Variable: out += vars[n.var]; return;
    case Op::Neg:
      out += "(-";
      print(*n.lhs, vars, out);
      out += ")";
      return;
    case Op::Call:
      out += to_string(n.func);
      out += "(";
      print(*n.lhs, vars, out);
      out += ")";
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: {
      const char* sym = n.op == Op::Add   ? " + "
                        : n.op == Op::Sub ? " - "
                        : n.op == Op::Mul ? " * "
                        : n.op == Op::Div ? " / "
                                          : "^";
      out += "(";
      print(*n.lhs, vars, out);
      out += sym;
      print(*n.rhs, vars, out);
      out += ")";
      return;
    }
  }
}

std::string subexpr_text(const Node& n, const std::vector<std::string>& vars) {
  std::string s;
  print(n, vars, s);
  return s;
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars)
      : src_(src), vars_(vars) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= src_.size()) fail("empty expression");
    NodePtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    throw Error(ErrorKind::SyntaxError,
                "syntax error at offset " + std::to_string(at) + ": " + what,
                std::string(src_), at);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = make_binary(Op::Mul, lhs, factor());
      else if (accept('/')) lhs = make_binary(Op::Div, lhs, factor());
      else return lhs;
    }
  }

  NodePtr factor() {
    if (accept('-')) return make_unary(Op::Neg, power());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_binary(Op::Pow, base, factor());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at(start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // not an exponent; leave 'e' for the caller
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) fail_at(start, "malformed number");
    return make_constant(v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);

    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == id) return make_variable(static_cast<int>(i));
    if (id == "pi") return make_constant(std::numbers::pi);

    skip_ws();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (auto f = lookup_function(id)) {
      if (!call) fail("expected '(' after function '" + std::string(id) + "'");
      ++pos_;
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make_unary(Op::Call, arg, *f);
    }
    throw Error(ErrorKind::UnknownIdentifier,
                std::string(call ? "unknown function '" : "unknown identifier '") +
                    std::string(id) + "' at offset " + std::to_string(start),
                std::string(id), start);
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation

struct Deriv {
  double f, df, d2f;
};

[[noreturn]] void domain_error(const Node& n, const std::vector<std::string>& vars,
                               const std::string& why) {
  const std::string text = subexpr_text(n, vars);
  throw Error(ErrorKind::DomainError, why + " in " + text, text);
}

// Univariate derivatives of f at x. `strict` additionally rejects points where
// the value exists but a derivative does not.
Deriv func_derivs(Func f, double x, bool strict, const Node& n,
                  const std::vector<std::string>& vars) {
  switch (f) {
    case Func::Sin: return {std::sin(x), std::cos(x), -std::sin(x)};
    case Func::Cos: return {std::cos(x), -std::sin(x), -std::cos(x)};
    case Func::Tan: {
      if (std::abs(std::cos(x)) <= 1e-15) domain_error(n, vars, "tan evaluated at a pole");
      const double t = std::tan(x);
      const double s = 1.0 + t * t;
      return {t, s, 2.0 * t * s};
    }
    case Func::Atan: {
      const double s = 1.0 + x * x;
      return {std::atan(x), 1.0 / s, -2.0 * x / (s * s)};
    }
    case Func::Tanh: {
      const double t = std::tanh(x);
      const double s = 1.0 - t * t;
      return {t, s, -2.0 * t * s};
    }
    case Func::Sinh: return {std::sinh(x), std::cosh(x), std::sinh(x)};
    case Func::Cosh: return {std::cosh(x), std::sinh(x), std::cosh(x)};
    case Func::Exp: {
      const double e = std::exp(x);
      return {e, e, e};
    }
    case Func::Log:
      if (!(x > 0.0)) domain_error(n, vars, "log of non-positive value");
      return {std::log(x), 1.0 / x, -1.0 / (x * x)};
    case Func::Sqrt: {
      if (x < 0.0 || (strict && x == 0.0))
        domain_error(n, vars, x < 0.0 ? "sqrt of negative value" : "sqrt not differentiable at 0");
      const double r = std::sqrt(x);
      return {r, strict ? 0.5 / r : 0.0, strict ? -0.25 / (r * x) : 0.0};
    }
    case Func::Abs:
      if (strict && x == 0.0) domain_error(n, vars, "abs not differentiable at 0");
      return {std::abs(x), x > 0 ? 1.0 : -1.0, 0.0};
  }
  return {0, 0, 0};
}

std::optional<double> constant_value(const Node& n);

// Integral exponents within this bound are expanded into products.
constexpr double kMaxIntegerExponent = 1024;

std::optional<long> integer_exponent(double c) {
  if (std::isfinite(c) && std::abs(c) <= kMaxIntegerExponent && c == std::floor(c))
    return static_cast<long>(c);
  return std::nullopt;
}

class ValueEvaluator {
 public:
  ValueEvaluator(const Vec& p, const std::vector<std::string>& vars) : p_(p), vars_(vars) {}

  double operator()(const Node& n) const {
    double r = 0.0;
    switch (n.op) {
      case Op::Constant: return n.value;
      case Op::Variable: return p_[n.var];
      case Op::Neg: return -(*this)(*n.lhs);
      case Op::Add: r = (*this)(*n.lhs) + (*this)(*n.rhs); break;
      case Op::Sub: r = (*this)(*n.lhs) - (*this)(*n.rhs); break;
      case Op::Mul: r = (*this)(*n.lhs) * (*this)(*n.rhs); break;
      case Op::Div: {
        const double d = (*this)(*n.rhs);
        if (d == 0.0) domain_error(n, vars_, "division by zero");
        r = (*this)(*n.lhs) / d;
        break;
      }
      case Op::Pow: r = pow(n); break;
      case Op::Call: r = func_derivs(n.func, (*this)(*n.lhs), false, n, vars_).f; break;
    }
    if (!std::isfinite(r)) domain_error(n, vars_, "non-finite result");
    return r;
  }

 private:
  double pow(const Node& n) const {
    const double base = (*this)(*n.lhs);
    if (auto c = constant_value(*n.rhs)) {
      if (auto k = integer_exponent(*c)) {
        if (*k < 0 && base == 0.0) domain_error(n, vars_, "zero raised to a negative power");
        return std::pow(base, static_cast<double>(*k));
      }
      if (!(base > 0.0)) domain_error(n, vars_, "non-positive base with real exponent");
      return std::pow(base, *c);
    }
    if (!(base > 0.0)) domain_error(n, vars_, "non-positive base with variable exponent");
    return std::exp((*this)(*n.rhs) * std::log(base));
  }

  const Vec& p_;
  const std::vector<std::string>& vars_;
};

std::optional<double> constant_value(const Node& n) {
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable: return std::nullopt;
    default: break;
  }
  if (n.lhs && !constant_value(*n.lhs)) return std::nullopt;
  if (n.rhs && !constant_value(*n.rhs)) return std::nullopt;
  static const Vec empty;
  static const std::vector<std::string> no_vars;
  return ValueEvaluator(empty, no_vars)(n);
}

class JetEvaluator {
 public:
  JetEvaluator(const Vec& p, const std::vector<std::string>& vars)
      : p_(p), vars_(vars), m_(static_cast<int>(p.size())) {}

  Jet2 operator()(const Node& n) const {
    Jet2 r;
    switch (n.op) {
      case Op::Constant: return Jet2::constant(n.value, m_);
      case Op::Variable: return Jet2::variable(p_[n.var], n.var, m_);
      case Op::Neg: return -(*this)(*n.lhs);
      case Op::Add: r = (*this)(*n.lhs) + (*this)(*n.rhs); break;
      case Op::Sub: r = (*this)(*n.lhs) - (*this)(*n.rhs); break;
      case Op::Mul: r = (*this)(*n.lhs) * (*this)(*n.rhs); break;
      case Op::Div: r = (*this)(*n.lhs) * reciprocal((*this)(*n.rhs), n); break;
      case Op::Pow: r = pow(n); break;
      case Op::Call: {
        const Jet2 a = (*this)(*n.lhs);
        const Deriv d = func_derivs(n.func, a.value, true, n, vars_);
        r = chain(a, d.f, d.df, d.d2f);
        break;
      }
    }
    if (!r.finite()) domain_error(n, vars_, "non-finite result");
    return r;
  }

 private:
  Jet2 reciprocal(const Jet2& a, const Node& n) const {
    const double x = a.value;
    if (x == 0.0) domain_error(n, vars_, "division by zero");
    return chain(a, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
  }

  static Jet2 int_power(Jet2 base, unsigned long k) {
    Jet2 acc = Jet2::constant(1.0, base.dim());
    bool first = true;
    while (k > 0) {
      if (k & 1UL) {
        acc = first ? base : acc * base;
        first = false;
      }
      k >>= 1UL;
      if (k > 0) base = base * base;
    }
    return acc;
  }

  Jet2 pow(const Node& n) const {
    const Jet2 base = (*this)(*n.lhs);
    if (auto c = constant_value(*n.rhs)) {
      if (auto k = integer_exponent(*c)) {
        if (*k == 0) return Jet2::constant(1.0, m_);
        Jet2 r = int_power(base, static_cast<unsigned long>(std::labs(*k)));
        return *k > 0 ? r : reciprocal(r, n);
      }
      const double x = base.value;
      if (!(x > 0.0)) domain_error(n, vars_, "non-positive base with real exponent");
      const double e = *c;
      const double f = std::pow(x, e);
      return chain(base, f, e * f / x, e * (e - 1.0) * f / (x * x));
    }
    if (!(base.value > 0.0)) domain_error(n, vars_, "non-positive base with variable exponent");
    const double lx = std::log(base.value);
    const Jet2 logb = chain(base, lx, 1.0 / base.value, -1.0 / (base.value * base.value));
    const Jet2 prod = (*this)(*n.rhs) * logb;
    const double e = std::exp(prod.value);
    return chain(prod, e, e, e);
  }

  const Vec& p_;
  const std::vector<std::string>& vars_;
  int m_;
};

NodePtr substitute_node(const NodePtr& n, const std::vector<NodePtr>& repl) {
  switch (n->op) {
    case Op::Constant: return n;
    case Op::Variable: return repl[n->var];
    case Op::Neg:
    case Op::Call: return make_unary(n->op, substitute_node(n->lhs, repl), n->func);
    default:
      return make_binary(n->op, substitute_node(n->lhs, repl), substitute_node(n->rhs, repl));
  }
}

void check_point(const Vec& p, const std::vector<std::string>& vars) {
  if (p.size() != static_cast<Eigen::Index>(vars.size())) {
    throw Error(ErrorKind::DimensionMismatch,
                "point has " + std::to_string(p.size()) + " coordinates, expression expects " +
                    std::to_string(vars.size()));
  }
}

void check_vars(const std::vector<std::string>& vars) {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars) {
    if (!is_identifier(v))
      throw Error(ErrorKind::InvalidArgument, "invalid coordinate name '" + v + "'", v);
    if (lookup_function(v))
      throw Error(ErrorKind::InvalidArgument, "coordinate name '" + v + "' is a function name", v);
    if (!seen.insert(v).second)
      throw Error(ErrorKind::InvalidArgument, "duplicate coordinate name '" + v + "'", v);
  }
}

void require_same_vars(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.vars() != b.vars())
    throw Error(ErrorKind::InvalidArgument, "expressions are over different coordinate lists");
}

}  // namespace

const char* to_string(Func f) noexcept {
  for (const auto& [n, g] : kFunctions)
    if (g == f) return n;
  return "?";
}

ScalarExpr::ScalarExpr(NodePtr root, std::vector<std::string> vars)
    : root_(std::move(root)), vars_(std::move(vars)) {}

ScalarExpr ScalarExpr::parse(std::string_view src, std::vector<std::string> vars) {
  check_vars(vars);
  NodePtr root = Parser(src, vars).parse();
  return {std::move(root), std::move(vars)};
}

ScalarExpr ScalarExpr::constant(double c, std::vector<std::string> vars) {
  check_vars(vars);
  return {make_constant(c), std::move(vars)};
}

ScalarExpr ScalarExpr::variable(std::string_view name, std::vector<std::string> vars) {
  check_vars(vars);
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return {make_variable(static_cast<int>(i)), std::move(vars)};
  throw Error(ErrorKind::UnknownIdentifier, "unknown coordinate '" + std::string(name) + "'",
              std::string(name));
}

ScalarExpr ScalarExpr::call(Func f, const ScalarExpr& arg) {
  return {make_unary(Op::Call, arg.root_, f), arg.vars_};
}

bool ScalarExpr::is_constant() const { return constant_value(*root_).has_value(); }

double ScalarExpr::eval(const Vec& point) const {
  check_point(point, vars_);
  return ValueEvaluator(point, vars_)(*root_);
}

Jet2 ScalarExpr::eval_jet(const Vec& point) const {
  check_point(point, vars_);
  return JetEvaluator(point, vars_)(*root_);
}

std::string ScalarExpr::to_string() const { return subexpr_text(*root_, vars_); }

ScalarExpr ScalarExpr::substitute(const std::vector<ScalarExpr>& replacements) const {
  if (replacements.size() != vars_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "substitution needs " + std::to_string(vars_.size()) + " replacements, got " +
                    std::to_string(replacements.size()));
  }
  if (replacements.empty()) return *this;
  std::vector<NodePtr> repl;
  repl.reserve(replacements.size());
  for (const auto& r : replacements) {
    require_same_vars(replacements.front(), r);
    repl.push_back(r.root_);
  }
  return {substitute_node(root_, repl), replacements.front().vars_};
}

ScalarExpr ScalarExpr::with_vars(std::vector<std::string> vars) const {
  if (vars.size() != vars_.size())
    throw Error(ErrorKind::DimensionMismatch, "renaming must keep the number of coordinates");
  check_vars(vars);
  return {root_, std::move(vars)};
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_vars(a, b);
  return {make_binary(Op::Add, a.root_, b.root_), a.vars_};
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_vars(a, b);
  return {make_binary(Op::Sub, a.root_, b.root_), a.vars_};
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_vars(a, b);
  return {make_binary(Op::Mul, a.root_, b.root_), a.vars_};
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_vars(a, b);
  return {make_binary(Op::Div, a.root_, b.root_), a.vars_};
}

ScalarExpr operator-(const ScalarExpr& a) { return {make_unary(Op::Neg, a.root_), a.vars_}; }

ScalarExpr operator*(double s, const ScalarExpr& a) {
  return {make_binary(Op::Mul, make_constant(s), a.root_), a.vars_};
}

ScalarExpr operator+(const ScalarExpr& a, double c) {
  return {make_binary(Op::Add, a.root_, make_constant(c)), a.vars_};
}

std::vector<std::string> default_coordinate_names(int n, int nu) {
  if (n == 1) return {"x"};
  if (n == 2) return nu == 1 ? std::vector<std::string>{"x", "t"} : std::vector<std::string>{"x", "y"};
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

}  // namespace conf
