#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pdeiss/errors.hpp"

namespace pdeiss::expr {

/// Raised by parse() with the byte offset of the offending token.
struct SyntaxError : ConfigError {
  SyntaxError(std::string msg, std::size_t off)
      : ConfigError(std::move(msg)), offset(off) {}
  std::size_t offset;
};

/// Raised by evaluate(): unbound variable or a domain violation
/// (division by zero, sqrt of a negative, 0^negative).
struct EvalError : Error {
  using Error::Error;
};

/// Raised by differentiate() for f^g with a non-constant exponent.
struct DerivativeError : Error {
  using Error::Error;
};

enum class Var { Z, T };

enum class UnaryOp { Neg, Sin, Cos, Exp, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable AST node. Expressions are shared freely across threads once
/// built; every operation on them is pure.
struct Node {
  enum class Kind { Number, Pi, Variable, Unary, Binary } kind;
  double number = 0.0;
  Var var = Var::Z;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  NodePtr lhs, rhs;  // Unary uses lhs only
};

/// Value-semantic handle to an immutable expression tree.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr n) : node_(std::move(n)) {}
  const Node& root() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  bool empty() const { return node_ == nullptr; }

 private:
  NodePtr node_;
};

/// Variable bindings for evaluation; either slot may be left unbound.
struct Bindings {
  std::optional<double> z;
  std::optional<double> t;
  static Bindings at_z(double zv) { return {zv, std::nullopt}; }
  static Bindings at(double zv, double tv) { return {zv, tv}; }
  static Bindings at_t(double tv) { return {std::nullopt, tv}; }
};

/// Grammar (precedence low to high): `+ -` < `* /` < unary minus < `^`,
/// with `^` right-associative and its exponent allowed to carry a sign.
Expr parse(std::string_view text);

double evaluate(const Expr& e, const Bindings& b);

/// Exact symbolic derivative; f^g requires a variable-free exponent g.
Expr differentiate(const Expr& e, Var v);

/// Minimal-parenthesis rendering; re-parsing yields a structurally
/// identical tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// True if any subterm references the variable.
bool depends_on(const Expr& e, Var v);

// Construction helpers (used by differentiate and the test generators).
Expr number(double v);
Expr pi_const();
Expr variable(Var v);
Expr unary(UnaryOp op, Expr a);
Expr binary(BinaryOp op, Expr a, Expr b);

}  // namespace pdeiss::expr
