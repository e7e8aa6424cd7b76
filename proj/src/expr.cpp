#include "pdeiss/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace pdeiss::expr {

namespace {

constexpr double kPi = 3.14159265358979323846;

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

// ---------------------------------------------------------------- lexer

enum class Tok {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  End
};

struct Token {
  Tok kind;
  std::size_t offset;
  double value = 0.0;    // Number
  std::string ident;     // Ident
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    cur_.offset = pos_;
    if (pos_ >= text_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': cur_.kind = Tok::Plus; ++pos_; return;
      case '-': cur_.kind = Tok::Minus; ++pos_; return;
      case '*': cur_.kind = Tok::Star; ++pos_; return;
      case '/': cur_.kind = Tok::Slash; ++pos_; return;
      case '^': cur_.kind = Tok::Caret; ++pos_; return;
      case '(': cur_.kind = Tok::LParen; ++pos_; return;
      case ')': cur_.kind = Tok::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      cur_.kind = Tok::Ident;
      cur_.ident = std::string(text_.substr(start, pos_ - start));
      return;
    }
    throw SyntaxError("syntax error at offset " + std::to_string(pos_) +
                          ": unexpected character '" + std::string(1, c) + "'",
                      pos_);
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to an identifier or is junk; not ours
      }
    }
    const std::string digits(text_.substr(start, pos_ - start));
    if (digits == ".")
      throw SyntaxError("syntax error at offset " + std::to_string(start) + ": malformed number",
                        start);
    cur_.kind = Tok::Number;
    cur_.value = std::strtod(digits.c_str(), nullptr);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token cur_;
};

const char* tok_name(Tok k) {
  switch (k) {
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

// --------------------------------------------------------------- parser
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | 'pi' | 'z' | 't' | func '(' expr ')' | '(' expr ')'

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Expr run() {
    Expr e = parse_expr();
    if (lex_.peek().kind != Tok::End) fail("expected end of input or an operator");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = lex_.peek();
    throw SyntaxError("syntax error at offset " + std::to_string(t.offset) + ": " + expected +
                          ", got " + tok_name(t.kind),
                      t.offset);
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      Tok k = lex_.peek().kind;
      if (k != Tok::Plus && k != Tok::Minus) return lhs;
      lex_.take();
      Expr rhs = parse_term();
      lhs = binary(k == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub, lhs, rhs);
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      Tok k = lex_.peek().kind;
      if (k != Tok::Star && k != Tok::Slash) return lhs;
      lex_.take();
      Expr rhs = parse_factor();
      lhs = binary(k == Tok::Star ? BinaryOp::Mul : BinaryOp::Div, lhs, rhs);
    }
  }

  Expr parse_factor() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return unary(UnaryOp::Neg, parse_factor());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (lex_.peek().kind == Tok::Caret) {
      lex_.take();
      return binary(BinaryOp::Pow, base, parse_factor());
    }
    return base;
  }

  Expr parse_atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token n = lex_.take();
        return number(n.value);
      }
      case Tok::LParen: {
        lex_.take();
        Expr e = parse_expr();
        if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
        lex_.take();
        return e;
      }
      case Tok::Ident: {
        Token id = lex_.take();
        if (id.ident == "pi") return pi_const();
        if (id.ident == "z") return variable(Var::Z);
        if (id.ident == "t") return variable(Var::T);
        UnaryOp op;
        if (id.ident == "sin") op = UnaryOp::Sin;
        else if (id.ident == "cos") op = UnaryOp::Cos;
        else if (id.ident == "exp") op = UnaryOp::Exp;
        else if (id.ident == "sqrt") op = UnaryOp::Sqrt;
        else if (id.ident == "abs") op = UnaryOp::Abs;
        else
          throw SyntaxError("syntax error at offset " + std::to_string(id.offset) +
                                ": unknown identifier '" + id.ident + "'",
                            id.offset);
        if (lex_.peek().kind != Tok::LParen) fail("expected '(' after function name");
        lex_.take();
        Expr arg = parse_expr();
        if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
        lex_.take();
        return unary(op, arg);
      }
      default:
        fail("expected a number, identifier or '('");
    }
  }

  Lexer lex_;
};

// -------------------------------------------------------------- printing

// Precedence levels for minimal parenthesisation: Add/Sub = 1,
// Mul/Div = 2, Neg = 3, Pow = 4, atoms = 5.
int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.number < 0 ? 3 : 5;  // a negative literal reads like unary minus
    case Node::Kind::Pi:
    case Node::Kind::Variable:
      return 5;
    case Node::Kind::Unary:
      return n.uop == UnaryOp::Neg ? 3 : 5;
    case Node::Kind::Binary:
      switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
  }
  return 5;
}

void format_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void print_node(std::string& out, const Node& n);

void print_child(std::string& out, const Node& child, int min_prec) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(out, child);
    out += ')';
  } else {
    print_node(out, child);
  }
}

void print_node(std::string& out, const Node& n) {
  switch (n.kind) {
    case Node::Kind::Number:
      format_double(out, n.number);
      return;
    case Node::Kind::Pi:
      out += "pi";
      return;
    case Node::Kind::Variable:
      out += (n.var == Var::Z) ? 'z' : 't';
      return;
    case Node::Kind::Unary:
      switch (n.uop) {
        case UnaryOp::Neg:
          out += '-';
          print_child(out, *n.lhs, 3);
          return;
        case UnaryOp::Sin: out += "sin("; break;
        case UnaryOp::Cos: out += "cos("; break;
        case UnaryOp::Exp: out += "exp("; break;
        case UnaryOp::Sqrt: out += "sqrt("; break;
        case UnaryOp::Abs: out += "abs("; break;
      }
      print_node(out, *n.lhs);
      out += ')';
      return;
    case Node::Kind::Binary: {
      // Left-associative operators keep an unparenthesised left child at
      // the same level; the right child needs strictly higher precedence
      // to preserve the tree shape. Pow is the mirror image, and its
      // exponent re-enters the grammar at the unary level (3).
      switch (n.bop) {
        case BinaryOp::Add:
          print_child(out, *n.lhs, 1);
          out += " + ";
          print_child(out, *n.rhs, 2);
          return;
        case BinaryOp::Sub:
          print_child(out, *n.lhs, 1);
          out += " - ";
          print_child(out, *n.rhs, 2);
          return;
        case BinaryOp::Mul:
          print_child(out, *n.lhs, 2);
          out += "*";
          print_child(out, *n.rhs, 3);
          return;
        case BinaryOp::Div:
          print_child(out, *n.lhs, 2);
          out += "/";
          print_child(out, *n.rhs, 3);
          return;
        case BinaryOp::Pow:
          print_child(out, *n.lhs, 5);
          out += "^";
          print_child(out, *n.rhs, 3);
          return;
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------- construction

Expr number(double v) {
  if (v == 0.0) v = 0.0;  // collapse -0 so printing round-trips
  if (v < 0.0) return unary(UnaryOp::Neg, number(-v));
  Node n;
  n.kind = Node::Kind::Number;
  n.number = v;
  return Expr(make_node(std::move(n)));
}

Expr pi_const() {
  Node n;
  n.kind = Node::Kind::Pi;
  return Expr(make_node(std::move(n)));
}

Expr variable(Var v) {
  Node n;
  n.kind = Node::Kind::Variable;
  n.var = v;
  return Expr(make_node(std::move(n)));
}

Expr unary(UnaryOp op, Expr a) {
  Node n;
  n.kind = Node::Kind::Unary;
  n.uop = op;
  n.lhs = a.ptr();
  return Expr(make_node(std::move(n)));
}

Expr binary(BinaryOp op, Expr a, Expr b) {
  Node n;
  n.kind = Node::Kind::Binary;
  n.bop = op;
  n.lhs = a.ptr();
  n.rhs = b.ptr();
  return Expr(make_node(std::move(n)));
}

// ------------------------------------------------------------ operations

Expr parse(std::string_view text) {
  if (text.empty()) throw SyntaxError("syntax error at offset 0: empty expression", 0);
  return Parser(text).run();
}

namespace {

double eval_node(const Node& n, const Bindings& b) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.number;
    case Node::Kind::Pi:
      return kPi;
    case Node::Kind::Variable:
      if (n.var == Var::Z) {
        if (!b.z) throw EvalError("unbound variable 'z'");
        return *b.z;
      }
      if (!b.t) throw EvalError("unbound variable 't'");
      return *b.t;
    case Node::Kind::Unary: {
      double a = eval_node(*n.lhs, b);
      switch (n.uop) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Exp: return std::exp(a);
        case UnaryOp::Sqrt:
          if (a < 0.0) throw EvalError("domain error: sqrt of negative value");
          return std::sqrt(a);
        case UnaryOp::Abs: return std::fabs(a);
      }
      break;
    }
    case Node::Kind::Binary: {
      double a = eval_node(*n.lhs, b);
      double c = eval_node(*n.rhs, b);
      switch (n.bop) {
        case BinaryOp::Add: return a + c;
        case BinaryOp::Sub: return a - c;
        case BinaryOp::Mul: return a * c;
        case BinaryOp::Div:
          if (c == 0.0) throw EvalError("domain error: division by zero");
          return a / c;
        case BinaryOp::Pow:
          if (a == 0.0 && c < 0.0) throw EvalError("domain error: 0 raised to a negative power");
          if (a < 0.0 && c != std::floor(c))
            throw EvalError("domain error: negative base with non-integer exponent");
          return std::pow(a, c);
      }
      break;
    }
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

double evaluate(const Expr& e, const Bindings& b) {
  if (e.empty()) throw EvalError("empty expression");
  return eval_node(e.root(), b);
}

bool depends_on(const Expr& e, Var v) {
  if (e.empty()) return false;
  const Node& n = e.root();
  switch (n.kind) {
    case Node::Kind::Number:
    case Node::Kind::Pi:
      return false;
    case Node::Kind::Variable:
      return n.var == v;
    case Node::Kind::Unary:
      return depends_on(Expr(n.lhs), v);
    case Node::Kind::Binary:
      return depends_on(Expr(n.lhs), v) || depends_on(Expr(n.rhs), v);
  }
  return false;
}

namespace {

Expr diff_node(const Expr& e, Var v) {
  const Node& n = e.root();
  switch (n.kind) {
    case Node::Kind::Number:
    case Node::Kind::Pi:
      return number(0.0);
    case Node::Kind::Variable:
      return number(n.var == v ? 1.0 : 0.0);
    case Node::Kind::Unary: {
      Expr f(n.lhs);
      Expr df = diff_node(f, v);
      switch (n.uop) {
        case UnaryOp::Neg:
          return unary(UnaryOp::Neg, df);
        case UnaryOp::Sin:
          return binary(BinaryOp::Mul, unary(UnaryOp::Cos, f), df);
        case UnaryOp::Cos:
          return unary(UnaryOp::Neg, binary(BinaryOp::Mul, unary(UnaryOp::Sin, f), df));
        case UnaryOp::Exp:
          return binary(BinaryOp::Mul, unary(UnaryOp::Exp, f), df);
        case UnaryOp::Sqrt:
          return binary(BinaryOp::Div, df,
                        binary(BinaryOp::Mul, number(2.0), unary(UnaryOp::Sqrt, f)));
        case UnaryOp::Abs:
          // d|f| = f/|f| * f', valid away from zeros of f.
          return binary(BinaryOp::Mul, binary(BinaryOp::Div, f, unary(UnaryOp::Abs, f)), df);
      }
      break;
    }
    case Node::Kind::Binary: {
      Expr f(n.lhs), g(n.rhs);
      switch (n.bop) {
        case BinaryOp::Add:
          return binary(BinaryOp::Add, diff_node(f, v), diff_node(g, v));
        case BinaryOp::Sub:
          return binary(BinaryOp::Sub, diff_node(f, v), diff_node(g, v));
        case BinaryOp::Mul:
          return binary(BinaryOp::Add, binary(BinaryOp::Mul, diff_node(f, v), g),
                        binary(BinaryOp::Mul, f, diff_node(g, v)));
        case BinaryOp::Div:
          return binary(
              BinaryOp::Div,
              binary(BinaryOp::Sub, binary(BinaryOp::Mul, diff_node(f, v), g),
                     binary(BinaryOp::Mul, f, diff_node(g, v))),
              binary(BinaryOp::Pow, g, number(2.0)));
        case BinaryOp::Pow: {
          if (depends_on(g, Var::Z) || depends_on(g, Var::T))
            throw DerivativeError(
                "cannot differentiate f^g with a non-constant exponent; rewrite the expression");
          // d f^c = c * f^(c-1) * f'
          return binary(
              BinaryOp::Mul,
              binary(BinaryOp::Mul, g,
                     binary(BinaryOp::Pow, f, binary(BinaryOp::Sub, g, number(1.0)))),
              diff_node(f, v));
        }
      }
      break;
    }
  }
  throw DerivativeError("corrupt expression node");
}

}  // namespace

Expr differentiate(const Expr& e, Var v) {
  if (e.empty()) throw DerivativeError("empty expression");
  return diff_node(e, v);
}

std::string to_string(const Expr& e) {
  std::string out;
  if (!e.empty()) print_node(out, e.root());
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  const Node& x = a.root();
  const Node& y = b.root();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Node::Kind::Number:
      return x.number == y.number;
    case Node::Kind::Pi:
      return true;
    case Node::Kind::Variable:
      return x.var == y.var;
    case Node::Kind::Unary:
      return x.uop == y.uop && structurally_equal(Expr(x.lhs), Expr(y.lhs));
    case Node::Kind::Binary:
      return x.bop == y.bop && structurally_equal(Expr(x.lhs), Expr(y.lhs)) &&
             structurally_equal(Expr(x.rhs), Expr(y.rhs));
  }
  return false;
}

}  // namespace pdeiss::expr
