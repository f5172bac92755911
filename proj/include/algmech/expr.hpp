#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "algmech/jet.hpp"

namespace algmech {

// Arithmetic expression DSL over named scalar variables.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            right-associative
//   primary := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'
//
// FUNC is one of sin, cos, exp, log, sqrt.  '^' binds tighter than unary
// minus, so -x1^2 parses as -(x1^2).

enum class ExprKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Exp, Log, Sqrt };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;    // Number
  int var = -1;           // Var: index into the declared variable list
  std::string name;       // Var: source spelling
  Func func = Func::Sin;  // Call
  ExprPtr a, b;           // operands; only a for Neg and Call
};

// Programmatic AST builders.
ExprPtr make_number(double v);
ExprPtr make_var(int index, std::string name);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr a, ExprPtr b);
ExprPtr make_call(Func f, ExprPtr a);

/// Parses text against a declared variable list.  Every identifier must be a
/// declared variable or a function name; anything else is a ParseError with
/// byte offset and 1-based line/column.
ExprPtr parse_expr(std::string_view text, const std::vector<std::string>& vars);

/// Precedence-aware rendering; printing a parsed AST and re-parsing yields a
/// structurally equal tree.
std::string print_expr(const ExprPtr& e);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Indices of variables that actually occur, sorted and unique.
std::vector<int> free_vars(const ExprPtr& e);

/// Plain evaluation.  Throws DomainError for division by zero, log/sqrt
/// outside their domain and fractional powers of non-positive bases; the
/// message names the offending sub-expression.
double eval(const ExprPtr& e, const Eigen::VectorXd& values);

/// Jet evaluation; the value component agrees bit-for-bit with the plain
/// evaluation at the same point.
Jet2 eval(const ExprPtr& e, const std::vector<Jet2>& values);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace algmech
