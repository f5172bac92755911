#include "algmech/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "algmech/errors.hpp"

namespace algmech {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

bool lookup_func(std::string_view name, Func& out) {
  static const std::pair<std::string_view, Func> table[] = {
      {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp},
      {"log", Func::Log}, {"sqrt", Func::Sqrt}};
  for (const auto& [n, f] : table)
    if (n == name) {
      out = f;
      return true;
    }
  return false;
}

struct Parser {
  std::string_view s;
  const std::vector<std::string>& vars;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < at && i < s.size(); ++i) {
      if (s[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(msg, at, line, column);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos != s.size()) fail("unexpected trailing input", pos);
    return e;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      if (eat('+'))
        e = make_add(e, term());
      else if (eat('-'))
        e = make_sub(e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    while (true) {
      if (eat('*'))
        e = make_mul(e, unary());
      else if (eat('/'))
        e = make_div(e, unary());
      else
        return e;
    }
  }

  ExprPtr unary() {
    if (eat('-')) return make_neg(unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr e = primary();
    if (eat('^')) e = make_pow(e, unary());
    return e;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input", pos);
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number_tok();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return ident_tok();
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'", pos);
      return e;
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }

  ExprPtr number_tok() {
    double v = 0.0;
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{}) fail("invalid number", pos);
    pos += static_cast<std::size_t>(res.ptr - begin);
    return make_number(v);
  }

  ExprPtr ident_tok() {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string name(s.substr(start, pos - start));
    if (eat('(')) {
      Func f;
      if (!lookup_func(name, f)) fail("unknown function '" + name + "'", start);
      ExprPtr arg = expr();
      if (!eat(')')) fail("expected ')'", pos);
      return make_call(f, arg);
    }
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return make_var(static_cast<int>(i), name);
    fail("unknown identifier '" + name + "'", start);
  }
};

// Operator strength used both for parsing-free printing decisions and for
// deciding when a literal needs parentheses.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    case ExprKind::Pow:
      return 4;
    case ExprKind::Number:
      return std::signbit(e.number) ? 3 : 5;
    default:
      return 5;
  }
}

void print_node(std::string& out, const ExprPtr& e, int min_prec) {
  bool parens = precedence(*e) < min_prec;
  if (parens) out += '(';
  switch (e->kind) {
    case ExprKind::Number:
      out += format_double(e->number);
      break;
    case ExprKind::Var:
      out += e->name;
      break;
    case ExprKind::Neg:
      out += '-';
      print_node(out, e->a, 3);
      break;
    case ExprKind::Add:
      print_node(out, e->a, 1);
      out += '+';
      print_node(out, e->b, 2);
      break;
    case ExprKind::Sub:
      print_node(out, e->a, 1);
      out += '-';
      print_node(out, e->b, 2);
      break;
    case ExprKind::Mul:
      print_node(out, e->a, 2);
      out += '*';
      print_node(out, e->b, 3);
      break;
    case ExprKind::Div:
      print_node(out, e->a, 2);
      out += '/';
      print_node(out, e->b, 3);
      break;
    case ExprKind::Pow:
      print_node(out, e->a, 5);
      out += '^';
      print_node(out, e->b, 3);
      break;
    case ExprKind::Call:
      out += func_name(e->func);
      out += '(';
      print_node(out, e->a, 0);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

bool has_vars(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::Var) return true;
  return has_vars(e->a) || has_vars(e->b);
}

bool integral(double v) { return v == std::floor(v) && std::abs(v) < 1e9; }

// Mirrors the multiplication sequence of ipow(Jet2, k) so plain and jet
// evaluation produce bit-identical values.
double ipow_d(double x, long long k) {
  if (k < 0) {
    double p = ipow_d(x, -k);
    if (p == 0.0) throw DomainError("division by zero");
    double iv = 1.0 / p;
    return 1.0 * iv;
  }
  double r = 1.0, base = x;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return r;
}

[[noreturn]] void locate(const DomainError& err, const ExprPtr& e) {
  if (err.located()) throw err;
  throw DomainError(std::string(err.what()) + " in '" + print_expr(e) + "'",
                    true);
}

double eval_num(const ExprPtr& e, const Eigen::VectorXd& xs) {
  switch (e->kind) {
    case ExprKind::Number:
      return e->number;
    case ExprKind::Var:
      if (e->var < 0 || e->var >= xs.size())
        throw std::invalid_argument("variable index out of range: " + e->name);
      return xs(e->var);
    case ExprKind::Neg:
      return -eval_num(e->a, xs);
    case ExprKind::Add:
      return eval_num(e->a, xs) + eval_num(e->b, xs);
    case ExprKind::Sub:
      return eval_num(e->a, xs) - eval_num(e->b, xs);
    case ExprKind::Mul:
      return eval_num(e->a, xs) * eval_num(e->b, xs);
    case ExprKind::Div:
      try {
        double d = eval_num(e->b, xs);
        if (d == 0.0) throw DomainError("division by zero");
        return eval_num(e->a, xs) * (1.0 / d);
      } catch (const DomainError& err) {
        locate(err, e);
      }
    case ExprKind::Pow:
      try {
        double base = eval_num(e->a, xs);
        double ex = eval_num(e->b, xs);
        if (!has_vars(e->b) && integral(ex))
          return ipow_d(base, static_cast<long long>(ex));
        if (base <= 0.0)
          throw DomainError(
              "pow of non-positive base with non-integer exponent");
        return std::exp(ex * std::log(base));
      } catch (const DomainError& err) {
        locate(err, e);
      }
    case ExprKind::Call:
      try {
        double u = eval_num(e->a, xs);
        switch (e->func) {
          case Func::Sin: return std::sin(u);
          case Func::Cos: return std::cos(u);
          case Func::Exp: return std::exp(u);
          case Func::Log:
            if (u <= 0.0) throw DomainError("log of non-positive value");
            return std::log(u);
          case Func::Sqrt:
            if (u < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(u);
        }
        throw DomainError("unknown function");
      } catch (const DomainError& err) {
        locate(err, e);
      }
  }
  throw std::logic_error("unreachable expression kind");
}

Jet2 eval_jet(const ExprPtr& e, const std::vector<Jet2>& xs,
              Eigen::Index dim) {
  switch (e->kind) {
    case ExprKind::Number:
      return Jet2::constant(e->number, dim);
    case ExprKind::Var:
      if (e->var < 0 || e->var >= static_cast<int>(xs.size()))
        throw std::invalid_argument("variable index out of range: " + e->name);
      return xs[static_cast<std::size_t>(e->var)];
    case ExprKind::Neg:
      return -eval_jet(e->a, xs, dim);
    case ExprKind::Add:
      return eval_jet(e->a, xs, dim) + eval_jet(e->b, xs, dim);
    case ExprKind::Sub:
      return eval_jet(e->a, xs, dim) - eval_jet(e->b, xs, dim);
    case ExprKind::Mul:
      return eval_jet(e->a, xs, dim) * eval_jet(e->b, xs, dim);
    case ExprKind::Div:
      try {
        return eval_jet(e->a, xs, dim) * reciprocal(eval_jet(e->b, xs, dim));
      } catch (const DomainError& err) {
        locate(err, e);
      }
    case ExprKind::Pow:
      try {
        Jet2 base = eval_jet(e->a, xs, dim);
        Jet2 ex = eval_jet(e->b, xs, dim);
        if (!has_vars(e->b) && integral(ex.value()))
          return ipow(base, static_cast<long long>(ex.value()));
        if (base.value() <= 0.0)
          throw DomainError(
              "pow of non-positive base with non-integer exponent");
        return exp(ex * log(base));
      } catch (const DomainError& err) {
        locate(err, e);
      }
    case ExprKind::Call:
      try {
        Jet2 u = eval_jet(e->a, xs, dim);
        switch (e->func) {
          case Func::Sin: return sin(u);
          case Func::Cos: return cos(u);
          case Func::Exp: return exp(u);
          case Func::Log: return log(u);
          case Func::Sqrt: return sqrt(u);
        }
        throw DomainError("unknown function");
      } catch (const DomainError& err) {
        locate(err, e);
      }
  }
  throw std::logic_error("unreachable expression kind");
}

void collect_vars(const ExprPtr& e, std::set<int>& out) {
  if (!e) return;
  if (e->kind == ExprKind::Var) out.insert(e->var);
  collect_vars(e->a, out);
  collect_vars(e->b, out);
}

}  // namespace

ExprPtr make_number(double v) {
  Expr e;
  e.kind = ExprKind::Number;
  e.number = v;
  return node(std::move(e));
}

ExprPtr make_var(int index, std::string name) {
  Expr e;
  e.kind = ExprKind::Var;
  e.var = index;
  e.name = std::move(name);
  return node(std::move(e));
}

ExprPtr make_neg(ExprPtr a) {
  Expr e;
  e.kind = ExprKind::Neg;
  e.a = std::move(a);
  return node(std::move(e));
}

namespace {
ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = k;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}
}  // namespace

ExprPtr make_add(ExprPtr a, ExprPtr b) { return binary(ExprKind::Add, std::move(a), std::move(b)); }
ExprPtr make_sub(ExprPtr a, ExprPtr b) { return binary(ExprKind::Sub, std::move(a), std::move(b)); }
ExprPtr make_mul(ExprPtr a, ExprPtr b) { return binary(ExprKind::Mul, std::move(a), std::move(b)); }
ExprPtr make_div(ExprPtr a, ExprPtr b) { return binary(ExprKind::Div, std::move(a), std::move(b)); }
ExprPtr make_pow(ExprPtr a, ExprPtr b) { return binary(ExprKind::Pow, std::move(a), std::move(b)); }

ExprPtr make_call(Func f, ExprPtr a) {
  Expr e;
  e.kind = ExprKind::Call;
  e.func = f;
  e.a = std::move(a);
  return node(std::move(e));
}

ExprPtr parse_expr(std::string_view text,
                   const std::vector<std::string>& vars) {
  Parser p{text, vars};
  return p.parse();
}

std::string print_expr(const ExprPtr& e) {
  std::string out;
  print_node(out, e, 0);
  return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Number:
      return a->number == b->number &&
             std::signbit(a->number) == std::signbit(b->number);
    case ExprKind::Var:
      return a->var == b->var;
    case ExprKind::Call:
      if (a->func != b->func) return false;
      return expr_equal(a->a, b->a);
    case ExprKind::Neg:
      return expr_equal(a->a, b->a);
    default:
      return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

std::vector<int> free_vars(const ExprPtr& e) {
  std::set<int> s;
  collect_vars(e, s);
  return std::vector<int>(s.begin(), s.end());
}

double eval(const ExprPtr& e, const Eigen::VectorXd& values) {
  return eval_num(e, values);
}

Jet2 eval(const ExprPtr& e, const std::vector<Jet2>& values) {
  Eigen::Index dim = values.empty() ? 0 : values.front().dim();
  return eval_jet(e, values, dim);
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace algmech
