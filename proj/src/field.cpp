#include "algmech/field.hpp"

#include <algorithm>
#include <stdexcept>

#include "algmech/errors.hpp"

namespace algmech {

ScalarField ScalarField::parse(std::string_view text,
                               const std::vector<std::string>& vars) {
  ScalarField f;
  f.ast_ = parse_expr(text, vars);
  f.arity_ = static_cast<int>(vars.size());
  return f;
}

ScalarField ScalarField::from_ast(ExprPtr ast, int arity) {
  std::vector<int> used = free_vars(ast);
  if (!used.empty() && used.back() >= arity)
    throw std::invalid_argument("expression refers to variables beyond arity");
  ScalarField f;
  f.ast_ = std::move(ast);
  f.arity_ = arity;
  return f;
}

ScalarField ScalarField::constant(double c, int arity) {
  return from_ast(make_number(c), arity);
}

std::string ScalarField::text() const {
  return ast_ ? print_expr(ast_) : std::string();
}

double ScalarField::operator()(const Eigen::VectorXd& xs) const {
  if (xs.size() != arity_)
    throw std::invalid_argument("field arity mismatch");
  return eval(ast_, xs);
}

Jet2 ScalarField::jet(const Eigen::VectorXd& xs) const {
  if (xs.size() != arity_)
    throw std::invalid_argument("field arity mismatch");
  std::vector<Jet2> vars;
  vars.reserve(static_cast<std::size_t>(arity_));
  for (int i = 0; i < arity_; ++i)
    vars.push_back(Jet2::variable(xs(i), arity_, i));
  return eval(ast_, vars);
}

double finite_diff_check(const ScalarField& f, const Eigen::VectorXd& x,
                         double h) {
  const int d = f.arity();
  Jet2 j = f.jet(x);
  double dev = 0.0;
  const double f0 = f(x);
  Eigen::VectorXd p = x;
  for (int i = 0; i < d; ++i) {
    p = x;
    p(i) = x(i) + h;
    double fp = f(p);
    p(i) = x(i) - h;
    double fm = f(p);
    dev = std::max(dev, std::abs((fp - fm) / (2.0 * h) - j.grad()(i)));
    dev = std::max(dev,
                   std::abs((fp - 2.0 * f0 + fm) / (h * h) - j.hess()(i, i)));
    for (int k = i + 1; k < d; ++k) {
      p = x;
      p(i) += h;
      p(k) += h;
      double fpp = f(p);
      p(k) -= 2.0 * h;
      double fpm = f(p);
      p(i) -= 2.0 * h;
      double fmm = f(p);
      p(k) += 2.0 * h;
      double fmp = f(p);
      double fd = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      dev = std::max(dev, std::abs(fd - j.hess()(i, k)));
    }
  }
  return dev;
}

}  // namespace algmech
