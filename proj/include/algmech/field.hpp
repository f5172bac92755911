#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "algmech/expr.hpp"

namespace algmech {

/// A smooth scalar function of a fixed number of ordered real variables,
/// backed by a parsed expression.  Fields are immutable value types.
class ScalarField {
 public:
  ScalarField() = default;

  static ScalarField parse(std::string_view text,
                           const std::vector<std::string>& vars);
  static ScalarField from_ast(ExprPtr ast, int arity);
  static ScalarField constant(double c, int arity);

  int arity() const { return arity_; }
  bool valid() const { return ast_ != nullptr; }
  const ExprPtr& ast() const { return ast_; }
  std::string text() const;

  double operator()(const Eigen::VectorXd& xs) const;
  Jet2 jet(const Eigen::VectorXd& xs) const;

 private:
  ExprPtr ast_;
  int arity_ = 0;
};

/// Maximum absolute deviation between the jet's first and second derivatives
/// and central finite differences of the plain evaluation with step h.
double finite_diff_check(const ScalarField& f, const Eigen::VectorXd& x,
                         double h);

}  // namespace algmech
