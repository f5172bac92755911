#pragma once

// Shared helpers for the test suites: deterministic random sampling and a
// random polynomial AST generator used by round-trip and derivative checks.

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "algmech/expr.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

inline Eigen::VectorXd random_vec(std::mt19937_64& rng, int dim,
                                  double lo = -1.0, double hi = 1.0) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

// Largest absolute entry, with the empty vector counting as zero (Eigen's
// maxCoeff rejects empty operands, which zero-dimensional bases produce).
inline double max_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Random polynomial of total degree <= max_deg in nvars variables with
// coefficients in [-2, 2]; negative coefficients are built with an explicit
// unary minus so printing round-trips structurally.
inline algmech::ExprPtr random_poly_ast(std::mt19937_64& rng, int nvars,
                                        int max_deg,
                                        const std::vector<std::string>& names,
                                        int terms = 4) {
  using namespace algmech;
  ExprPtr sum;
  for (int t = 0; t < terms; ++t) {
    double c = uniform(rng, -2.0, 2.0);
    ExprPtr term = c < 0 ? make_neg(make_number(-c)) : make_number(c);
    int deg = uniform_int(rng, 0, max_deg);
    for (int d = 0; d < deg;) {
      int v = uniform_int(rng, 0, nvars - 1);
      int k = uniform_int(rng, 1, deg - d);
      ExprPtr factor = make_var(v, names[static_cast<std::size_t>(v)]);
      if (k > 1) factor = make_pow(factor, make_number(k));
      term = make_mul(term, factor);
      d += k;
    }
    sum = sum ? make_add(sum, term) : term;
  }
  return sum;
}

inline std::vector<std::string> var_names(const std::string& stem, int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

}  // namespace testsupport
