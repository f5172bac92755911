#include "algmech/tulczyjew.hpp"

#include <stdexcept>

namespace algmech {

namespace {

Eigen::VectorXd stack_point(const PhasePoint& p) {
  Eigen::VectorXd z(p.x.size() + p.fiber.size());
  z << p.x, p.fiber;
  return z;
}

void require_side(const PhasePoint& p, Side side, const char* what) {
  if (p.side != side) {
    throw std::invalid_argument(std::string(what) +
                                " expects a point on the other total space");
  }
}

void require_arity(const AlgebroidModel& M, const ScalarField& f,
                   const char* what) {
  if (f.arity() != M.n() + M.m()) {
    throw std::invalid_argument(std::string(what) +
                                ": field arity must be n + m");
  }
}

}  // namespace

double pairing(const Covector& theta, const TangentVec& X) {
  if (theta.p.size() != X.dx.size() || theta.pi.size() != X.dfiber.size()) {
    throw std::invalid_argument("pairing: mismatched component sizes");
  }
  return theta.p.dot(X.dx) + theta.pi.dot(X.dfiber);
}

Covector differential(const AlgebroidModel& M, const ScalarField& f,
                      const PhasePoint& p) {
  M.check(p);
  require_arity(M, f, "differential");
  const Jet2 j = f.jet(stack_point(p));
  Covector theta;
  theta.base = p;
  theta.p = j.grad().head(M.n());
  theta.pi = j.grad().tail(M.m());
  return theta;
}

Eigen::VectorXd vertical_derivative(const AlgebroidModel& M,
                                    const ScalarField& f,
                                    const PhasePoint& p) {
  M.check(p);
  require_arity(M, f, "vertical_derivative");
  const Jet2 j = f.jet(stack_point(p));
  return j.grad().tail(M.m());
}

PhasePoint legendre(const AlgebroidModel& M, const ScalarField& L,
                    const PhasePoint& a) {
  require_side(a, Side::E, "legendre");
  return M.point(Side::Dual, a.x, vertical_derivative(M, L, a));
}

TangentVec tangent_legendre(const AlgebroidModel& M, const ScalarField& L,
                            const TangentVec& X) {
  const PhasePoint& a = X.base;
  require_side(a, Side::E, "tangent_legendre");
  M.check(a);
  require_arity(M, L, "tangent_legendre");
  const int n = M.n();
  const int m = M.m();
  const Jet2 j = L.jet(stack_point(a));
  const Eigen::MatrixXd& H = j.hess();

  TangentVec out;
  out.base = M.point(Side::Dual, a.x, j.grad().tail(m));
  out.dx = X.dx;
  // d(xi_a) = sum_i d_i d_{y_a} L dx^i + sum_b d_{y_b} d_{y_a} L dy^b.
  out.dfiber = H.block(0, n, n, m).transpose() * X.dx +
               H.block(n, n, m, m).transpose() * X.dfiber;
  return out;
}

Eigen::MatrixXd lambda_matrix(const AlgebroidModel& M, const PhasePoint& p) {
  require_side(p, Side::Dual, "lambda_matrix");
  M.check(p);
  const int n = M.n();
  const int m = M.m();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n + m, n + m);

  // Momentum-momentum block: the bi-vector on (d xi_a, d xi_b) is the
  // bracket of the corresponding frame sections paired with the momentum.
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const double val =
          bracket(M, M.frame_section(a), M.frame_section(b), p.x).dot(p.fiber);
      P(n + a, n + b) = val;
      P(n + b, n + a) = -val;
    }
  }

  // Momentum-base block: the bi-vector on (d xi_a, d x^i) is the anchor
  // derivative of the coordinate function along the frame section; the
  // (x, xi) block is its negative by skew-symmetry.
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd ea = Eigen::VectorXd::Zero(m);
    ea[a] = 1.0;
    for (int i = 0; i < n; ++i) {
      ScalarField xi_coord = ScalarField::from_ast(
          make_var(i, "x" + std::to_string(i + 1)), n);
      const double val = de_function(M, xi_coord, ea, p.x);
      P(n + a, i) = val;
      P(i, n + a) = -val;
    }
  }
  return P;
}

TangentVec lambda_contraction(const AlgebroidModel& M, const Covector& theta) {
  require_side(theta.base, Side::Dual, "lambda_contraction");
  const int n = M.n();
  const int m = M.m();
  if (theta.p.size() != n || theta.pi.size() != m) {
    throw std::invalid_argument("lambda_contraction: covector sizes");
  }
  const Eigen::MatrixXd P = lambda_matrix(M, theta.base);
  Eigen::VectorXd c(n + m);
  c << theta.p, theta.pi;
  // The field attached to theta satisfies X^v = sum_u P(u, v) theta_u.
  const Eigen::VectorXd X = P.transpose() * c;
  TangentVec out;
  out.base = theta.base;
  out.dx = X.head(n);
  out.dfiber = X.tail(m);
  return out;
}

TangentVec hamiltonian_field(const AlgebroidModel& M, const ScalarField& H,
                             const PhasePoint& p) {
  require_side(p, Side::Dual, "hamiltonian_field");
  return lambda_contraction(M, differential(M, H, p));
}

TangentVec forced_hamiltonian_field(const AlgebroidModel& M,
                                    const ScalarField& H,
                                    const std::vector<ScalarField>& force,
                                    const PhasePoint& p) {
  if (static_cast<int>(force.size()) != M.m()) {
    throw std::invalid_argument("forced_hamiltonian_field: need m components");
  }
  TangentVec X = hamiltonian_field(M, H, p);
  const Eigen::VectorXd z = stack_point(p);
  for (int a = 0; a < M.m(); ++a) {
    require_arity(M, force[a], "forced_hamiltonian_field");
    X.dfiber[a] -= force[a](z);
  }
  return X;
}

Covector r_map(const AlgebroidModel& M, const Covector& theta) {
  require_side(theta.base, Side::E, "r_map");
  M.check(theta.base);
  if (theta.p.size() != M.n() || theta.pi.size() != M.m()) {
    throw std::invalid_argument("r_map: covector sizes");
  }
  Covector out;
  out.base = M.point(Side::Dual, theta.base.x, theta.pi);
  out.p = -theta.p;
  out.pi = theta.base.fiber;
  return out;
}

Covector r_inv(const AlgebroidModel& M, const Covector& theta) {
  require_side(theta.base, Side::Dual, "r_inv");
  M.check(theta.base);
  if (theta.p.size() != M.n() || theta.pi.size() != M.m()) {
    throw std::invalid_argument("r_inv: covector sizes");
  }
  Covector out;
  out.base = M.point(Side::E, theta.base.x, theta.pi);
  out.p = -theta.p;
  out.pi = theta.base.fiber;
  return out;
}

TangentVec epsilon_map(const AlgebroidModel& M, const Covector& theta) {
  return lambda_contraction(M, r_map(M, theta));
}

Eigen::VectorXd el_residual_tt(const AlgebroidModel& M, const ScalarField& L,
                               const PhasePoint& a, const TangentVec& X) {
  require_side(a, Side::E, "el_residual_tt");
  M.check(a);
  if (X.base.x != a.x || X.base.fiber != a.fiber || X.base.side != a.side) {
    throw std::invalid_argument("el_residual_tt: X must be based at a");
  }
  const TangentVec lhs = tangent_legendre(M, L, X);
  const TangentVec rhs = epsilon_map(M, differential(M, L, a));
  Eigen::VectorXd res(M.n() + M.m());
  res << lhs.dx - rhs.dx, lhs.dfiber - rhs.dfiber;
  return res;
}

Eigen::VectorXd admissibility_residual(const AlgebroidModel& M,
                                       const PhasePoint& a,
                                       const TangentVec& X) {
  require_side(a, Side::E, "admissibility_residual");
  M.check(a);
  if (X.dx.size() != M.n() || X.dfiber.size() != M.m()) {
    throw std::invalid_argument("admissibility_residual: tangent sizes");
  }
  return anchor(M, a.fiber, a.x) - X.dx;
}

}  // namespace algmech
