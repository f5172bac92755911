#include "algmech/prolongation.hpp"

#include <stdexcept>

#include "algmech/errors.hpp"

namespace algmech {

namespace {

Eigen::VectorXd stack_point(const PhasePoint& p) {
  Eigen::VectorXd z(p.x.size() + p.fiber.size());
  z << p.x, p.fiber;
  return z;
}

Eigen::VectorXd stack_vec(const TangentVec& X) {
  Eigen::VectorXd z(X.dx.size() + X.dfiber.size());
  z << X.dx, X.dfiber;
  return z;
}

void require_slots(const AlgebroidModel& M, const Eigen::VectorXd& e,
                   const Eigen::VectorXd& w, const char* what) {
  if (e.size() != M.m() || w.size() != M.m()) {
    throw std::invalid_argument(std::string(what) +
                                ": slots must have m components");
  }
}

void require_same_point(const PhasePoint& a, const PhasePoint& b,
                        const char* what) {
  if (a.side != b.side || a.x != b.x || a.fiber != b.fiber) {
    throw std::invalid_argument(std::string(what) +
                                ": arguments must share a base point");
  }
}

void require_dual(const PhasePoint& p, const char* what) {
  if (p.side != Side::Dual) {
    throw std::invalid_argument(std::string(what) +
                                " lives on the prolongation over the dual");
  }
}

}  // namespace

TangentVec include_vector(const AlgebroidModel& M, const ProlongVector& v) {
  M.check(v.base);
  require_slots(M, v.e, v.w, "include_vector");
  TangentVec X;
  X.base = v.base;
  X.dx = anchor(M, v.e, v.base.x);
  X.dfiber = v.w;
  return X;
}

ProlongCovector dual_project(const AlgebroidModel& M,
                             const Eigen::VectorXd& phi,
                             const Covector& theta) {
  M.check(theta.base);
  if (phi.size() != M.m() || theta.p.size() != M.n() ||
      theta.pi.size() != M.m()) {
    throw std::invalid_argument("dual_project: component sizes");
  }
  ProlongCovector c;
  c.base = theta.base;
  c.alpha = phi + M.rho(theta.base.x).transpose() * theta.p;
  c.beta = theta.pi;
  return c;
}

ProlongCovector dual_project(const AlgebroidModel& M, const Covector& theta) {
  return dual_project(M, Eigen::VectorXd::Zero(M.m()), theta);
}

double d_prolong_function(const AlgebroidModel& M, const ScalarField& f,
                          const ProlongVector& v) {
  if (f.arity() != M.n() + M.m()) {
    throw std::invalid_argument("d_prolong_function: field arity");
  }
  const TangentVec X = include_vector(M, v);
  return f.jet(stack_point(v.base)).grad().dot(stack_vec(X));
}

double prolong_form_value(const AlgebroidModel& M, const ProlongForm& form,
                          const ProlongVector& v) {
  M.check(v.base);
  require_slots(M, v.e, v.w, "prolong_form_value");
  const Eigen::VectorXd z = stack_point(v.base);
  double total = 0.0;
  for (const auto& [f, s] : form.pairing_terms) {
    double pair_val = 0.0;
    for (int a = 0; a < M.m(); ++a) {
      pair_val += s.coeff[static_cast<size_t>(a)](v.base.x) * v.e[a];
    }
    total += f(z) * pair_val;
  }
  if (!form.theta.empty()) {
    const TangentVec X = include_vector(M, v);
    const Eigen::VectorXd Xz = stack_vec(X);
    for (int u = 0; u < M.n() + M.m(); ++u) {
      total += form.theta[static_cast<size_t>(u)](z) * Xz[u];
    }
  }
  return total;
}

double d_prolong_oneform(const AlgebroidModel& M, const ProlongForm& form,
                         const ProlongVector& v, const ProlongVector& v2) {
  M.check(v.base);
  require_same_point(v.base, v2.base, "d_prolong_oneform");
  require_slots(M, v.e, v.w, "d_prolong_oneform");
  require_slots(M, v2.e, v2.w, "d_prolong_oneform");
  const int n = M.n();
  const int m = M.m();
  const Eigen::VectorXd z = stack_point(v.base);
  const TangentVec X = include_vector(M, v);
  const TangentVec X2 = include_vector(M, v2);
  const Eigen::VectorXd Xz = stack_vec(X);
  const Eigen::VectorXd X2z = stack_vec(X2);

  // Bracket of the constant-coefficient extensions of the e-slots.
  const Eigen::VectorXd br =
      bracket(M, M.constant_section(v.e), M.constant_section(v2.e), v.base.x);

  double total = 0.0;
  for (const auto& [f, s] : form.pairing_terms) {
    if (f.arity() != n + m) {
      throw std::invalid_argument("d_prolong_oneform: pairing term arity");
    }
    const Jet2 jf = f.jet(z);
    double pair1 = 0.0, pair2 = 0.0, pair_br = 0.0;
    Eigen::VectorXd dpair1 = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd dpair2 = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < m; ++a) {
      const Jet2 js = s.coeff[static_cast<size_t>(a)].jet(v.base.x);
      pair1 += js.value() * v.e[a];
      pair2 += js.value() * v2.e[a];
      pair_br += js.value() * br[a];
      dpair1 += js.grad() * v.e[a];
      dpair2 += js.grad() * v2.e[a];
    }
    // Derivative of f * <s, e-slot> along each included field, where the
    // pairing factor only varies with the base point.
    total += jf.grad().dot(Xz) * pair2 + jf.value() * dpair2.dot(X.dx);
    total -= jf.grad().dot(X2z) * pair1 + jf.value() * dpair1.dot(X2.dx);
    total -= jf.value() * pair_br;
  }

  if (!form.theta.empty()) {
    if (static_cast<int>(form.theta.size()) != n + m) {
      throw std::invalid_argument("d_prolong_oneform: theta needs n + m "
                                  "coefficients");
    }
    // Pointwise coordinate formula for the exterior derivative of a
    // total-space one-form on the included vectors.
    for (int u = 0; u < n + m; ++u) {
      const Jet2 jt = form.theta[static_cast<size_t>(u)].jet(z);
      total += jt.grad().dot(Xz) * X2z[u] - jt.grad().dot(X2z) * Xz[u];
    }
  }
  return total;
}

double decomposition_independence_residual(const AlgebroidModel& M,
                                           const std::vector<ScalarField>& alpha,
                                           const ProlongVector& v,
                                           const ProlongVector& v2) {
  const int n = M.n();
  const int m = M.m();
  if (static_cast<int>(alpha.size()) != n) {
    throw std::invalid_argument(
        "decomposition_independence_residual: need n base coefficients");
  }

  ProlongForm route1;
  ProlongForm route2;
  route2.theta.resize(static_cast<size_t>(n + m));
  for (int i = 0; i < n; ++i) {
    const ScalarField& ai = alpha[static_cast<size_t>(i)];
    if (ai.arity() != n) {
      throw std::invalid_argument(
          "decomposition_independence_residual: coefficients are base fields");
    }
    ScalarField lifted = ScalarField::from_ast(ai.ast(), n + m);
    // Weighted by the anchor row: f_i <rho^i, e-slot>.
    Section row;
    for (int a = 0; a < m; ++a) row.coeff.push_back(M.rho_field(i, a));
    route1.pairing_terms.emplace_back(lifted, std::move(row));
    route2.theta[static_cast<size_t>(i)] = lifted;
  }
  for (int a = 0; a < m; ++a) {
    route2.theta[static_cast<size_t>(n + a)] = ScalarField::constant(0.0, n + m);
  }
  return d_prolong_oneform(M, route1, v, v2) -
         d_prolong_oneform(M, route2, v, v2);
}

double mu_eval(const AlgebroidModel& M, const ProlongVector& v) {
  require_dual(v.base, "mu_eval");
  M.check(v.base);
  require_slots(M, v.e, v.w, "mu_eval");
  return v.base.fiber.dot(v.e);
}

ProlongForm mu_form(const AlgebroidModel& M) {
  const int n = M.n();
  const int m = M.m();
  ProlongForm form;
  for (int a = 0; a < m; ++a) {
    ScalarField coord = ScalarField::from_ast(
        make_var(n + a, "xi" + std::to_string(a + 1)), n + m);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(m);
    unit[a] = 1.0;
    form.pairing_terms.emplace_back(coord, M.constant_section(unit));
  }
  return form;
}

double omega_eval(const AlgebroidModel& M, const ProlongVector& v,
                  const ProlongVector& v2) {
  require_dual(v.base, "omega_eval");
  M.check(v.base);
  require_same_point(v.base, v2.base, "omega_eval");
  require_slots(M, v.e, v.w, "omega_eval");
  require_slots(M, v2.e, v2.w, "omega_eval");
  const Eigen::VectorXd br =
      bracket(M, M.constant_section(v.e), M.constant_section(v2.e), v.base.x);
  return br.dot(v.base.fiber) - v2.e.dot(v.w) + v.e.dot(v2.w);
}

Eigen::MatrixXd omega_matrix(const AlgebroidModel& M, const PhasePoint& p) {
  require_dual(p, "omega_matrix");
  M.check(p);
  const int m = M.m();
  Eigen::MatrixXd O(2 * m, 2 * m);
  std::vector<ProlongVector> frame;
  frame.reserve(static_cast<size_t>(2 * m));
  for (int k = 0; k < 2 * m; ++k) {
    ProlongVector f;
    f.base = p;
    f.e = Eigen::VectorXd::Zero(m);
    f.w = Eigen::VectorXd::Zero(m);
    if (k < m) {
      f.e[k] = 1.0;
    } else {
      f.w[k - m] = 1.0;
    }
    frame.push_back(std::move(f));
  }
  for (int u = 0; u < 2 * m; ++u) {
    for (int r = 0; r < 2 * m; ++r) {
      O(u, r) = omega_eval(M, frame[static_cast<size_t>(u)],
                           frame[static_cast<size_t>(r)]);
    }
  }
  return O;
}

ProlongVector omega_inv_map(const AlgebroidModel& M, const ProlongCovector& c) {
  require_dual(c.base, "omega_inv_map");
  M.check(c.base);
  require_slots(M, c.alpha, c.beta, "omega_inv_map");
  const int m = M.m();
  const Eigen::MatrixXd O = omega_matrix(M, c.base);
  Eigen::VectorXd rhs(2 * m);
  rhs << c.alpha, c.beta;
  // The contraction pairs the unknown in the first argument, so the
  // coefficient system is the transpose of the frame matrix.
  const Eigen::VectorXd sol = O.transpose().partialPivLu().solve(rhs);
  ProlongVector out;
  out.base = c.base;
  out.e = sol.head(m);
  out.w = sol.tail(m);
  return out;
}

ProlongVector omega_inv_direct(const AlgebroidModel& M,
                               const ProlongCovector& c) {
  require_dual(c.base, "omega_inv_direct");
  M.check(c.base);
  require_slots(M, c.alpha, c.beta, "omega_inv_direct");
  const int m = M.m();
  const auto C = M.structure(c.base.x);
  Eigen::MatrixXd CC = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) CC += c.base.fiber[k] * C[static_cast<size_t>(k)];
  ProlongVector out;
  out.base = c.base;
  out.e = c.beta;
  out.w = -CC * c.beta - c.alpha;
  return out;
}

ProlongVector hamiltonian_section(const AlgebroidModel& M,
                                  const ScalarField& H, const PhasePoint& p) {
  require_dual(p, "hamiltonian_section");
  return omega_inv_map(M, dual_project(M, differential(M, H, p)));
}

ProlongVector prolong_legendre(const AlgebroidModel& M, const ScalarField& L,
                               const ProlongVector& v) {
  if (v.base.side != Side::E) {
    throw std::invalid_argument(
        "prolong_legendre starts on the prolongation over the bundle");
  }
  M.check(v.base);
  require_slots(M, v.e, v.w, "prolong_legendre");
  const TangentVec TX = tangent_legendre(M, L, include_vector(M, v));
  ProlongVector out;
  out.base = TX.base;
  out.e = v.e;
  out.w = TX.dfiber;
  return out;
}

Eigen::MatrixXd omega_l_matrix(const AlgebroidModel& M, const ScalarField& L,
                               const PhasePoint& a) {
  if (a.side != Side::E) {
    throw std::invalid_argument("omega_l_matrix expects a velocity point");
  }
  M.check(a);
  const int m = M.m();
  std::vector<ProlongVector> image;
  image.reserve(static_cast<size_t>(2 * m));
  for (int k = 0; k < 2 * m; ++k) {
    ProlongVector f;
    f.base = a;
    f.e = Eigen::VectorXd::Zero(m);
    f.w = Eigen::VectorXd::Zero(m);
    if (k < m) {
      f.e[k] = 1.0;
    } else {
      f.w[k - m] = 1.0;
    }
    image.push_back(prolong_legendre(M, L, f));
  }
  Eigen::MatrixXd O(2 * m, 2 * m);
  for (int u = 0; u < 2 * m; ++u) {
    for (int r = 0; r < 2 * m; ++r) {
      O(u, r) = omega_eval(M, image[static_cast<size_t>(u)],
                           image[static_cast<size_t>(r)]);
    }
  }
  return O;
}

double energy(const AlgebroidModel& M, const ScalarField& L,
              const PhasePoint& a) {
  if (a.side != Side::E) {
    throw std::invalid_argument("energy expects a velocity point");
  }
  M.check(a);
  return vertical_derivative(M, L, a).dot(a.fiber) - L(stack_point(a));
}

Covector energy_differential(const AlgebroidModel& M, const ScalarField& L,
                             const PhasePoint& a) {
  if (a.side != Side::E) {
    throw std::invalid_argument("energy_differential expects a velocity point");
  }
  M.check(a);
  const int n = M.n();
  const int m = M.m();
  const Jet2 j = L.jet(stack_point(a));
  const Eigen::MatrixXd& H = j.hess();
  Covector d;
  d.base = a;
  // E = <dL/dy, y> - L, so dE_x = H_xy y - dL_x and dE_y = H_yy y.
  d.p = H.block(0, n, n, m) * a.fiber - j.grad().head(n);
  d.pi = H.block(n, n, m, m) * a.fiber;
  return d;
}

Eigen::VectorXd el_residual_prolong(const AlgebroidModel& M,
                                    const ScalarField& L, const PhasePoint& a,
                                    const TangentVec& X) {
  if (a.side != Side::E) {
    throw std::invalid_argument("el_residual_prolong expects a velocity point");
  }
  M.check(a);
  require_same_point(a, X.base, "el_residual_prolong");
  const Eigen::VectorXd defect = anchor(M, a.fiber, a.x) - X.dx;
  if (defect.size() > 0 && defect.cwiseAbs().maxCoeff() > kAdmissibilityTol) {
    throw DomainError(
        "el_residual_prolong: jet violates the anchor compatibility "
        "constraint");
  }
  const int m = M.m();
  Eigen::VectorXd lift(2 * m);
  lift << a.fiber, X.dfiber;
  const ProlongCovector rhs = dual_project(M, energy_differential(M, L, a));
  Eigen::VectorXd want(2 * m);
  want << rhs.alpha, rhs.beta;
  return omega_l_matrix(M, L, a).transpose() * lift - want;
}

ProlongCovector r_tilde(const AlgebroidModel& M, const ProlongCovector& c) {
  if (c.base.side != Side::E) {
    throw std::invalid_argument("r_tilde starts over a velocity point");
  }
  M.check(c.base);
  require_slots(M, c.alpha, c.beta, "r_tilde");
  ProlongCovector out;
  out.base = M.point(Side::Dual, c.base.x, c.beta);
  out.alpha = -c.alpha;
  out.beta = c.base.fiber;
  return out;
}

ProlongCovector r_tilde_inv(const AlgebroidModel& M, const ProlongCovector& c) {
  require_dual(c.base, "r_tilde_inv");
  M.check(c.base);
  require_slots(M, c.alpha, c.beta, "r_tilde_inv");
  ProlongCovector out;
  out.base = M.point(Side::E, c.base.x, c.beta);
  out.alpha = -c.alpha;
  out.beta = c.base.fiber;
  return out;
}

ProlongVector eps_tilde(const AlgebroidModel& M, const ProlongCovector& c) {
  return omega_inv_map(M, r_tilde(M, c));
}

}  // namespace algmech
