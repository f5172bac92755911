#include "algmech/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "algmech/errors.hpp"
#include "algmech/prolongation.hpp"

namespace algmech {

namespace {

Eigen::VectorXd stack_point(const PhasePoint& p) {
  Eigen::VectorXd z(p.x.size() + p.fiber.size());
  z << p.x, p.fiber;
  return z;
}

double max_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

long step_count(double dt, double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("integration needs dt > 0");
  if (!(t_end >= 0.0)) {
    throw std::invalid_argument("integration needs t_end >= 0");
  }
  return std::llround(std::floor(t_end / dt + 1e-9));
}

/// Shared fixed-step driver: integrates with RK4 and records one monitor row
/// per sample.
Trajectory run_integration(
    const Rhs& f, const Eigen::VectorXd& z0, double dt, double t_end,
    std::vector<std::string> state_names, std::vector<std::string> monitor_names,
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>&
        monitor) {
  const long steps = step_count(dt, t_end);
  Trajectory traj;
  traj.state_names = std::move(state_names);
  traj.monitor_names = std::move(monitor_names);
  traj.times.reserve(static_cast<size_t>(steps) + 1);
  traj.states.reserve(static_cast<size_t>(steps) + 1);
  traj.monitors.reserve(static_cast<size_t>(steps) + 1);

  Eigen::VectorXd z = z0;
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(z);
  traj.monitors.push_back(monitor(t, z));
  for (long k = 0; k < steps; ++k) {
    z = rk4_step(f, t, z, dt);
    t = static_cast<double>(k + 1) * dt;
    traj.times.push_back(t);
    traj.states.push_back(z);
    traj.monitors.push_back(monitor(t, z));
  }
  return traj;
}

PhasePoint unstack(const AlgebroidModel& M, Side side,
                   const Eigen::VectorXd& z) {
  return M.point(side, z.head(M.n()), z.tail(M.m()));
}

}  // namespace

Eigen::VectorXd rk4_step(const Rhs& f, double t, const Eigen::VectorXd& z,
                         double dt) {
  const Eigen::VectorXd k1 = f(t, z);
  const Eigen::VectorXd k2 = f(t + dt / 2.0, z + (dt / 2.0) * k1);
  const Eigen::VectorXd k3 = f(t + dt / 2.0, z + (dt / 2.0) * k2);
  const Eigen::VectorXd k4 = f(t + dt, z + dt * k3);
  return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TangentVec el_field(const AlgebroidModel& M, const ScalarField& L,
                    const PhasePoint& a, ELRoute route, double t) {
  if (a.side != Side::E) {
    throw std::invalid_argument("el_field expects a velocity point");
  }
  M.check(a);
  const int n = M.n();
  const int m = M.m();
  TangentVec X;
  X.base = a;
  X.dx = anchor(M, a.fiber, a.x);

  if (route == ELRoute::Phase) {
    // Fiber block of the phase evolution law: the tangent image of the
    // fiber derivative must match the phase dynamics of dL.
    const Jet2 j = L.jet(stack_point(a));
    const Eigen::MatrixXd W = j.hess().block(n, n, m, m);
    const Eigen::MatrixXd Mix = j.hess().block(0, n, n, m);
    const TangentVec eps = epsilon_map(M, differential(M, L, a));
    const Eigen::VectorXd rhs = eps.dfiber - Mix.transpose() * X.dx;
    const auto lu = W.fullPivLu();
    if (!lu.isInvertible()) {
      throw SingularError("velocity hessian of the lagrangian is singular", t);
    }
    X.dfiber = lu.solve(rhs);
    return X;
  }

  // Vertical-against-horizontal block of the pulled-back two-form: solve the
  // horizontal rows of the contraction equation for dy.
  const Eigen::MatrixXd OL = omega_l_matrix(M, L, a);
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd c(m);
  for (int r = 0; r < m; ++r) {
    for (int b = 0; b < m; ++b) A(r, b) = OL(m + b, r);
    double acc = 0.0;
    for (int b = 0; b < m; ++b) acc += a.fiber[b] * OL(b, r);
    c[r] = acc;
  }
  const ProlongCovector rhs = dual_project(M, energy_differential(M, L, a));
  const auto lu = A.fullPivLu();
  if (!lu.isInvertible()) {
    throw SingularError(
        "two-form pullback of the lagrangian is degenerate", t);
  }
  X.dfiber = lu.solve(rhs.alpha - c);
  return X;
}

Trajectory integrate_hamiltonian(const AlgebroidModel& M, const ScalarField& H,
                                 const PhasePoint& p0, double dt,
                                 double t_end) {
  if (p0.side != Side::Dual) {
    throw std::invalid_argument("integrate_hamiltonian starts on the dual");
  }
  M.check(p0);
  Rhs f = [&M, &H](double, const Eigen::VectorXd& z) {
    const TangentVec X = hamiltonian_field(M, H, unstack(M, Side::Dual, z));
    Eigen::VectorXd dz(z.size());
    dz << X.dx, X.dfiber;
    return dz;
  };
  auto monitor = [&M, &H](double, const Eigen::VectorXd& z) {
    Eigen::VectorXd row(1);
    row[0] = H(z);
    return row;
  };
  return run_integration(f, stack_point(p0), dt, t_end,
                         M.phase_vars(Side::Dual), {"energy"}, monitor);
}

Trajectory integrate_forced(const AlgebroidModel& M, const ScalarField& H,
                            const std::vector<ScalarField>& force,
                            const PhasePoint& p0, double dt, double t_end) {
  if (p0.side != Side::Dual) {
    throw std::invalid_argument("integrate_forced starts on the dual");
  }
  M.check(p0);
  Rhs f = [&M, &H, &force](double, const Eigen::VectorXd& z) {
    const TangentVec X =
        forced_hamiltonian_field(M, H, force, unstack(M, Side::Dual, z));
    Eigen::VectorXd dz(z.size());
    dz << X.dx, X.dfiber;
    return dz;
  };
  auto monitor = [&M, &H](double, const Eigen::VectorXd& z) {
    Eigen::VectorXd row(1);
    row[0] = H(z);
    return row;
  };
  return run_integration(f, stack_point(p0), dt, t_end,
                         M.phase_vars(Side::Dual), {"energy"}, monitor);
}

Trajectory integrate_el(const AlgebroidModel& M, const ScalarField& L,
                        const PhasePoint& a0, double dt, double t_end,
                        ELRoute route) {
  if (a0.side != Side::E) {
    throw std::invalid_argument("integrate_el starts on the velocity side");
  }
  M.check(a0);
  Rhs f = [&M, &L, route](double t, const Eigen::VectorXd& z) {
    const TangentVec X = el_field(M, L, unstack(M, Side::E, z), route, t);
    Eigen::VectorXd dz(z.size());
    dz << X.dx, X.dfiber;
    return dz;
  };
  auto monitor = [&M, &L, route](double t, const Eigen::VectorXd& z) {
    const PhasePoint a = unstack(M, Side::E, z);
    const TangentVec X = el_field(M, L, a, route, t);
    Eigen::VectorXd row(4);
    row[0] = energy(M, L, a);
    row[1] = max_abs(admissibility_residual(M, a, X));
    row[2] = max_abs(el_residual_tt(M, L, a, X));
    row[3] = max_abs(el_residual_prolong(M, L, a, X));
    return row;
  };
  return run_integration(
      f, stack_point(a0), dt, t_end, M.phase_vars(Side::E),
      {"energy", "admissibility", "residual_phase", "residual_prolong"},
      monitor);
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << "t";
  for (const auto& name : traj.state_names) out << "," << name;
  for (const auto& name : traj.monitor_names) out << "," << name;
  out << "\n";
  for (size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) {
      out << "," << format_double(traj.states[k][i]);
    }
    for (Eigen::Index i = 0; i < traj.monitors[k].size(); ++i) {
      out << "," << format_double(traj.monitors[k][i]);
    }
    out << "\n";
  }
}

}  // namespace algmech
