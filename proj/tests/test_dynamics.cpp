#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "algmech/algebroid.hpp"
#include "algmech/dynamics.hpp"
#include "algmech/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace algmech;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

const Eigen::VectorXd kEmpty = Eigen::VectorXd(0);

double state_gap(const Trajectory& a, const Trajectory& b) {
  REQUIRE(a.states.size() == b.states.size());
  double gap = 0.0;
  for (size_t k = 0; k < a.states.size(); ++k) {
    gap = std::max(gap, (a.states[k] - b.states[k]).cwiseAbs().maxCoeff());
  }
  return gap;
}

}  // namespace

TEST_CASE("one runge-kutta step matches the quartic taylor sum on a linear "
          "system") {
  Rhs f = [](double, const Eigen::VectorXd& z) { return z; };
  Eigen::VectorXd z0 = vec({1.0});
  const double h = 0.1;
  Eigen::VectorXd z1 = rk4_step(f, 0.0, z0, h);
  const double want = 1.0 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24;
  CHECK(z1[0] == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("free particle trajectory is exact") {
  auto tm1 = AlgebroidModel::builtin("tm1");
  auto H = ScalarField::parse("xi1^2/2", tm1.phase_vars(Side::Dual));
  auto p0 = tm1.point(Side::Dual, vec({0.0}), vec({1.0}));
  Trajectory traj = integrate_hamiltonian(tm1, H, p0, 0.5, 2.0);
  REQUIRE(traj.times.size() == 5);
  for (size_t k = 0; k < traj.times.size(); ++k) {
    CHECK(traj.states[k][0] == traj.times[k]);
    CHECK(traj.states[k][1] == 1.0);
    CHECK(traj.monitors[k][0] == 0.5);
  }
  CHECK(traj.state_names == std::vector<std::string>{"x1", "xi1"});
  CHECK(traj.monitor_names == std::vector<std::string>{"energy"});
}

TEST_CASE("rigid body conserves energy and total momentum magnitude") {
  auto so3 = AlgebroidModel::builtin("so3");
  auto H = ScalarField::parse("xi1^2/2 + xi2^2/4 + xi3^2/6",
                              so3.phase_vars(Side::Dual));
  auto p0 = so3.point(Side::Dual, kEmpty, vec({1, 1, 1}));
  Trajectory traj = integrate_hamiltonian(so3, H, p0, 0.01, 2.0);
  const double e0 = traj.monitors.front()[0];
  const double c0 = traj.states.front().squaredNorm();
  for (size_t k = 0; k < traj.times.size(); ++k) {
    CHECK(std::abs(traj.monitors[k][0] - e0) <= 1e-7);
    CHECK(std::abs(traj.states[k].squaredNorm() - c0) <= 1e-6);
  }
}

TEST_CASE("linear damping force decays the momentum exponentially") {
  auto tm1 = AlgebroidModel::builtin("tm1");
  auto H = ScalarField::parse("xi1^2/2", tm1.phase_vars(Side::Dual));
  std::vector<ScalarField> force = {
      ScalarField::parse("xi1/2", tm1.phase_vars(Side::Dual))};
  auto p0 = tm1.point(Side::Dual, vec({0.0}), vec({1.0}));
  Trajectory traj = integrate_forced(tm1, H, force, p0, 0.01, 1.0);
  const Eigen::VectorXd& zT = traj.states.back();
  CHECK(std::abs(zT[1] - std::exp(-0.5)) <= 1e-10);
  CHECK(std::abs(zT[0] - 2.0 * (1.0 - std::exp(-0.5))) <= 1e-10);
}

TEST_CASE("zero force reproduces the unforced integration bit for bit") {
  auto tm2 = AlgebroidModel::builtin("tm2");
  auto H = ScalarField::parse("xi1^2/2 + xi2^2/2 + x1*xi2",
                              tm2.phase_vars(Side::Dual));
  std::vector<ScalarField> zero = {ScalarField::constant(0.0, 4),
                                   ScalarField::constant(0.0, 4)};
  auto p0 = tm2.point(Side::Dual, vec({0.3, -0.2}), vec({1.0, 0.7}));
  Trajectory plain = integrate_hamiltonian(tm2, H, p0, 0.05, 1.0);
  Trajectory forced = integrate_forced(tm2, H, zero, p0, 0.05, 1.0);
  REQUIRE(plain.states.size() == forced.states.size());
  for (size_t k = 0; k < plain.states.size(); ++k) {
    for (Eigen::Index i = 0; i < plain.states[k].size(); ++i) {
      CHECK(plain.states[k][i] == forced.states[k][i]);
    }
    CHECK(plain.monitors[k][0] == forced.monitors[k][0]);
  }
  std::ostringstream a, b;
  write_csv(plain, a);
  write_csv(forced, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("both velocity-side routes produce the same trajectory") {
  auto tm2 = AlgebroidModel::builtin("tm2");
  auto L = ScalarField::parse("(y1^2 + y2^2)/2 + x1*y1 - x2",
                              tm2.phase_vars(Side::E));
  auto a0 = tm2.point(Side::E, vec({0.1, 0.4}), vec({0.5, -0.3}));
  Trajectory phase = integrate_el(tm2, L, a0, 0.02, 1.0, ELRoute::Phase);
  Trajectory prolong = integrate_el(tm2, L, a0, 0.02, 1.0, ELRoute::Prolong);
  CHECK(state_gap(phase, prolong) <= 1e-9);

  auto so3 = AlgebroidModel::builtin("so3");
  auto Lrb = ScalarField::parse("y1^2/2 + y2^2 + 3*y3^2/2",
                                so3.phase_vars(Side::E));
  auto b0 = so3.point(Side::E, kEmpty, vec({1, 1, 1}));
  Trajectory rp = integrate_el(so3, Lrb, b0, 0.01, 1.0, ELRoute::Phase);
  Trajectory rq = integrate_el(so3, Lrb, b0, 0.01, 1.0, ELRoute::Prolong);
  CHECK(state_gap(rp, rq) <= 1e-9);
}

TEST_CASE("free velocity-side trajectory is exact with clean monitors") {
  auto tm1 = AlgebroidModel::builtin("tm1");
  auto L = ScalarField::parse("y1^2/2", tm1.phase_vars(Side::E));
  auto a0 = tm1.point(Side::E, vec({0.0}), vec({1.0}));
  Trajectory traj = integrate_el(tm1, L, a0, 0.25, 1.0, ELRoute::Phase);
  REQUIRE(traj.times.size() == 5);
  CHECK(traj.monitor_names ==
        std::vector<std::string>{"energy", "admissibility", "residual_phase",
                                 "residual_prolong"});
  for (size_t k = 0; k < traj.times.size(); ++k) {
    CHECK(traj.states[k][0] == traj.times[k]);
    CHECK(traj.states[k][1] == 1.0);
    CHECK(traj.monitors[k][0] == 0.5);
    CHECK(traj.monitors[k][1] == 0.0);
    CHECK(traj.monitors[k][2] <= 1e-14);
    CHECK(traj.monitors[k][3] <= 1e-14);
  }
}

TEST_CASE("velocity and momentum pictures of the rigid body are dual") {
  auto so3 = AlgebroidModel::builtin("so3");
  auto L = ScalarField::parse("y1^2/2 + y2^2 + 3*y3^2/2",
                              so3.phase_vars(Side::E));
  auto H = ScalarField::parse("xi1^2/2 + xi2^2/4 + xi3^2/6",
                              so3.phase_vars(Side::Dual));
  Eigen::VectorXd y0 = vec({1, 1, 1});
  Eigen::VectorXd inertia = vec({1, 2, 3});
  auto el = integrate_el(so3, L, so3.point(Side::E, kEmpty, y0), 1e-3, 1.0,
                         ELRoute::Phase);
  auto ham = integrate_hamiltonian(
      so3, H, so3.point(Side::Dual, kEmpty, inertia.cwiseProduct(y0)), 1e-3,
      1.0);
  REQUIRE(el.states.size() == ham.states.size());
  double gap = 0.0;
  for (size_t k = 0; k < el.states.size(); ++k) {
    Eigen::VectorXd mapped = inertia.cwiseProduct(el.states[k]);
    gap = std::max(gap, (mapped - ham.states[k]).cwiseAbs().maxCoeff());
    CHECK(std::abs(el.monitors[k][0] - ham.monitors[k][0]) <= 1e-9);
  }
  CHECK(gap <= 1e-9);
}

TEST_CASE("step halving contracts the error at fourth order") {
  auto so3 = AlgebroidModel::builtin("so3");
  auto H = ScalarField::parse("xi1^2/2 + xi2^2/4 + xi3^2/6",
                              so3.phase_vars(Side::Dual));
  auto p0 = so3.point(Side::Dual, kEmpty, vec({1, 1, 1}));
  const double T = 2.0;
  const double dt = 0.05;
  Eigen::VectorXd coarse =
      integrate_hamiltonian(so3, H, p0, dt, T).states.back();
  Eigen::VectorXd half =
      integrate_hamiltonian(so3, H, p0, dt / 2, T).states.back();
  Eigen::VectorXd ref =
      integrate_hamiltonian(so3, H, p0, dt / 4, T).states.back();
  const double e1 = (coarse - ref).norm();
  const double e2 = (half - ref).norm();
  CHECK(e2 > 0.0);
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("degenerate lagrangians raise a singular solve error") {
  auto tm2 = AlgebroidModel::builtin("tm2");
  auto a0 = tm2.point(Side::E, vec({0, 0}), vec({1, 1}));
  auto Llin = ScalarField::parse("y1 + y2", tm2.phase_vars(Side::E));
  CHECK_THROWS_AS(integrate_el(tm2, Llin, a0, 0.1, 1.0, ELRoute::Phase),
                  SingularError);
  auto Lrank1 = ScalarField::parse("y1^2/2", tm2.phase_vars(Side::E));
  CHECK_THROWS_AS(integrate_el(tm2, Lrank1, a0, 0.1, 1.0, ELRoute::Prolong),
                  SingularError);
  try {
    integrate_el(tm2, Llin, a0, 0.1, 1.0, ELRoute::Phase);
  } catch (const SingularError& e) {
    CHECK(e.time() == 0.0);
    CHECK(std::string(e.what()).find("t = 0") != std::string::npos);
  }
}

TEST_CASE("trajectory rows serialize to shortest round-trip csv") {
  auto tm1 = AlgebroidModel::builtin("tm1");
  auto H = ScalarField::parse("xi1^2/2", tm1.phase_vars(Side::Dual));
  auto p0 = tm1.point(Side::Dual, vec({0.0}), vec({1.0}));
  Trajectory traj = integrate_hamiltonian(tm1, H, p0, 0.5, 1.0);
  std::ostringstream out;
  write_csv(traj, out);
  CHECK(out.str() ==
        "t,x1,xi1,energy\n"
        "0,0,1,0.5\n"
        "0.5,0.5,1,0.5\n"
        "1,1,1,0.5\n");
}

TEST_CASE("partial trailing steps are dropped") {
  auto tm1 = AlgebroidModel::builtin("tm1");
  auto H = ScalarField::parse("xi1^2/2", tm1.phase_vars(Side::Dual));
  auto p0 = tm1.point(Side::Dual, vec({0.0}), vec({1.0}));
  Trajectory traj = integrate_hamiltonian(tm1, H, p0, 0.3, 1.0);
  REQUIRE(traj.times.size() == 4);
  CHECK(traj.times.back() == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("integration argument validation") {
  auto tm1 = AlgebroidModel::builtin("tm1");
  auto H = ScalarField::parse("xi1^2/2", tm1.phase_vars(Side::Dual));
  auto p0 = tm1.point(Side::Dual, vec({0.0}), vec({1.0}));
  CHECK_THROWS_AS(integrate_hamiltonian(tm1, H, p0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_hamiltonian(tm1, H, p0, 0.1, -1.0),
                  std::invalid_argument);
  auto a0 = tm1.point(Side::E, vec({0.0}), vec({1.0}));
  CHECK_THROWS_AS(integrate_hamiltonian(tm1, H, a0, 0.1, 1.0),
                  std::invalid_argument);
  auto L = ScalarField::parse("y1^2/2", tm1.phase_vars(Side::E));
  CHECK_THROWS_AS(integrate_el(tm1, L, p0, 0.1, 1.0, ELRoute::Phase),
                  std::invalid_argument);
}
