// Acceptance gate: one line per criterion, each certifying an end-to-end
// numerical property of the engine with tolerances pinned below.  Exits
// nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "algmech/algebroid.hpp"
#include "algmech/dynamics.hpp"
#include "algmech/prolongation.hpp"
#include "algmech/tulczyjew.hpp"
#include "algmech/verify.hpp"

using namespace algmech;

namespace {

using Rng = std::mt19937_64;

double urand(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Eigen::VectorXd rand_vec(Rng& rng, int size, double lo, double hi) {
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = urand(rng, lo, hi);
  return v;
}

double max_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double tangent_gap(const TangentVec& A, const TangentVec& B) {
  return std::max(max_abs(A.dx - B.dx), max_abs(A.dfiber - B.dfiber));
}

PhasePoint random_point(const AlgebroidModel& M, Side side, Rng& rng) {
  return M.point(side, rand_vec(rng, M.n(), -1.2, 1.2),
                 rand_vec(rng, M.m(), -1.5, 1.5));
}

std::string linear_fiber_text(const AlgebroidModel& M) {
  std::string s = "y1";
  for (int a = 2; a <= M.m(); ++a) s += "+y" + std::to_string(a);
  return s;
}

ScalarField random_base_poly(const AlgebroidModel& M, Rng& rng) {
  const std::vector<std::string> vars = M.base_vars();
  ExprPtr sum = make_number(urand(rng, -2.0, 2.0));
  for (int t = 0; t < 3 && M.n() > 0; ++t) {
    ExprPtr mono = make_number(urand(rng, -2.0, 2.0));
    const int deg = 1 + (t % 2);
    for (int k = 0; k < deg; ++k) {
      const int i =
          std::uniform_int_distribution<int>(0, M.n() - 1)(rng);
      mono = make_mul(std::move(mono), make_var(i, vars[i]));
    }
    sum = make_add(std::move(sum), std::move(mono));
  }
  return ScalarField::from_ast(std::move(sum), M.n());
}

const std::vector<std::string> kCompatible = {"tm1", "tm2", "so3", "heis3",
                                              "action1"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_double(v); }

// --- criterion bodies -------------------------------------------------------

// Included Hamiltonian sections against the bi-vector field.
Outcome hamiltonian_section_routes() {
  constexpr double kTol = 1e-8;
  double worst = 0.0;
  Rng rng(101);
  for (const std::string& name : {"tm2", "so3", "heis3", "action1"}) {
    const AlgebroidModel M = AlgebroidModel::builtin(name);
    for (int s = 0; s < 100; ++s) {
      const ScalarField H = random_phase_field(M, Side::Dual, rng);
      const PhasePoint p = random_point(M, Side::Dual, rng);
      const TangentVec via = include_vector(M, hamiltonian_section(M, H, p));
      worst = std::max(worst, tangent_gap(via, hamiltonian_field(M, H, p)));
    }
  }
  return {worst <= kTol, "max gap " + fmt(worst) + ", tol " + fmt(kTol) +
                             ", 4 models x 100 draws"};
}

// Closed form of the inverted canonical two-form: e-slot returns the fiber
// momenta of theta, w-slot is the bi-vector field minus the lifted phi.
Outcome omega_inverse_closed_form() {
  constexpr double kTol = 1e-8;
  double worst = 0.0;
  Rng rng(202);
  for (const std::string& name : kCompatible) {
    const AlgebroidModel M = AlgebroidModel::builtin(name);
    for (int s = 0; s < 100; ++s) {
      const PhasePoint p = random_point(M, Side::Dual, rng);
      const Covector theta{p, rand_vec(rng, M.n(), -1.5, 1.5),
                           rand_vec(rng, M.m(), -1.5, 1.5)};
      const Eigen::VectorXd phi = rand_vec(rng, M.m(), -1.5, 1.5);
      const ProlongVector got = omega_inv_map(M, dual_project(M, phi, theta));
      const Eigen::VectorXd w_expect =
          lambda_contraction(M, theta).dfiber - phi;
      worst = std::max({worst, max_abs(got.e - theta.pi),
                        max_abs(got.w - w_expect)});
    }
  }
  return {worst <= kTol, "max gap " + fmt(worst) + ", tol " + fmt(kTol) +
                             ", 5 models x 100 draws"};
}

// Solution jets annihilate both evolution-law residuals; perturbed jets
// trip both.
Outcome euler_lagrange_cross_residuals() {
  constexpr double kTolZero = 1e-7;
  constexpr double kTolTrip = 1e-3;
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"tm1", "0.5*y1^2"},
      {"tm2", "0.5*(y1^2+y2^2)"},
      {"so3", "0.5*(y1^2+2*y2^2+3*y3^2)"}};
  double worst_zero = 0.0;
  double weakest_trip = 1e300;
  Rng rng(303);
  for (const auto& [name, text] : cases) {
    const AlgebroidModel M = AlgebroidModel::builtin(name);
    const ScalarField L = ScalarField::parse(text, M.phase_vars(Side::E));
    for (int s = 0; s < 20; ++s) {
      const PhasePoint a = random_point(M, Side::E, rng);
      const TangentVec X = el_field(M, L, a, ELRoute::Phase);
      worst_zero = std::max({worst_zero,
                             max_abs(el_residual_prolong(M, L, a, X)),
                             max_abs(el_residual_tt(M, L, a, X))});
      TangentVec Xp = X;
      Xp.dfiber.array() += 0.1;
      weakest_trip = std::min({weakest_trip,
                               max_abs(el_residual_prolong(M, L, a, Xp)),
                               max_abs(el_residual_tt(M, L, a, Xp))});
    }
  }
  const bool pass = worst_zero <= kTolZero && weakest_trip > kTolTrip;
  return {pass, "solution residual " + fmt(worst_zero) + " (tol " +
                    fmt(kTolZero) + "), perturbed residual " +
                    fmt(weakest_trip) + " (must exceed " + fmt(kTolTrip) +
                    ")"};
}

// Pairing the energy differential with any tangent vector equals pairing the
// dualized Lagrangian differential with the tangent fiber derivative.
Outcome energy_pairing_identity() {
  constexpr double kTol = 1e-8;
  double worst = 0.0;
  Rng rng(404);
  for (const std::string& name : kCompatible) {
    const AlgebroidModel M = AlgebroidModel::builtin(name);
    const std::vector<ScalarField> lagrangians = {
        random_regular_lagrangian(M, rng),
        ScalarField::parse(linear_fiber_text(M), M.phase_vars(Side::E))};
    for (const ScalarField& L : lagrangians) {
      for (int s = 0; s < 100; ++s) {
        const PhasePoint a = random_point(M, Side::E, rng);
        const TangentVec X{a, rand_vec(rng, M.n(), -1.5, 1.5),
                           rand_vec(rng, M.m(), -1.5, 1.5)};
        const double lhs = pairing(energy_differential(M, L, a), X);
        const double rhs = pairing(r_map(M, differential(M, L, a)),
                                   tangent_legendre(M, L, X));
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
      }
    }
  }
  return {worst <= kTol, "max gap " + fmt(worst) + ", tol " + fmt(kTol) +
                             ", regular and degenerate L"};
}

// The homogeneous system pinning the momentum-rate multipliers has only the
// zero solution at regular Lagrangians.
Outcome multiplier_uniqueness() {
  int worst_dim = 0;
  Rng rng(505);
  for (const std::string& name : kCompatible) {
    const AlgebroidModel M = AlgebroidModel::builtin(name);
    const int n = M.n();
    const int m = M.m();
    const ScalarField L = random_regular_lagrangian(M, rng);
    for (int s = 0; s < 50; ++s) {
      const PhasePoint a = random_point(M, Side::E, rng);
      Eigen::VectorXd stacked(n + m);
      stacked << a.x, a.fiber;
      const Jet2 jet = L.jet(stacked);
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * m + n, n + m);
      K.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
      K.block(m, 0, n, n) = Eigen::MatrixXd::Identity(n, n);
      K.block(m, n, n, m) = jet.hess().block(0, n, n, m);
      K.block(m + n, n, m, m) = jet.hess().block(n, n, m, m).transpose();
      const int dim = n + m - static_cast<int>(K.fullPivLu().rank());
      worst_dim = std::max(worst_dim, dim);
    }
  }
  return {worst_dim == 0, "max kernel dimension " + std::to_string(worst_dim) +
                              " over 5 models x 50 points (must be 0)"};
}

// Exterior derivatives of pulled-back base one-forms are representation
// independent exactly on anchor-compatible structures.
Outcome representation_independence() {
  constexpr double kTolZero = 1e-9;
  constexpr double kTolBroken = 1e-3;
  double worst = 0.0;
  Rng rng(606);
  for (const std::string& name : kCompatible) {
    const AlgebroidModel M = AlgebroidModel::builtin(name);
    for (int s = 0; s < 30; ++s) {
      const PhasePoint p = random_point(M, Side::Dual, rng);
      std::vector<ScalarField> alpha(M.n());
      for (int j = 0; j < M.n(); ++j) alpha[j] = random_base_poly(M, rng);
      const ProlongVector v{p, rand_vec(rng, M.m(), -1.0, 1.0),
                            rand_vec(rng, M.m(), -1.0, 1.0)};
      const ProlongVector v2{p, rand_vec(rng, M.m(), -1.0, 1.0),
                             rand_vec(rng, M.m(), -1.0, 1.0)};
      worst = std::max(
          worst, std::abs(decomposition_independence_residual(M, alpha, v, v2)));
    }
  }
  const AlgebroidModel B = AlgebroidModel::builtin("broken2");
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;
  Eigen::VectorXd xi(2);
  xi << 0.3, -0.8;
  const PhasePoint p = B.point(Side::Dual, x, xi);
  std::vector<ScalarField> dx2 = {ScalarField::constant(0.0, 2),
                                  ScalarField::constant(1.0, 2)};
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2);
  e1[0] = 1.0;
  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(2);
  e2[1] = 1.0;
  const ProlongVector z1{p, e1, Eigen::VectorXd::Zero(2)};
  const ProlongVector z2{p, e2, Eigen::VectorXd::Zero(2)};
  const double broken =
      std::abs(decomposition_independence_residual(B, dx2, z1, z2));
  const bool pass = worst <= kTolZero && broken >= kTolBroken;
  return {pass, "compatible max " + fmt(worst) + " (tol " + fmt(kTolZero) +
                    "), incompatible residual " + fmt(broken) +
                    " (must reach " + fmt(kTolBroken) + ")"};
}

// Velocity-side and momentum-side integrations of the rigid body are
// fiber-derivative conjugate.
Outcome legendre_duality_dynamics() {
  constexpr double kTol = 1e-6;
  const AlgebroidModel M = AlgebroidModel::builtin("so3");
  const ScalarField L =
      ScalarField::parse("0.5*(y1^2+2*y2^2+3*y3^2)", M.phase_vars(Side::E));
  const ScalarField H = ScalarField::parse("0.5*(xi1^2+xi2^2/2+xi3^2/3)",
                                           M.phase_vars(Side::Dual));
  Eigen::VectorXd y0(3);
  y0 << 1.0, 1.0, 1.0;
  Eigen::Vector3d inertia(1.0, 2.0, 3.0);
  const Eigen::VectorXd xi0 = inertia.asDiagonal() * y0;
  const double dt = 1e-3;
  const double T = 10.0;
  const Trajectory tl = integrate_el(M, L, M.point(Side::E, {}, y0), dt, T,
                                     ELRoute::Phase);
  const Trajectory th =
      integrate_hamiltonian(M, H, M.point(Side::Dual, {}, xi0), dt, T);
  double state_gap = 0.0;
  for (size_t k = 0; k < tl.states.size(); ++k) {
    const Eigen::VectorXd mapped = inertia.asDiagonal() * tl.states[k];
    state_gap = std::max(state_gap, max_abs(mapped - th.states[k]));
  }
  double drift = 0.0;
  for (const Trajectory* t : {&tl, &th}) {
    for (const Eigen::VectorXd& row : t->monitors) {
      drift = std::max(drift, std::abs(row[0] - t->monitors.front()[0]));
    }
  }
  const bool pass = state_gap <= kTol && drift < kTol;
  return {pass, "state gap " + fmt(state_gap) + ", energy drift " +
                    fmt(drift) + ", tol " + fmt(kTol) + ", T=10 dt=0.001"};
}

// Fourth-order self-convergence of the integrator on the rigid body.
Outcome integrator_convergence_order() {
  const AlgebroidModel M = AlgebroidModel::builtin("so3");
  const ScalarField H = ScalarField::parse("0.5*(xi1^2+xi2^2/2+xi3^2/3)",
                                           M.phase_vars(Side::Dual));
  Eigen::VectorXd xi0(3);
  xi0 << 1.0, 2.0, 3.0;
  const PhasePoint p0 = M.point(Side::Dual, {}, xi0);
  const double T = 2.0;
  const double dt = 0.05;
  auto endpoint = [&](double step) {
    return integrate_hamiltonian(M, H, p0, step, T).states.back();
  };
  const Eigen::VectorXd ref = endpoint(dt / 4.0);
  const double e1 = max_abs(endpoint(dt) - ref);
  const double e2 = max_abs(endpoint(dt / 2.0) - ref);
  const double ratio = e1 / e2;
  const bool pass = ratio >= 12.0 && ratio <= 20.0;
  return {pass, "error ratio " + fmt(ratio) + " under step halving (bounds "
                    "[12, 20])"};
}

// Finite-difference pullback certificate that dualization reverses the
// canonical two-form, with exact projection legs.
Outcome dualization_pullback() {
  constexpr double kTolFd = 1e-5;
  constexpr double kTolLegs = 1e-12;
  double worst_fd = 0.0;
  double worst_legs = 0.0;
  Rng rng(909);
  int drawn = 0;
  const std::vector<std::string> names = {"tm2", "so3", "action1"};
  for (size_t i = 0; drawn < 100; i = (i + 1) % names.size(), ++drawn) {
    const AlgebroidModel M = AlgebroidModel::builtin(names[i]);
    const int n = M.n();
    const int m = M.m();
    const int N = n + m;
    auto apply = [&](const Eigen::VectorXd& z) {
      const Covector theta{M.point(Side::E, z.head(n), z.segment(n, m)),
                           z.segment(n + m, n), z.tail(m)};
      const Covector img = r_map(M, theta);
      Eigen::VectorXd out(2 * N);
      out << img.base.x, img.base.fiber, img.p, img.pi;
      return out;
    };
    auto canonical = [&](const Eigen::VectorXd& U, const Eigen::VectorXd& V) {
      double val = 0.0;
      for (int k = 0; k < N; ++k) val += U[k] * V[N + k] - V[k] * U[N + k];
      return val;
    };
    const double h = 1e-4;
    const Eigen::VectorXd z = rand_vec(rng, 2 * N, -1.5, 1.5);
    const Eigen::VectorXd U = rand_vec(rng, 2 * N, -1.0, 1.0);
    const Eigen::VectorXd V = rand_vec(rng, 2 * N, -1.0, 1.0);
    const Eigen::VectorXd TU = (apply(z + h * U) - apply(z - h * U)) / (2 * h);
    const Eigen::VectorXd TV = (apply(z + h * V) - apply(z - h * V)) / (2 * h);
    worst_fd = std::max(worst_fd, std::abs(canonical(TU, TV) + canonical(U, V)));
    const Covector theta{M.point(Side::E, z.head(n), z.segment(n, m)),
                         z.segment(n + m, n), z.tail(m)};
    const Covector img = r_map(M, theta);
    worst_legs = std::max({worst_legs, max_abs(img.base.fiber - theta.pi),
                           max_abs(img.pi - theta.base.fiber)});
  }
  const bool pass = worst_fd < kTolFd && worst_legs <= kTolLegs;
  return {pass, "pullback deviation " + fmt(worst_fd) + " (tol " +
                    fmt(kTolFd) + "), leg identities " + fmt(worst_legs) +
                    " (tol " + fmt(kTolLegs) + ")"};
}

// The velocity-side dynamics map commutes with inclusion and generates the
// same motions as the solved fields on both sides.
Outcome dynamics_map_commutation() {
  constexpr double kTol = 1e-8;
  double worst = 0.0;
  Rng rng(1010);
  for (const std::string& name : kCompatible) {
    const AlgebroidModel M = AlgebroidModel::builtin(name);
    for (int s = 0; s < 100; ++s) {
      const ScalarField L = random_phase_field(M, Side::E, rng);
      const PhasePoint a = random_point(M, Side::E, rng);
      const Covector dL = differential(M, L, a);
      const TangentVec via =
          include_vector(M, eps_tilde(M, dual_project(M, dL)));
      worst = std::max(worst, tangent_gap(via, epsilon_map(M, dL)));
    }
    const ScalarField Lreg = random_regular_lagrangian(M, rng);
    for (int s = 0; s < 10; ++s) {
      const PhasePoint a = random_point(M, Side::E, rng);
      const TangentVec X = el_field(M, Lreg, a, ELRoute::Phase);
      const TangentVec lhs = tangent_legendre(M, Lreg, X);
      const TangentVec rhs = include_vector(
          M, eps_tilde(M, dual_project(M, differential(M, Lreg, a))));
      worst = std::max(worst, tangent_gap(lhs, rhs));

      const ScalarField H = random_phase_field(M, Side::Dual, rng);
      const PhasePoint p = random_point(M, Side::Dual, rng);
      const TangentVec hvia =
          include_vector(M, hamiltonian_section(M, H, p));
      worst = std::max(worst, tangent_gap(hvia, hamiltonian_field(M, H, p)));
    }
  }
  return {worst <= kTol, "max gap " + fmt(worst) + ", tol " + fmt(kTol) +
                             ", maps and generated motions"};
}

}  // namespace

int main() {
  struct Criterion {
    std::string label;
    double time_limit_s;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria = {
      {"hamiltonian section equals bi-vector field", 5.0,
       hamiltonian_section_routes},
      {"inverted two-form closed form", 30.0, omega_inverse_closed_form},
      {"euler-lagrange cross residuals", 5.0, euler_lagrange_cross_residuals},
      {"energy pairing identity", 30.0, energy_pairing_identity},
      {"multiplier uniqueness", 30.0, multiplier_uniqueness},
      {"representation independence", 30.0, representation_independence},
      {"legendre duality of dynamics", 10.0, legendre_duality_dynamics},
      {"integrator convergence order", 30.0, integrator_convergence_order},
      {"dualization pullback", 30.0, dualization_pullback},
      {"dynamics map commutation", 30.0, dynamics_map_commutation},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = elapsed < criteria[i].time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s  %2zu. %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].label.c_str(), o.detail.c_str(), elapsed,
                in_time ? "" : ", over time limit");
  }
  if (failures > 0) {
    std::printf("acceptance: %d of %zu criteria failed\n", failures,
                criteria.size());
    return 1;
  }
  std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  return 0;
}
