#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "algmech/algebroid.hpp"
#include "algmech/tulczyjew.hpp"

namespace algmech {

/// Right-hand side of a first-order system in stacked coordinates.
using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// One classic fourth-order Runge-Kutta step.
Eigen::VectorXd rk4_step(const Rhs& f, double t, const Eigen::VectorXd& z,
                         double dt);

/// Which solve produces the velocity-side equations of motion.
enum class ELRoute { Phase, Prolong };

/// Sampled solution curve: states are stacked (x, fiber) vectors; monitors
/// hold one diagnostic row per sample in the order of monitor_names.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<std::string> state_names;
  std::vector<std::string> monitor_names;
  std::vector<Eigen::VectorXd> monitors;
};

/// The equations-of-motion jet at a velocity point, produced by the chosen
/// route.  Throws SingularError tagged with t when the linear solve meets a
/// degenerate matrix.
TangentVec el_field(const AlgebroidModel& M, const ScalarField& L,
                    const PhasePoint& a, ELRoute route, double t = 0.0);

/// Fixed-step integration of the Hamiltonian field on the dual; the energy
/// monitor records H along the samples.
Trajectory integrate_hamiltonian(const AlgebroidModel& M, const ScalarField& H,
                                 const PhasePoint& p0, double dt, double t_end);

/// Same driver with the force covector subtracted on the fiber equation.
Trajectory integrate_forced(const AlgebroidModel& M, const ScalarField& H,
                            const std::vector<ScalarField>& force,
                            const PhasePoint& p0, double dt, double t_end);

/// Fixed-step integration of the velocity-side equations via the chosen
/// route.  Monitors record energy, the anchor-constraint defect of the
/// evaluated jet, and both evolution-law residuals at each sample.
Trajectory integrate_el(const AlgebroidModel& M, const ScalarField& L,
                        const PhasePoint& a0, double dt, double t_end,
                        ELRoute route);

/// Writes "t,<states>,<monitors>" rows with shortest round-trip formatting.
void write_csv(const Trajectory& traj, std::ostream& out);

}  // namespace algmech
