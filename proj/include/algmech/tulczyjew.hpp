#pragma once

#include <Eigen/Dense>
#include <vector>

#include "algmech/algebroid.hpp"

namespace algmech {

/// Covector at a phase point: p pairs with base directions, pi with fiber
/// directions.
struct Covector {
  PhasePoint base;
  Eigen::VectorXd p;   // size n
  Eigen::VectorXd pi;  // size m
};

/// Tangent vector at a phase point.
struct TangentVec {
  PhasePoint base;
  Eigen::VectorXd dx;      // size n
  Eigen::VectorXd dfiber;  // size m
};

double pairing(const Covector& theta, const TangentVec& X);

/// Differential of a field on the total space holding the given point's side.
Covector differential(const AlgebroidModel& M, const ScalarField& f,
                      const PhasePoint& p);

/// Fiber components of the differential of f at p.
Eigen::VectorXd vertical_derivative(const AlgebroidModel& M,
                                    const ScalarField& f, const PhasePoint& p);

/// Fiber derivative of a Lagrangian: the momentum point lambda_L(a).
PhasePoint legendre(const AlgebroidModel& M, const ScalarField& L,
                    const PhasePoint& a);

/// Tangent map of the fiber derivative applied to X.
TangentVec tangent_legendre(const AlgebroidModel& M, const ScalarField& L,
                            const TangentVec& X);

/// Matrix of the canonical linear bi-vector on the dual bundle in the
/// coordinate basis (x1..xn, xi1..xim).  Entry (u, v) is the bi-vector
/// evaluated on (du, dv); the blocks are obtained by evaluating the defining
/// relations through the bracket and anchor operations, with the mirror
/// block fixed by skew-symmetry.
Eigen::MatrixXd lambda_matrix(const AlgebroidModel& M, const PhasePoint& p);

/// Contraction of a covector with the bi-vector: the linear-Poisson vector
/// field attached to theta at its base point.
TangentVec lambda_contraction(const AlgebroidModel& M, const Covector& theta);

/// Hamiltonian vector field of H at a dual-side point.
TangentVec hamiltonian_field(const AlgebroidModel& M, const ScalarField& H,
                             const PhasePoint& p);

/// Hamiltonian field minus the vertical lift of the force covector field.
TangentVec forced_hamiltonian_field(const AlgebroidModel& M,
                                    const ScalarField& H,
                                    const std::vector<ScalarField>& force,
                                    const PhasePoint& p);

/// Fiberwise dualization T*E -> T*E*.  The image covector satisfies the
/// pairing identity <theta, X> + <r_map(theta), Y> = d<.,.>(X, Y) for every
/// pair of tangent vectors with equal base-direction components; that
/// identity pins all signs: (x, y, p, pi) -> (x, xi = pi, -p, y).
Covector r_map(const AlgebroidModel& M, const Covector& theta);
Covector r_inv(const AlgebroidModel& M, const Covector& theta);

/// Phase dynamics map: the bi-vector contraction applied after r_map.
TangentVec epsilon_map(const AlgebroidModel& M, const Covector& theta);

/// Residual of the phase-space evolution law at the jet (a, X): the tangent
/// image of the fiber derivative along X minus epsilon of dL at a.
/// Zero exactly on solution jets.
Eigen::VectorXd el_residual_tt(const AlgebroidModel& M, const ScalarField& L,
                               const PhasePoint& a, const TangentVec& X);

/// rho(x) y - dx; zero when the jet is admissible.
Eigen::VectorXd admissibility_residual(const AlgebroidModel& M,
                                       const PhasePoint& a,
                                       const TangentVec& X);

}  // namespace algmech
