#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "algmech/algebroid.hpp"
#include "algmech/tulczyjew.hpp"

namespace algmech {

/// Element of the prolongation of the bundle over one of its total spaces,
/// expressed in the standard frame: e holds the bundle-fiber slot, w the
/// vertical slot.  The included tangent vector is (rho(x) e, w).
struct ProlongVector {
  PhasePoint base;
  Eigen::VectorXd e;  // size m
  Eigen::VectorXd w;  // size m
};

/// Covector on the prolongation in the dual standard frame: alpha pairs with
/// the e-slot, beta with the w-slot.
struct ProlongCovector {
  PhasePoint base;
  Eigen::VectorXd alpha;  // size m
  Eigen::VectorXd beta;   // size m
};

/// One-form on the prolongation, stored as a sum of two kinds of terms:
///   - pairing terms (f, s): the function f on the total space times the
///     pairing of the dual section s with the e-slot;
///   - an optional one-form theta on the total space (n + m coefficient
///     fields) applied to the included tangent vector.
struct ProlongForm {
  std::vector<std::pair<ScalarField, Section>> pairing_terms;
  std::vector<ScalarField> theta;
};

/// Tolerance used when a jet must satisfy the anchor compatibility
/// constraint before a prolongation-side computation is meaningful.
inline constexpr double kAdmissibilityTol = 1e-9;

/// Tangent vector of the total space carried by a prolongation vector.
TangentVec include_vector(const AlgebroidModel& M, const ProlongVector& v);

/// Coefficients of the restriction of a covector on the ambient product
/// (phi on the bundle fiber plus theta on the tangent of the total space)
/// to the prolongation: alpha = phi + rho^T p, beta = pi.
ProlongCovector dual_project(const AlgebroidModel& M,
                             const Eigen::VectorXd& phi,
                             const Covector& theta);
ProlongCovector dual_project(const AlgebroidModel& M, const Covector& theta);

/// Derivative of a total-space function along the included vector.
double d_prolong_function(const AlgebroidModel& M, const ScalarField& f,
                          const ProlongVector& v);

/// Value of a stored one-form on a prolongation vector.
double prolong_form_value(const AlgebroidModel& M, const ProlongForm& form,
                          const ProlongVector& v);

/// Exterior derivative of a stored one-form evaluated on two prolongation
/// vectors at the same point.  Pairing terms use constant-coefficient
/// extensions of the arguments and the bracket of those sections; the
/// total-space term uses the pointwise coordinate formula for the exterior
/// derivative of theta on the included vectors.
double d_prolong_oneform(const AlgebroidModel& M, const ProlongForm& form,
                         const ProlongVector& v, const ProlongVector& v2);

/// Difference between the exterior derivatives of the two natural
/// representations of a pulled-back base one-form (coefficients alpha_i on
/// the base): once through pairing terms weighted by the anchor, once as a
/// total-space one-form.  Vanishes at anchor-compatible structures.
double decomposition_independence_residual(const AlgebroidModel& M,
                                           const std::vector<ScalarField>& alpha,
                                           const ProlongVector& v,
                                           const ProlongVector& v2);

/// Canonical one-form on the prolongation over the dual: its value on v is
/// the pairing of the point's momentum with the e-slot.
double mu_eval(const AlgebroidModel& M, const ProlongVector& v);

/// The canonical one-form written as pairing terms (momentum coordinate
/// functions times the dual frame sections).
ProlongForm mu_form(const AlgebroidModel& M);

/// Canonical two-form on the prolongation over the dual (minus the exterior
/// derivative of the canonical one-form), evaluated through the bracket of
/// constant-coefficient sections.
double omega_eval(const AlgebroidModel& M, const ProlongVector& v,
                  const ProlongVector& v2);

/// Matrix of the canonical two-form in the standard frame, order
/// (Z_1..Z_m, V_1..V_m); entry (u, r) is the form on (frame_u, frame_r).
Eigen::MatrixXd omega_matrix(const AlgebroidModel& M, const PhasePoint& p);

/// Solves the contraction equation of the canonical two-form for the given
/// covector coefficients via the frame matrix.
ProlongVector omega_inv_map(const AlgebroidModel& M, const ProlongCovector& c);

/// Closed-form companion of omega_inv_map: e = beta,
/// w = -(momentum-weighted structure matrix) beta - alpha.
ProlongVector omega_inv_direct(const AlgebroidModel& M,
                               const ProlongCovector& c);

/// Prolongation vector whose contraction with the canonical two-form is the
/// projected differential of H; its included vector is the Hamiltonian field.
ProlongVector hamiltonian_section(const AlgebroidModel& M,
                                  const ScalarField& H, const PhasePoint& p);

/// Prolongation of the fiber derivative of L: keeps the e-slot and maps the
/// vertical slot through the second fiber derivatives.
ProlongVector prolong_legendre(const AlgebroidModel& M, const ScalarField& L,
                               const ProlongVector& v);

/// Pullback of the canonical two-form under the prolonged fiber derivative,
/// as a frame matrix at the velocity point a.
Eigen::MatrixXd omega_l_matrix(const AlgebroidModel& M, const ScalarField& L,
                               const PhasePoint& a);

/// Energy of a Lagrangian at a velocity point: fiber derivative paired with
/// the velocity, minus L.
double energy(const AlgebroidModel& M, const ScalarField& L,
              const PhasePoint& a);

/// Exact differential of the energy, computed from the 2-jet of L.
Covector energy_differential(const AlgebroidModel& M, const ScalarField& L,
                             const PhasePoint& a);

/// Residual of the velocity-side evolution law at the admissible jet (a, X):
/// contraction of the pulled-back two-form with (y, dy) minus the projected
/// energy differential, in the dual standard frame.  Throws DomainError when
/// the jet violates the anchor constraint beyond kAdmissibilityTol.
Eigen::VectorXd el_residual_prolong(const AlgebroidModel& M,
                                    const ScalarField& L, const PhasePoint& a,
                                    const TangentVec& X);

/// Dualization on prolongation covector coefficients: a covector over a
/// velocity point (x, y) maps to one over the momentum point (x, beta) with
/// alpha' = -alpha and beta' = y.  The sign follows from pushing a
/// representative with vanishing fiber slot through the fiberwise
/// dualization of the total-space cotangents.
ProlongCovector r_tilde(const AlgebroidModel& M, const ProlongCovector& c);
ProlongCovector r_tilde_inv(const AlgebroidModel& M, const ProlongCovector& c);

/// Velocity-side phase dynamics map: dualization followed by the inverse of
/// the canonical two-form.
ProlongVector eps_tilde(const AlgebroidModel& M, const ProlongCovector& c);

}  // namespace algmech
