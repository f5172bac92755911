#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "algmech/field.hpp"
#include "json.hpp"

namespace algmech {

/// Which total space a fiber point or field lives on: E carries velocity
/// coordinates y1..ym, the dual carries momentum coordinates xi1..xim.
enum class Side { E, Dual };

/// Point of the total space of E or E*: base coordinates x plus fiber
/// coordinates.
struct PhasePoint {
  Side side = Side::E;
  Eigen::VectorXd x;
  Eigen::VectorXd fiber;
};

/// Section of E (frame coefficients) or of E* (coframe coefficients), each
/// coefficient a function of the base coordinates.
struct Section {
  std::vector<ScalarField> coeff;
};

/// Anchored vector bundle with a skew bracket in coordinates: a trivialized
/// bundle R^n x R^m with anchor matrix rho^i_a(x) and structure functions
/// C^c_ab(x), C skew in (a, b).  Instances are immutable after loading.
class AlgebroidModel {
 public:
  /// Loads {"name", "n", "m", "rho": n rows x m columns of expressions in
  /// x1..xn, "C": [c][a][b]}.  Skew-symmetry of C is checked on seeded
  /// sample points; the anchor-bracket compatibility residual is measured
  /// there as well and recorded in almost_lie().
  static AlgebroidModel from_json(const nlohmann::json& spec);
  static AlgebroidModel from_json_text(const std::string& text);
  static AlgebroidModel from_file(const std::string& path);
  static AlgebroidModel builtin(const std::string& name);
  static std::vector<std::string> builtin_names();

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int m() const { return m_; }

  /// True when the anchor-bracket compatibility residual vanished on every
  /// sample point at load time.
  bool almost_lie() const { return almost_lie_; }

  const ScalarField& rho_field(int i, int a) const;
  const ScalarField& c_field(int c, int a, int b) const;

  /// Anchor matrix values, n x m.
  Eigen::MatrixXd rho(const Eigen::VectorXd& x) const;

  /// Structure function values; entry [c] is the m x m matrix C^c_ab(x).
  std::vector<Eigen::MatrixXd> structure(const Eigen::VectorXd& x) const;

  /// Variable names for fields on the base (x1..xn) or on a total space.
  std::vector<std::string> base_vars() const;
  std::vector<std::string> phase_vars(Side side) const;

  PhasePoint point(Side side, Eigen::VectorXd x, Eigen::VectorXd fiber) const;
  void check(const PhasePoint& p) const;

  Section constant_section(const Eigen::VectorXd& values) const;
  Section frame_section(int a) const;

 private:
  std::string name_;
  int n_ = 0;
  int m_ = 0;
  bool almost_lie_ = false;
  std::vector<ScalarField> rho_;  // row-major n x m
  std::vector<ScalarField> c_;    // index (c*m + a)*m + b
};

/// rho(x) applied to a fiber vector.
Eigen::VectorXd anchor(const AlgebroidModel& M, const Eigen::VectorXd& e,
                       const Eigen::VectorXd& x);

/// Coefficients of the bracket of two sections at x: structure term plus the
/// anchor derivatives of the coefficients.
Eigen::VectorXd bracket(const AlgebroidModel& M, const Section& e,
                        const Section& e2, const Eigen::VectorXd& x);

/// Differential of a base function paired with a fiber vector:
/// the anchor-directional derivative of f.
double de_function(const AlgebroidModel& M, const ScalarField& f,
                   const Eigen::VectorXd& e, const Eigen::VectorXd& x);

/// Differential of a dual section evaluated on two sections at x.
double de_oneform(const AlgebroidModel& M, const Section& xi, const Section& e,
                  const Section& e2, const Eigen::VectorXd& x);

/// Largest absolute entry of the anchor-bracket compatibility defect
///   rho^i_c C^c_ab - (rho^j_a d_j rho^i_b - rho^j_b d_j rho^i_a)
/// over all (i, a, b) at x.
double almost_lie_residual(const AlgebroidModel& M, const Eigen::VectorXd& x);

/// Largest absolute component of the cyclic bracket defect over all frame
/// triples at x; zero for genuine Lie structures.
double jacobi_residual(const AlgebroidModel& M, const Eigen::VectorXd& x);

}  // namespace algmech
