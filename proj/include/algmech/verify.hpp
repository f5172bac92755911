#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "algmech/algebroid.hpp"
#include "algmech/field.hpp"

namespace algmech {

/// Outcome of one property check on one model.  A report is healthy when
/// passed matches the expectation: checks on deliberately broken structures
/// are expected to fail, and their failing is the certificate.
struct VerificationReport {
  std::string check;
  std::string model;
  int samples = 0;
  double max_residual = 0.0;
  double tol = 0.0;
  bool passed = false;
  bool expected_fail = false;
  std::uint64_t seed = 0;

  bool ok() const { return passed != expected_fail; }
};

/// One JSON object per line, fixed key order, shortest round-trip numbers.
std::string report_json_line(const VerificationReport& r);
void write_report_lines(const std::vector<VerificationReport>& reports,
                        std::ostream& out);
bool all_ok(const std::vector<VerificationReport>& reports);

/// Random polynomial function on a total space: monomials of degree at most
/// three in the fiber variables with base-variable factors of degree at most
/// two, coefficients in [-2, 2].
ScalarField random_phase_field(const AlgebroidModel& M, Side side,
                               std::mt19937_64& rng);

/// Random Lagrangian with a uniformly positive-definite velocity Hessian:
/// 0.5 y^T W0 y + (linear-in-x coefficients) y + base polynomial, with
/// W0 = A^T A + 0.5 I.
ScalarField random_regular_lagrangian(const AlgebroidModel& M,
                                      std::mt19937_64& rng);

/// Runs every applicable property check on one model with `samples` draws
/// per check.  Checks that presuppose anchor compatibility are skipped on
/// models that fail it; those models instead carry expected-fail gate
/// checks.  A positive tol_override replaces the tolerance of every check
/// that is expected to pass; expected-fail checks keep their thresholds.
std::vector<VerificationReport> verify_model(const AlgebroidModel& M,
                                             int samples, std::uint64_t seed,
                                             double tol_override = 0.0);

/// verify_model over the whole builtin registry.
std::vector<VerificationReport> verify_all(int samples, std::uint64_t seed,
                                           double tol_override = 0.0);

}  // namespace algmech
