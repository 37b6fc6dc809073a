#pragma once

// Deficits (right side minus left side) of the integral inequalities for the
// tree maximal operator, their constants, and power-law extremizer families.
//
// For phi >= 0 with int phi = f, write
//   J0 = int (M phi)^p,  J1 = int phi (M phi)^(p-1),  Jq = int phi^q (M phi)^(p-q).
// The inequalities checked here are
//   weak type:    mu(M phi > l) <= (1/l) int_{M phi > l} phi
//   linear:       J0 <= -f^p/(p-1) + p/(p-1) J1
//   q family:     J0 <= -q/(p-1) f^p + (p/(p-1))^q Jq          (1 <= q <= p)
//   beta family:  J0 <= -c1 f^p + c2 Jq                        (beta > 0)
//   hardy:        the beta family with M phi replaced by the running average
//                 (1/t) int_0^t g of a non-increasing g on (0, 1].

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maxtree/rearrangement.hpp"
#include "maxtree/tree_space.hpp"

namespace maxtree {

enum class Inequality { weak_type, linear, q_family, beta_family, hardy };

/// Identifier used on the command line and in CSV output: "1.2", "1.7", "1.8",
/// "1.9", "1.10".
std::string_view wire_id(Inequality ineq);
/// Throws ParseError for unknown identifiers.
Inequality parse_inequality(std::string_view id);

struct IneqParams {
  double p = 2.0;
  double q = 1.0;
  double beta = 1.0;
  double f = 1.0;

  /// Throws DomainError unless 1 < p <= 64, q in [1, p], beta > 0, f > 0.
  void validate() const;
};

struct Constants {
  double A = 0.0;       // A(p, q, beta) = h(beta)
  double c1 = 0.0;      // q (beta+1) / ((p-1) q beta + (p-q))
  double c2 = 0.0;      // p (beta+1)^q / ((p-1) q beta + (p-q))
  double t0 = 0.0;      // (p-1)/p
  double t_beta = 0.0;  // root of root_function on [t0, inf)
  double h_val = 0.0;   // same as A
  double x_beta = 0.0;  // f^p / (p t_beta - (p-1)); +inf when t_beta = t0
};

/// A(p, q, beta) = (q-1) beta / (beta+1)^q + (p-q)/p / (beta+1)^(q-1).
double weight_A(double p, double q, double beta);

/// F(t) = A + (q-1) t^q - q (p-1)/p t^(q-1): derivative of gap_function in
/// the variable t = (p-1)/p + f^p / (p x).
double root_function(double t, double p, double q, double A);

/// G(x) = A x - x ((p-1)/p + f^p / (p x))^q.
double gap_function(double x, const IneqParams& params, double A);

/// All constants for a parameter point. t_beta is found by bisection on
/// [t0, hi], where hi doubles from max(1, 1/(beta+1) + 1) until F(hi) > 0.
/// For q = 1 the root function vanishes identically; t_beta is then reported
/// as max(1/(beta+1), t0).
Constants constants(const IneqParams& params);

struct DeficitReport {
  Inequality ineq = Inequality::linear;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  double f = 0.0;  // int phi (taken from the function, not the params)
  double F = 0.0;  // int phi^p
  double J0 = 0.0;
  double J1 = 0.0;
  double Jq = 0.0;
  IneqParams params;
  bool limit = false;  // lhs/rhs diverge; deficit is the limit value

  double scale() const;
  /// deficit < -slack * max(1, |rhs|)
  bool violates(double slack = 1e-9) const;
};

/// The integral inequalities share the shape J0 <= -c1 f^p + c2 J, where J is
/// J1 for the linear inequality and Jq otherwise.
struct RhsCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
};
RhsCoefficients rhs_coefficients(Inequality ineq, double p, double q, double beta);

/// Right side of a non-weak inequality from the three integrals.
double inequality_rhs(Inequality ineq, const IneqParams& params, double f,
                      double J1, double Jq);

/// Exact leaf-sum evaluation on a tree step function. `ineq` must be linear,
/// q_family or beta_family. params.f is replaced by int phi.
DeficitReport deficit(Inequality ineq, const StepFunction& phi, const IneqParams& params);

/// Weak-type report: lhs = mu(M phi > lambda), rhs = (1/lambda) int_{M phi > lambda} phi.
DeficitReport weak_type_report(const StepFunction& phi, double lambda);

/// Hardy-form deficit for a non-increasing g: lhs = hardy_power(g, p),
/// rhs = -c1 f^p + c2 hardy_moment(g, p, q), with f = int g.
DeficitReport hardy_deficit(const LineFunction& g, const IneqParams& params);

/// G(alpha) = ((p/(p-1))^q (1-alpha)^q - 1) / (1 - alpha p) for alpha in
/// (0, 1/p); tends to q/(p-1) as alpha -> 1/p. Evaluated through expm1/log1p
/// so it stays accurate next to 1/p.
double sharpness_gap(double alpha, double p, double q);

enum class Family { g_alpha, g_beta };
std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct SweepPoint {
  double parameter = 0.0;  // alpha for g_alpha, beta for g_beta
  bool admissible = true;
  std::string reason;      // why an inadmissible point was skipped
  DeficitReport report;
  /// g_alpha: J0 - (p/(p-1))^q Jq (= -f^p G(alpha)).
  /// g_beta:  Jq - A J0 (= q/p (beta+1)^(1-q) f^p).
  double residual = 0.0;
  double gap = 0.0;        // G(alpha), g_alpha only
};

/// Extremizer families c t^(-alpha), c = f (1 - alpha):
///   g_alpha: alpha from the grid, inequality constants from params.
///   g_beta:  beta from the grid, alpha = beta/(beta+1); admissible for
///            0 < beta <= 1/(p-1). At beta = 1/(p-1) the integrals diverge and
///            the residual is the limit along the family.
std::vector<SweepPoint> extremizer_sweep(const IneqParams& params, Family family,
                                         std::span<const double> grid);

/// Residual Jq - A J0 of the g_beta extremizer, including the removable
/// singularity at beta = 1/(p-1).
double beta_family_residual(double p, double q, double beta, double f);

}  // namespace maxtree
