#pragma once

// Closed-form Bellman function of the tree maximal operator in the variables
// f = int phi and F = int phi^p:
//
//   B(f, F) = F * omega_p(f^p / F)^p,
//
// where omega_p inverts H_p(z) = -(p-1) z^p + p z^(p-1), a decreasing
// bijection of [1, p/(p-1)] onto [0, 1].

#include <string>

namespace maxtree {

inline constexpr double kMaxExponent = 64.0;

/// Throws DomainError unless 1 < p <= kMaxExponent.
void check_exponent(double p);

class BellmanCurve {
 public:
  explicit BellmanCurve(double p, double tolerance = 1e-15);

  double p() const { return p_; }
  double tolerance() const { return tolerance_; }
  /// Right end of the domain of H_p, p / (p - 1).
  double z_max() const { return z_max_; }

  /// Throws DomainError for z outside [1, p/(p-1)].
  double h(double z) const;
  /// Unique z in [1, p/(p-1)] with H_p(z) = x, by bisection.
  /// Throws DomainError for x outside [0, 1].
  double omega(double x) const;

 private:
  double p_;
  double tolerance_;
  double z_max_;
};

double h_p(double z, double p);
double omega_p(double x, double p);

struct BellmanPoint {
  double p = 0.0;
  double f = 0.0;
  double F = 0.0;
  double value = 0.0;  // F * alpha^p
  double alpha = 1.0;  // omega_p(f^p / F)
  double K = 0.0;      // f / alpha; the extremal is K t^(-1 + 1/alpha)
};

/// Throws InfeasibleMomentsError if f^p > F, DomainError for f <= 0.
BellmanPoint bellman_value(double p, double f, double F);

/// (beta+1)/beta * ((beta+1)^(p-1) F - f^p) / (p-1): an upper bound on
/// int (M phi)^p for every beta > 0.
double beta_family_bound(double p, double f, double F, double beta);

struct BetaFamilyMinimum {
  double beta_opt = 0.0;
  double min_value = 0.0;
  bool unimodal = true;  // false if a coarse scan saw more than one dip
  std::string warning;
};

/// Golden-section minimization of beta_family_bound over beta in (0, 1/(p-1)].
/// Requires 0 < f^p < F.
BetaFamilyMinimum minimize_beta_family_bound(double p, double f, double F);

}  // namespace maxtree
