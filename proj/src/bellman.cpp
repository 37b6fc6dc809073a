#include "maxtree/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxtree/error.hpp"
#include "maxtree/format.hpp"

namespace maxtree {

void check_exponent(double p) {
  if (!(p > 1.0 && p <= kMaxExponent)) {
    throw DomainError("exponent p must lie in (1, 64], got " + format_double(p));
  }
}

BellmanCurve::BellmanCurve(double p, double tolerance)
    : p_(p), tolerance_(tolerance), z_max_(0.0) {
  check_exponent(p);
  if (!(tolerance > 0.0)) throw DomainError("inversion tolerance must be positive");
  z_max_ = p / (p - 1.0);
}

double BellmanCurve::h(double z) const {
  if (!(z >= 1.0 && z <= z_max_)) {
    throw DomainError("H_p is defined on [1, " + format_double(z_max_) + "], got z = " +
                      format_double(z));
  }
  // -(p-1) z^p + p z^(p-1), factored to avoid cancelling two large terms.
  return std::pow(z, p_ - 1.0) * (p_ - (p_ - 1.0) * z);
}

double BellmanCurve::omega(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("omega_p is defined on [0, 1], got x = " + format_double(x));
  }
  if (x == 1.0) return 1.0;
  if (x == 0.0) return z_max_;
  double lo = 1.0;
  double hi = z_max_;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double hm = h(mid);
    if (hi - lo <= tolerance_ && std::abs(hm - x) <= tolerance_) break;
    if (hm > x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

double h_p(double z, double p) { return BellmanCurve(p).h(z); }
double omega_p(double x, double p) { return BellmanCurve(p).omega(x); }

namespace {

// f^p / F, validated. Rounding slack lets F = pow(f, p) through.
double moment_ratio(double p, double f, double F) {
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw DomainError("first moment f must be positive, got " + format_double(f));
  }
  if (!(F > 0.0) || !std::isfinite(F)) {
    throw DomainError("p-th moment F must be positive, got " + format_double(F));
  }
  const double x = std::pow(f, p) / F;
  if (x > 1.0 + 1e-12) {
    throw InfeasibleMomentsError("moments violate Jensen's inequality: f^p = " +
                                 format_double(std::pow(f, p)) + " > F = " +
                                 format_double(F));
  }
  return std::min(x, 1.0);
}

}  // namespace

BellmanPoint bellman_value(double p, double f, double F) {
  const BellmanCurve curve(p);
  const double x = moment_ratio(p, f, F);
  BellmanPoint pt;
  pt.p = p;
  pt.f = f;
  pt.F = F;
  pt.alpha = curve.omega(x);
  pt.value = F * std::pow(pt.alpha, p);
  pt.K = f / pt.alpha;
  return pt;
}

double beta_family_bound(double p, double f, double F, double beta) {
  check_exponent(p);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive, got " + format_double(beta));
  }
  moment_ratio(p, f, F);
  return (beta + 1.0) / beta * (std::pow(beta + 1.0, p - 1.0) * F - std::pow(f, p)) /
         (p - 1.0);
}

BetaFamilyMinimum minimize_beta_family_bound(double p, double f, double F) {
  check_exponent(p);
  const double x = moment_ratio(p, f, F);
  BetaFamilyMinimum out;
  if (x >= 1.0) {
    // beta -> 0 limit of the bound when F = f^p.
    out.beta_opt = 0.0;
    out.min_value = std::pow(f, p);
    return out;
  }
  const auto bound = [&](double b) { return beta_family_bound(p, f, F, b); };
  const double top = 1.0 / (p - 1.0);

  // Coarse scan for a second dip before trusting golden section.
  constexpr int kScan = 64;
  int turns = 0;
  double prev = bound(top / kScan);
  int prev_dir = 0;
  for (int i = 2; i <= kScan; ++i) {
    const double cur = bound(top * i / kScan);
    const int dir = cur < prev ? -1 : (cur > prev ? 1 : 0);
    if (dir != 0) {
      if (prev_dir == 1 && dir == -1) ++turns;
      prev_dir = dir;
    }
    prev = cur;
  }
  if (turns > 0) {
    out.unimodal = false;
    out.warning = "beta-family bound is not unimodal on (0, 1/(p-1)]";
  }

  const double inv_phi = std::numbers::phi - 1.0;
  double a = top * 1e-12;
  double b = top;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = bound(c);
  double fd = bound(d);
  for (int iter = 0; iter < 500 && (b - a) > 1e-12; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = bound(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = bound(d);
    }
  }
  out.beta_opt = 0.5 * (a + b);
  out.min_value = bound(out.beta_opt);
  return out;
}

}  // namespace maxtree
