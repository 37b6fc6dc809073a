#include "maxtree/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxtree/bellman.hpp"
#include "maxtree/error.hpp"
#include "maxtree/format.hpp"
#include "maxtree/kernels.hpp"
#include "maxtree/maximal_op.hpp"

namespace maxtree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct WireName {
  Inequality ineq;
  std::string_view id;
};

constexpr WireName kWireNames[] = {
    {Inequality::weak_type, "1.2"},   {Inequality::linear, "1.7"},
    {Inequality::q_family, "1.8"},    {Inequality::beta_family, "1.9"},
    {Inequality::hardy, "1.10"},
};

// Distance of alpha*p from 1 below which the power-law integrals are treated
// as divergent and the family is evaluated through its limit.
constexpr double kBoundaryTolerance = 1e-12;

}  // namespace

std::string_view wire_id(Inequality ineq) {
  for (const auto& w : kWireNames) {
    if (w.ineq == ineq) return w.id;
  }
  return "?";
}

Inequality parse_inequality(std::string_view id) {
  id = trim(id);
  for (const auto& w : kWireNames) {
    if (w.id == id) return w.ineq;
  }
  throw ParseError("unknown inequality '" + std::string(id) +
                   "' (expected 1.2, 1.7, 1.8, 1.9 or 1.10)");
}

void IneqParams::validate() const {
  check_exponent(p);
  if (!(q >= 1.0 && q <= p)) {
    throw DomainError("q must lie in [1, p], got q = " + format_double(q) +
                      " with p = " + format_double(p));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive, got " + format_double(beta));
  }
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw DomainError("f must be positive, got " + format_double(f));
  }
}

double weight_A(double p, double q, double beta) {
  const double b1 = beta + 1.0;
  return (q - 1.0) * beta / std::pow(b1, q) + (p - q) / p / std::pow(b1, q - 1.0);
}

double root_function(double t, double p, double q, double A) {
  return A + (q - 1.0) * std::pow(t, q) - q * (p - 1.0) / p * std::pow(t, q - 1.0);
}

double gap_function(double x, const IneqParams& params, double A) {
  const double p = params.p;
  const double t = (p - 1.0) / p + std::pow(params.f, p) / (p * x);
  return A * x - x * std::pow(t, params.q);
}

Constants constants(const IneqParams& params) {
  params.validate();
  const double p = params.p;
  const double q = params.q;
  const double beta = params.beta;
  const double b1 = beta + 1.0;

  Constants c;
  c.A = weight_A(p, q, beta);
  c.h_val = c.A;
  const RhsCoefficients rc = rhs_coefficients(Inequality::beta_family, p, q, beta);
  c.c1 = rc.c1;
  c.c2 = rc.c2;
  c.t0 = (p - 1.0) / p;

  if (q == 1.0) {
    c.t_beta = std::max(1.0 / b1, c.t0);
  } else {
    const auto F = [&](double t) { return root_function(t, p, q, c.A); };
    if (F(c.t0) >= 0.0) {
      c.t_beta = c.t0;
    } else {
      double lo = c.t0;
      double hi = std::max(1.0, 1.0 / b1 + 1.0);
      while (!(F(hi) > 0.0)) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NumericalError("no sign change for the root of F(t)");
      }
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (F(mid) > 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      c.t_beta = 0.5 * (lo + hi);
    }
  }
  const double gap = p * c.t_beta - (p - 1.0);
  c.x_beta = gap > 0.0 ? std::pow(params.f, p) / gap : kInf;
  return c;
}

double DeficitReport::scale() const { return std::max(1.0, std::abs(rhs)); }

bool DeficitReport::violates(double slack) const {
  if (std::isnan(deficit)) return true;
  return deficit < -slack * (std::isfinite(rhs) ? scale() : 1.0);
}

RhsCoefficients rhs_coefficients(Inequality ineq, double p, double q, double beta) {
  switch (ineq) {
    case Inequality::linear:
      return {1.0 / (p - 1.0), p / (p - 1.0)};
    case Inequality::q_family:
      return {q / (p - 1.0), std::pow(p / (p - 1.0), q)};
    case Inequality::beta_family:
    case Inequality::hardy: {
      const double denom = (p - 1.0) * q * beta + (p - q);
      return {q * (beta + 1.0) / denom, p * std::pow(beta + 1.0, q) / denom};
    }
    case Inequality::weak_type:
      break;
  }
  throw DomainError("weak-type inequality has no integral right side");
}

double inequality_rhs(Inequality ineq, const IneqParams& params, double f, double J1,
                      double Jq) {
  const RhsCoefficients c = rhs_coefficients(ineq, params.p, params.q, params.beta);
  const double J = ineq == Inequality::linear ? J1 : Jq;
  return -c.c1 * std::pow(f, params.p) + c.c2 * J;
}

DeficitReport deficit(Inequality ineq, const StepFunction& phi, const IneqParams& params) {
  if (ineq == Inequality::weak_type || ineq == Inequality::hardy) {
    throw DomainError("deficit() evaluates the tree inequalities 1.7, 1.8 and 1.9 only");
  }
  DeficitReport r;
  r.ineq = ineq;
  r.params = params;
  r.f = moment(phi, 1.0);
  r.params.f = r.f;
  r.params.validate();
  const double p = params.p;
  const double q = ineq == Inequality::linear ? 1.0 : params.q;

  const Tree& tree = phi.tree();
  const std::size_t n = phi.size();
  const std::vector<double> m = maximal_values(phi);
  std::vector<double> a(n), b(n), prod(n);

  kernels::power(phi.values(), p, a);
  r.F = tree.integrate(a);
  kernels::power(m, p, a);
  r.J0 = tree.integrate(a);
  kernels::power(m, p - 1.0, a);
  kernels::multiply(phi.values(), a, prod);
  r.J1 = tree.integrate(prod);
  if (q == 1.0) {
    r.Jq = r.J1;
  } else if (q == p) {
    r.Jq = r.F;
  } else {
    kernels::power(phi.values(), q, a);
    kernels::power(m, p - q, b);
    kernels::multiply(a, b, prod);
    r.Jq = tree.integrate(prod);
  }
  r.lhs = r.J0;
  r.rhs = inequality_rhs(ineq, r.params, r.f, r.J1, r.Jq);
  r.deficit = r.rhs - r.lhs;
  return r;
}

DeficitReport weak_type_report(const StepFunction& phi, double lambda) {
  const std::vector<double> m = maximal_values(phi);
  const WeakTypeTerms t = weak_type_terms(phi, m, lambda);
  DeficitReport r;
  r.ineq = Inequality::weak_type;
  r.f = moment(phi, 1.0);
  r.F = std::numeric_limits<double>::quiet_NaN();
  r.params.p = r.params.q = r.params.beta = std::numeric_limits<double>::quiet_NaN();
  r.params.f = r.f;
  r.lhs = t.set_measure;
  r.rhs = t.restricted_integral / lambda;
  r.deficit = r.rhs - r.lhs;
  return r;
}

DeficitReport hardy_deficit(const LineFunction& g, const IneqParams& params) {
  DeficitReport r;
  r.ineq = Inequality::hardy;
  r.params = params;
  r.f = mean(g);
  r.params.f = r.f;
  r.params.validate();
  const Constants c = constants(r.params);
  r.F = power_integral(g, params.p);
  r.J0 = hardy_power(g, params.p);
  r.J1 = hardy_moment(g, params.p, 1.0);
  r.Jq = hardy_moment(g, params.p, params.q);
  r.lhs = r.J0;
  r.rhs = -c.c1 * std::pow(r.f, params.p) + c.c2 * r.Jq;
  r.deficit = r.rhs - r.lhs;
  return r;
}

double sharpness_gap(double alpha, double p, double q) {
  check_exponent(p);
  if (!(q >= 1.0 && q <= p)) throw DomainError("q must lie in [1, p]");
  if (!(alpha > 0.0 && alpha * p < 1.0)) {
    throw DomainError("alpha must lie in (0, 1/p), got " + format_double(alpha));
  }
  // (p/(p-1)) (1 - alpha) = 1 + u/(p-1) with u = 1 - alpha p.
  const double u = std::fma(-alpha, p, 1.0);
  return std::expm1(q * std::log1p(u / (p - 1.0))) / u;
}

std::string_view to_string(Family family) {
  return family == Family::g_alpha ? "g_alpha" : "g_beta";
}

Family parse_family(std::string_view name) {
  name = trim(name);
  if (name == "g_alpha") return Family::g_alpha;
  if (name == "g_beta") return Family::g_beta;
  throw ParseError("unknown extremizer family '" + std::string(name) +
                   "' (expected g_alpha or g_beta)");
}

double beta_family_residual(double p, double q, double beta, double f) {
  IneqParams params{p, q, beta, f};
  params.validate();
  const double b1 = beta + 1.0;
  const double alpha = beta / b1;
  if (std::abs(std::fma(-alpha, p, 1.0)) <= kBoundaryTolerance) {
    // J = c^p (1-a)^(-p) ((1-a)^q - A) / (1 - a p) with 1 - a = 1/(beta+1);
    // numerator and denominator vanish together, and the quotient of their
    // beta-derivatives is q (beta+1)^(1-q) / p.
    return q / p * std::pow(b1, 1.0 - q) * std::pow(f, p);
  }
  if (alpha * p > 1.0) {
    throw DivergentIntegralError("g_beta is not p-integrable for beta > 1/(p-1)");
  }
  const LineFunction g = PowerLawFunction::from_mean(f, alpha);
  return hardy_moment(g, p, q) - weight_A(p, q, beta) * hardy_power(g, p);
}

std::vector<SweepPoint> extremizer_sweep(const IneqParams& params, Family family,
                                         std::span<const double> grid) {
  params.validate();
  const double p = params.p;
  const double q = params.q;
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (const double x : grid) {
    SweepPoint pt;
    pt.parameter = x;
    if (family == Family::g_alpha) {
      if (!(x > 0.0 && x * p < 1.0)) {
        pt.admissible = false;
        pt.reason = "alpha outside (0, 1/p): g_alpha is not p-integrable";
        out.push_back(std::move(pt));
        continue;
      }
      const LineFunction g = PowerLawFunction::from_mean(params.f, x);
      pt.report = hardy_deficit(g, params);
      pt.gap = sharpness_gap(x, p, q);
      pt.residual = pt.report.J0 - std::pow(p / (p - 1.0), q) * pt.report.Jq;
    } else {
      const double top = 1.0 / (p - 1.0);
      if (!(x > 0.0) || x > top * (1.0 + kBoundaryTolerance)) {
        pt.admissible = false;
        pt.reason = "beta outside (0, 1/(p-1)]: g_beta is not p-integrable";
        out.push_back(std::move(pt));
        continue;
      }
      IneqParams local = params;
      local.beta = x;
      const double alpha = x / (x + 1.0);
      pt.residual = beta_family_residual(p, q, x, params.f);
      if (std::abs(std::fma(-alpha, p, 1.0)) <= kBoundaryTolerance) {
        const Constants c = constants(local);
        DeficitReport& r = pt.report;
        r.ineq = Inequality::hardy;
        r.params = local;
        r.f = params.f;
        r.F = r.J0 = r.J1 = r.Jq = kInf;
        r.lhs = r.rhs = kInf;
        r.limit = true;
        r.deficit = c.c2 * pt.residual - c.c1 * std::pow(params.f, p);
      } else {
        pt.report = hardy_deficit(PowerLawFunction::from_mean(params.f, alpha), local);
      }
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace maxtree
