#include "maxtree/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "maxtree/error.hpp"
#include "maxtree/format.hpp"
#include "maxtree/quadrature.hpp"

namespace maxtree {

// ---------------------------------------------------------------------------
// LineStepFunction

LineStepFunction::LineStepFunction(std::vector<double> breakpoints,
                                   std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
    throw DomainError("a line step function needs k >= 1 values and k + 1 breakpoints");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw DomainError("breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw DomainError("breakpoints must be strictly increasing (index " +
                        std::to_string(i) + ")");
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw DomainError("piece value " + std::to_string(i) +
                        " must be a finite nonnegative number");
    }
  }
  prefix_.resize(values_.size() + 1);
  prefix_[0] = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    prefix_[i + 1] = prefix_[i] + values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
  }
}

LineStepFunction LineStepFunction::constant(double value) {
  return LineStepFunction({0.0, 1.0}, {value});
}

double LineStepFunction::power_integral(double r) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    sum += std::pow(values_[i], r) * (breakpoints_[i + 1] - breakpoints_[i]);
  }
  return sum;
}

double LineStepFunction::measure_above(double lambda) const {
  double total = 0.0;
  std::size_t i = 0;
  while (i < values_.size()) {
    if (!(values_[i] > lambda)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < values_.size() && values_[i] > lambda) ++i;
    total += breakpoints_[i] - breakpoints_[start];
  }
  return total;
}

bool LineStepFunction::is_non_increasing() const {
  return std::is_sorted(values_.begin(), values_.end(), std::greater<>{});
}

// ---------------------------------------------------------------------------
// PowerLawFunction

PowerLawFunction PowerLawFunction::from_mean(double f, double a) {
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw DomainError("power-law mean f must be positive, got " + format_double(f));
  }
  if (!(a >= 0.0 && a < 1.0)) {
    throw DomainError("power-law exponent must lie in [0, 1), got " + format_double(a));
  }
  return PowerLawFunction(f * (1.0 - a), a, f);
}

PowerLawFunction PowerLawFunction::from_extremal(double K, double alpha) {
  if (!(K > 0.0) || !std::isfinite(K)) {
    throw DomainError("extremal coefficient K must be positive, got " + format_double(K));
  }
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw DomainError("extremal parameter alpha must be at least 1, got " +
                      format_double(alpha));
  }
  const double a = 1.0 - 1.0 / alpha;
  return PowerLawFunction(K, a, K * alpha);
}

double PowerLawFunction::operator()(double t) const { return c_ * std::pow(t, -a_); }

double PowerLawFunction::running_average(double t) const {
  return (*this)(t) / (1.0 - a_);
}

double PowerLawFunction::power_integral(double r) const {
  if (!(a_ * r < 1.0)) {
    throw DivergentIntegralError("integral of (c t^-a)^r diverges for a*r = " +
                                 format_double(a_ * r) + " >= 1");
  }
  return std::pow(c_, r) / (1.0 - a_ * r);
}

double PowerLawFunction::integral(double t0, double t1) const {
  const double b = 1.0 - a_;
  const double scale = c_ / b;
  if (t0 <= 0.0) return scale * std::pow(t1, b);
  // t1^b - t0^b = t0^b * expm1(b * log1p((t1 - t0) / t0))
  return scale * std::pow(t0, b) * std::expm1(b * std::log1p((t1 - t0) / t0));
}

// ---------------------------------------------------------------------------

LineStepFunction decreasing_rearrangement(const StepFunction& phi) {
  const std::span<const double> v = phi.values();
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  const std::size_t n = v.size();
  std::vector<double> breakpoints(n + 1);
  std::vector<double> values(n);
  for (std::size_t i = 0; i <= n; ++i) {
    breakpoints[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) values[i] = v[order[i]];
  return LineStepFunction(std::move(breakpoints), std::move(values));
}

namespace {

void check_exponents(double p, double q) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("exponent p must exceed 1, got " + format_double(p));
  }
  if (!(q >= 1.0 && q <= p)) {
    throw DomainError("exponent q must lie in [1, p], got q = " + format_double(q) +
                      " with p = " + format_double(p));
  }
}

// int_0^1 H^e1 g^e2 for a power law: c^(e1+e2) (1-a)^(-e1) / (1 - a (e1+e2)).
double power_law_hardy(const PowerLawFunction& g, double avg_exponent,
                       double value_exponent) {
  const double total = avg_exponent + value_exponent;
  const double a = g.exponent();
  if (!(a * total < 1.0)) {
    throw DivergentIntegralError("Hardy integral of c t^-a diverges: a*p = " +
                                 format_double(a * total) + " >= 1");
  }
  return std::pow(g.coefficient(), total) * std::pow(1.0 - a, -avg_exponent) /
         (1.0 - a * total);
}

}  // namespace

double hardy_integral(const LineStepFunction& g, double avg_exponent,
                      double value_exponent) {
  const auto t = g.breakpoints();
  const auto v = g.values();
  const auto& C = g.prefix_integrals();
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double lo = t[i];
    const double hi = t[i + 1];
    const double vi = v[i];
    // On (lo, hi] the running average is vi + (C_i - vi * lo) / t.
    const double excess = C[i] - vi * lo;
    const double tail = std::pow(vi, value_exponent);
    if (excess == 0.0 || avg_exponent == 0.0) {
      total += std::pow(vi, avg_exponent) * tail * (hi - lo);
      continue;
    }
    if (tail == 0.0) continue;
    const auto integrand = [&](double s) {
      return std::pow(vi + excess / s, avg_exponent);
    };
    total += tail * quadrature::integrate(integrand, lo, hi, 1e-10);
  }
  return total;
}

double hardy_moment(const LineFunction& g, double p, double q) {
  check_exponents(p, q);
  if (const auto* pl = std::get_if<PowerLawFunction>(&g)) {
    return power_law_hardy(*pl, p - q, q);
  }
  return hardy_integral(std::get<LineStepFunction>(g), p - q, q);
}

double hardy_power(const LineFunction& g, double p) {
  check_exponents(p, p);
  if (const auto* pl = std::get_if<PowerLawFunction>(&g)) {
    return power_law_hardy(*pl, p, 0.0);
  }
  return hardy_integral(std::get<LineStepFunction>(g), p, 0.0);
}

double mean(const LineFunction& g) {
  return std::visit(
      [](const auto& h) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(h)>, PowerLawFunction>) {
          return h.mean();
        } else {
          return h.integral();
        }
      },
      g);
}

double power_integral(const LineFunction& g, double r) {
  return std::visit([r](const auto& h) { return h.power_integral(r); }, g);
}

namespace {

std::vector<double> uniform_breakpoints(std::size_t cells) {
  std::vector<double> t(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(cells);
  }
  return t;
}

}  // namespace

LineStepFunction discretize(const PowerLawFunction& g, std::size_t cells) {
  if (cells == 0) throw DomainError("discretization needs at least one cell");
  std::vector<double> t = uniform_breakpoints(cells);
  std::vector<double> values(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    values[i] = g.integral(t[i], t[i + 1]) / (t[i + 1] - t[i]);
  }
  return LineStepFunction(std::move(t), std::move(values));
}

LineStepFunction discretize(const LineStepFunction& g, std::size_t cells) {
  if (cells == 0) throw DomainError("discretization needs at least one cell");
  const auto gt = g.breakpoints();
  const auto gv = g.values();
  const auto& C = g.prefix_integrals();
  // G(x) = int_0^x g
  const auto cumulative = [&](double x) {
    const auto it = std::upper_bound(gt.begin(), gt.end(), x);
    std::size_t i = static_cast<std::size_t>(it - gt.begin());
    i = i == 0 ? 0 : i - 1;
    if (i >= gv.size()) return C.back();
    return C[i] + gv[i] * (x - gt[i]);
  };
  std::vector<double> t = uniform_breakpoints(cells);
  std::vector<double> values(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    values[i] = std::max(0.0, (cumulative(t[i + 1]) - cumulative(t[i])) / (t[i + 1] - t[i]));
  }
  return LineStepFunction(std::move(t), std::move(values));
}

StepFunction random_rearrangement(const LineStepFunction& g, const Tree& tree,
                                  std::uint64_t seed) {
  const std::size_t n = tree.leaf_count();
  if (g.pieces() != n) {
    throw ShapeError("rearrangement needs " + std::to_string(n) +
                     " equal pieces, the line function has " +
                     std::to_string(g.pieces()));
  }
  const auto t = g.breakpoints();
  const double width = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs((t[i + 1] - t[i]) - width) > 1e-12) {
      throw ShapeError("rearrangement needs equal-width pieces; piece " +
                       std::to_string(i) + " has width " + format_double(t[i + 1] - t[i]));
    }
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (seed != kIdentitySeed) {
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  std::vector<double> values(n);
  const auto v = g.values();
  for (std::size_t i = 0; i < n; ++i) values[i] = v[perm[i]];
  return StepFunction(tree, std::move(values));
}

LineStepFunction read_line_step_function(std::istream& in) {
  std::vector<double> breakpoints{0.0};
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty() || row == "t,value") continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 't_i,value_i'");
    }
    breakpoints.push_back(
        parse_double(row.substr(0, comma), "t on line " + std::to_string(line_no)));
    values.push_back(
        parse_double(row.substr(comma + 1), "value on line " + std::to_string(line_no)));
  }
  if (values.empty()) throw ParseError("line step function file has no rows");
  try {
    return LineStepFunction(std::move(breakpoints), std::move(values));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid line step function: ") + e.what());
  }
}

void write_line_step_function(std::ostream& out, const LineStepFunction& g) {
  const auto t = g.breakpoints();
  const auto v = g.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << format_double(t[i + 1]) << ',' << format_double(v[i]) << '\n';
  }
}

PowerLawFunction parse_power_law(std::string_view spec) {
  constexpr std::string_view prefix = "powerlaw:";
  spec = trim(spec);
  if (spec.substr(0, prefix.size()) != prefix) {
    throw ParseError("power-law spec must start with 'powerlaw:', got '" +
                     std::string(spec) + "'");
  }
  spec.remove_prefix(prefix.size());
  double f = 0.0;
  double alpha = 0.0;
  bool have_f = false;
  bool have_alpha = false;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("power-law field '" + std::string(item) + "' is not key=value");
    }
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = item.substr(eq + 1);
    if (key == "f") {
      f = parse_double(value, "powerlaw f");
      have_f = true;
    } else if (key == "alpha") {
      alpha = parse_double(value, "powerlaw alpha");
      have_alpha = true;
    } else {
      throw ParseError("unknown power-law field '" + std::string(key) + "'");
    }
  }
  if (!have_f) throw ParseError("power-law spec is missing field 'f'");
  if (!have_alpha) throw ParseError("power-law spec is missing field 'alpha'");
  try {
    return PowerLawFunction::from_mean(f, alpha);
  } catch (const DomainError& e) {
    throw ParseError(std::string("power-law spec: ") + e.what());
  }
}

}  // namespace maxtree
