#pragma once

// Decreasing rearrangements, the one-dimensional Hardy average, and random
// rearrangements of a line function onto tree leaves.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "maxtree/tree_space.hpp"

namespace maxtree {

/// Function on (0, 1] equal to values[i] on (t_i, t_{i+1}], with
/// 0 = t_0 < t_1 < ... < t_k = 1.
class LineStepFunction {
 public:
  /// Throws DomainError on malformed breakpoints or negative values.
  LineStepFunction(std::vector<double> breakpoints, std::vector<double> values);
  static LineStepFunction constant(double value);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }

  /// C_0 = 0, C_i = integral over (0, t_i]. Size pieces() + 1.
  const std::vector<double>& prefix_integrals() const { return prefix_; }
  double integral() const { return prefix_.back(); }
  double power_integral(double r) const;
  /// |{t : g(t) > lambda}|, summed over maximal runs of breakpoints.
  double measure_above(double lambda) const;
  bool is_non_increasing() const;

  friend bool operator==(const LineStepFunction& a, const LineStepFunction& b) {
    return a.breakpoints_ == b.breakpoints_ && a.values_ == b.values_;
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> prefix_;
};

/// t -> c * t^(-a) on (0, 1], normalized so that its integral is f = c / (1 - a).
class PowerLawFunction {
 public:
  /// c = f (1 - a). Requires f > 0 and 0 <= a < 1.
  static PowerLawFunction from_mean(double f, double a);
  /// g(t) = K t^(-1 + 1/alpha) with alpha >= 1, i.e. a = 1 - 1/alpha, c = K.
  static PowerLawFunction from_extremal(double K, double alpha);

  double coefficient() const { return c_; }
  double exponent() const { return a_; }
  double mean() const { return f_; }

  double operator()(double t) const;
  /// (1/t) * int_0^t g = g(t) / (1 - a).
  double running_average(double t) const;
  /// int_0^1 g^r = c^r / (1 - a r). Throws DivergentIntegralError if a r >= 1.
  double power_integral(double r) const;
  /// int_{t0}^{t1} g, accurate for adjacent narrow cells.
  double integral(double t0, double t1) const;

 private:
  PowerLawFunction(double c, double a, double f) : c_(c), a_(a), f_(f) {}
  double c_;
  double a_;
  double f_;
};

using LineFunction = std::variant<LineStepFunction, PowerLawFunction>;

/// Leaf values sorted descending (stable: ties keep leaf order) with
/// breakpoints i / leaf_count.
LineStepFunction decreasing_rearrangement(const StepFunction& phi);

/// int_0^1 ((1/t) int_0^t g)^(p - q) g(t)^q dt. Closed form for power laws;
/// per-piece adaptive Gauss quadrature for step functions.
double hardy_moment(const LineFunction& g, double p, double q);
/// int_0^1 ((1/t) int_0^t g)^p dt.
double hardy_power(const LineFunction& g, double p);

/// int_0^1 f(t) for f = H^avg_exponent * g^value_exponent on a step function.
double hardy_integral(const LineStepFunction& g, double avg_exponent,
                      double value_exponent);

double mean(const LineFunction& g);
double power_integral(const LineFunction& g, double r);

/// Exact per-cell averages on `cells` equal cells.
LineStepFunction discretize(const PowerLawFunction& g, std::size_t cells);
LineStepFunction discretize(const LineStepFunction& g, std::size_t cells);

/// Seed reserved for the identity arrangement.
inline constexpr std::uint64_t kIdentitySeed = 0;

/// Uniformly random placement of g's values onto the leaves (leaf i receives
/// values[perm[i]]). Requires exactly leaf_count equal-width pieces; throws
/// ShapeError otherwise. Seed kIdentitySeed gives the identity placement.
StepFunction random_rearrangement(const LineStepFunction& g, const Tree& tree,
                                  std::uint64_t seed);

/// Rows "t_i,value_i": value on (t_{i-1}, t_i], t_0 = 0 implicit, last t = 1.
LineStepFunction read_line_step_function(std::istream& in);
void write_line_step_function(std::ostream& out, const LineStepFunction& g);

/// "powerlaw:f=<v>,alpha=<v>" -> t -> f (1 - alpha) t^(-alpha).
PowerLawFunction parse_power_law(std::string_view spec);

}  // namespace maxtree
