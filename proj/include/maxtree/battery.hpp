#pragma once

// Randomized check of the inequality family on seeded random tree functions.
// Every trial function is tested against every requested parameter cell, and
// rows stream out in trial order regardless of how many threads are used.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "maxtree/inequality_lab.hpp"

namespace maxtree {

/// {1, (1+p)/2, p}
std::vector<double> standard_q_grid(double p);
/// {0.1, 1/(2(p-1)), 1/(p-1), 2/(p-1)}
std::vector<double> standard_beta_grid(double p);

struct BatteryConfig {
  std::vector<Inequality> inequalities{Inequality::weak_type, Inequality::linear,
                                       Inequality::q_family, Inequality::beta_family};
  std::vector<double> p_values{1.5, 2.0, 3.0, 5.0};
  std::vector<double> q_values;     // empty: standard_q_grid(p)
  std::vector<double> beta_values;  // empty: standard_beta_grid(p)
  std::vector<std::size_t> arities{2, 3};
  int min_depth = 2;
  int max_depth = 10;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  double slack = 1e-9;
  unsigned threads = 0;  // 0: configured_threads()

  /// Throws DomainError on an invalid grid, shape range or empty selection.
  void validate() const;
};

struct BatteryRow {
  Inequality ineq = Inequality::linear;
  double p = 0.0;     // NaN for the weak-type row
  double q = 0.0;     // NaN where the inequality has no q
  double beta = 0.0;  // NaN where the inequality has no beta
  std::uint64_t seed = 0;  // trial seed; regenerates the function
  double lambda = 0.0;     // weak-type level, NaN otherwise
  double f = 0.0;
  double F = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;

  bool violates(double slack) const;
};

struct BatterySummary {
  std::size_t trials = 0;
  std::size_t rows = 0;
  std::size_t violations = 0;
  double min_deficit = 0.0;           // smallest deficit over all rows
  double min_relative_deficit = 0.0;  // smallest deficit / max(1, |rhs|)
  std::optional<BatteryRow> argmin;   // row of min_relative_deficit
};

/// The function and weak-type level for one trial seed.
struct BatteryTrial {
  StepFunction phi;
  double lambda;
};
BatteryTrial make_trial(const BatteryConfig& config, std::uint64_t trial_seed);

/// All rows of one trial, in a fixed order: weak type, then per p the linear
/// row, the q rows, the (q, beta) rows and the Hardy rows.
std::vector<BatteryRow> evaluate_trial(const BatteryConfig& config,
                                       std::uint64_t trial_seed);

/// Runs the battery. When `csv` is non-null, writes the header
/// "ineq,p,q,beta,seed,f,F,lhs,rhs,deficit" followed by one row per check.
BatterySummary run_battery(const BatteryConfig& config, std::ostream* csv);

void write_battery_header(std::ostream& out);
void write_battery_row(std::ostream& out, const BatteryRow& row);
/// {"trials","rows","min_deficit","min_relative_deficit","argmin","violations"}
void write_battery_summary_json(std::ostream& out, const BatterySummary& summary);

}  // namespace maxtree
