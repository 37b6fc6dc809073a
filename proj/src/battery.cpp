#include "maxtree/battery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "maxtree/bellman.hpp"
#include "maxtree/error.hpp"
#include "maxtree/format.hpp"
#include "maxtree/kernels.hpp"
#include "maxtree/maximal_op.hpp"
#include "maxtree/parallel.hpp"
#include "maxtree/random.hpp"
#include "maxtree/rearrangement.hpp"

namespace maxtree {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kChunk = 256;

bool wants(const BatteryConfig& config, Inequality ineq) {
  for (const auto i : config.inequalities) {
    if (i == ineq) return true;
  }
  return false;
}

std::vector<double> q_grid(const BatteryConfig& config, double p) {
  return config.q_values.empty() ? standard_q_grid(p) : config.q_values;
}

std::vector<double> beta_grid(const BatteryConfig& config, double p) {
  return config.beta_values.empty() ? standard_beta_grid(p) : config.beta_values;
}

std::string csv_field(double x) { return std::isnan(x) ? std::string() : format_double(x); }

nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::vector<double> standard_q_grid(double p) { return {1.0, (1.0 + p) / 2.0, p}; }

std::vector<double> standard_beta_grid(double p) {
  return {0.1, 1.0 / (2.0 * (p - 1.0)), 1.0 / (p - 1.0), 2.0 / (p - 1.0)};
}

void BatteryConfig::validate() const {
  if (inequalities.empty()) throw DomainError("no inequality selected");
  if (arities.empty()) throw DomainError("no arity selected");
  for (const auto k : arities) {
    if (k < 2) throw DomainError("arity must be at least 2, got " + std::to_string(k));
  }
  if (min_depth < 0 || max_depth < min_depth) {
    throw DomainError("depth range [" + std::to_string(min_depth) + ", " +
                      std::to_string(max_depth) + "] is empty or negative");
  }
  if (!(slack >= 0.0)) throw DomainError("slack must be nonnegative");
  bool needs_p = false;
  for (const auto i : inequalities) needs_p |= i != Inequality::weak_type;
  if (needs_p && p_values.empty()) throw DomainError("no exponent p selected");
  for (const double p : p_values) {
    check_exponent(p);
    for (const double q : q_grid(*this, p)) {
      for (const double beta : beta_grid(*this, p)) IneqParams{p, q, beta, 1.0}.validate();
    }
  }
}

bool BatteryRow::violates(double slack) const {
  if (std::isnan(deficit)) return true;
  return deficit < -slack * std::max(1.0, std::abs(rhs));
}

BatteryTrial make_trial(const BatteryConfig& config, std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  StepFunction phi =
      random_tree_function(rng, config.arities, config.min_depth, config.max_depth);
  const std::vector<double> m = maximal_values(phi);
  const double top = *std::max_element(m.begin(), m.end());
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return {std::move(phi), (1.0 - u) * 1.1 * top};
}

std::vector<BatteryRow> evaluate_trial(const BatteryConfig& config,
                                       std::uint64_t trial_seed) {
  const BatteryTrial trial = make_trial(config, trial_seed);
  const StepFunction& phi = trial.phi;
  const Tree& tree = phi.tree();
  const std::size_t n = phi.size();
  const std::vector<double> m = maximal_values(phi);
  const double f = moment(phi, 1.0);

  std::vector<BatteryRow> rows;
  auto push = [&](Inequality ineq, double p, double q, double beta, double F, double lhs,
                  double rhs) {
    BatteryRow r;
    r.ineq = ineq;
    r.p = p;
    r.q = q;
    r.beta = beta;
    r.seed = trial_seed;
    r.lambda = ineq == Inequality::weak_type ? trial.lambda : kNaN;
    r.f = f;
    r.F = F;
    r.lhs = lhs;
    r.rhs = rhs;
    r.deficit = rhs - lhs;
    rows.push_back(r);
  };

  if (wants(config, Inequality::weak_type)) {
    const WeakTypeTerms t = weak_type_terms(phi, m, trial.lambda);
    push(Inequality::weak_type, kNaN, kNaN, kNaN, kNaN, t.set_measure,
         t.restricted_integral / trial.lambda);
  }

  const bool linear = wants(config, Inequality::linear);
  const bool qfam = wants(config, Inequality::q_family);
  const bool bfam = wants(config, Inequality::beta_family);
  const bool hardy = wants(config, Inequality::hardy);
  if (!(linear || qfam || bfam || hardy)) return rows;

  std::vector<double> a(n), b(n), prod(n);
  std::optional<LineFunction> star;
  if (hardy) star = decreasing_rearrangement(phi);

  for (const double p : config.p_values) {
    const double fp = std::pow(f, p);
    kernels::power(phi.values(), p, a);
    const double F = tree.integrate(a);
    kernels::power(m, p, a);
    const double J0 = tree.integrate(a);
    kernels::power(m, p - 1.0, a);
    kernels::multiply(phi.values(), a, prod);
    const double J1 = tree.integrate(prod);

    if (linear) {
      const RhsCoefficients c = rhs_coefficients(Inequality::linear, p, 1.0, 1.0);
      push(Inequality::linear, p, kNaN, kNaN, F, J0, -c.c1 * fp + c.c2 * J1);
    }
    const std::vector<double> qs = q_grid(config, p);
    const std::vector<double> betas = beta_grid(config, p);
    std::vector<double> jq(qs.size());
    for (std::size_t iq = 0; iq < qs.size(); ++iq) {
      const double q = qs[iq];
      if (q == 1.0) {
        jq[iq] = J1;
      } else if (q == p) {
        jq[iq] = F;
      } else {
        kernels::power(phi.values(), q, a);
        kernels::power(m, p - q, b);
        kernels::multiply(a, b, prod);
        jq[iq] = tree.integrate(prod);
      }
    }
    if (qfam) {
      for (std::size_t iq = 0; iq < qs.size(); ++iq) {
        const RhsCoefficients c = rhs_coefficients(Inequality::q_family, p, qs[iq], 1.0);
        push(Inequality::q_family, p, qs[iq], kNaN, F, J0, -c.c1 * fp + c.c2 * jq[iq]);
      }
    }
    if (bfam) {
      for (std::size_t iq = 0; iq < qs.size(); ++iq) {
        for (const double beta : betas) {
          const RhsCoefficients c =
              rhs_coefficients(Inequality::beta_family, p, qs[iq], beta);
          push(Inequality::beta_family, p, qs[iq], beta, F, J0, -c.c1 * fp + c.c2 * jq[iq]);
        }
      }
    }
    if (hardy) {
      const double H0 = hardy_power(*star, p);
      for (const double q : qs) {
        const double Hq = hardy_moment(*star, p, q);
        for (const double beta : betas) {
          const RhsCoefficients c = rhs_coefficients(Inequality::hardy, p, q, beta);
          push(Inequality::hardy, p, q, beta, F, H0, -c.c1 * fp + c.c2 * Hq);
        }
      }
    }
  }
  return rows;
}

void write_battery_header(std::ostream& out) {
  out << "ineq,p,q,beta,seed,f,F,lhs,rhs,deficit\n";
}

void write_battery_row(std::ostream& out, const BatteryRow& r) {
  out << wire_id(r.ineq) << ',' << csv_field(r.p) << ',' << csv_field(r.q) << ','
      << csv_field(r.beta) << ',' << r.seed << ',' << csv_field(r.f) << ','
      << csv_field(r.F) << ',' << csv_field(r.lhs) << ',' << csv_field(r.rhs) << ','
      << csv_field(r.deficit) << '\n';
}

BatterySummary run_battery(const BatteryConfig& config, std::ostream* csv) {
  config.validate();
  const unsigned threads = config.threads == 0 ? configured_threads() : config.threads;
  BatterySummary summary;
  summary.trials = config.trials;
  summary.min_deficit = std::numeric_limits<double>::infinity();
  summary.min_relative_deficit = std::numeric_limits<double>::infinity();
  if (csv) write_battery_header(*csv);

  std::vector<std::vector<BatteryRow>> chunk;
  for (std::size_t start = 0; start < config.trials; start += kChunk) {
    const std::size_t count = std::min(kChunk, config.trials - start);
    chunk.assign(count, {});
    parallel_for(count, threads, [&](std::size_t i) {
      chunk[i] = evaluate_trial(config, derive_seed(config.seed, start + i));
    });
    for (const auto& rows : chunk) {
      for (const auto& row : rows) {
        if (csv) write_battery_row(*csv, row);
        ++summary.rows;
        if (row.violates(config.slack)) ++summary.violations;
        summary.min_deficit = std::min(summary.min_deficit, row.deficit);
        const double rel = row.deficit / std::max(1.0, std::abs(row.rhs));
        if (!summary.argmin || rel < summary.min_relative_deficit) {
          summary.min_relative_deficit = rel;
          summary.argmin = row;
        }
      }
    }
  }
  if (summary.rows == 0) summary.min_deficit = summary.min_relative_deficit = 0.0;
  return summary;
}

void write_battery_summary_json(std::ostream& out, const BatterySummary& s) {
  nlohmann::ordered_json j;
  j["trials"] = s.trials;
  j["rows"] = s.rows;
  j["min_deficit"] = json_number(s.min_deficit);
  j["min_relative_deficit"] = json_number(s.min_relative_deficit);
  if (s.argmin) {
    const BatteryRow& r = *s.argmin;
    nlohmann::ordered_json a;
    a["ineq"] = wire_id(r.ineq);
    a["p"] = json_number(r.p);
    a["q"] = json_number(r.q);
    a["beta"] = json_number(r.beta);
    a["seed"] = r.seed;
    a["lambda"] = json_number(r.lambda);
    a["lhs"] = json_number(r.lhs);
    a["rhs"] = json_number(r.rhs);
    a["deficit"] = json_number(r.deficit);
    j["argmin"] = a;
  } else {
    j["argmin"] = nullptr;
  }
  j["violations"] = s.violations;
  out << j.dump(2) << '\n';
}

}  // namespace maxtree
