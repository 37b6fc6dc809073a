// Acceptance runner. Prints one line per criterion:
//   criterion N: PASS|FAIL <details>
// With --only N a single criterion runs. The exit status is 1 if any
// criterion that ran failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "maxtree/battery.hpp"
#include "maxtree/bellman.hpp"
#include "maxtree/cli.hpp"
#include "maxtree/inequality_lab.hpp"
#include "maxtree/maximal_op.hpp"
#include "maxtree/oracle.hpp"
#include "maxtree/random.hpp"
#include "maxtree/rearrangement.hpp"

using namespace maxtree;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects failures; the first few are echoed in the result line.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) {
      if (!detail_.empty()) detail_ += "; ";
      detail_ += what;
    }
  }
  bool passed() const { return failures_ == 0; }
  std::string summary(const std::string& note) const {
    std::string s = std::to_string(checks_ - failures_) + "/" + std::to_string(checks_) + " checks";
    if (!note.empty()) s += ", " + note;
    if (!passed()) s += " [" + detail_ + (failures_ > 3 ? "; ..." : "") + "]";
    return s;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string detail_;
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome bellman_closed_form() {
  Check c;
  std::ostringstream out, err;
  const auto start = Clock::now();
  const int code = cli::run({"bellman", "--p", "2", "--f", "1", "--F", "2"}, out, err);
  const double elapsed = seconds_since(start);
  c.expect(code == 0, "exit code " + std::to_string(code));
  double value = NAN;
  if (code == 0) value = nlohmann::json::parse(out.str()).at("value").get<double>();
  const double exact = 3.0 + 2.0 * std::sqrt(2.0);
  c.expect(std::abs(value - exact) <= 1e-9, "B(1,2) = " + g(value));
  const double w = omega_p(0.5, 2.0);
  c.expect(std::abs(w - (1.0 + std::sqrt(0.5))) <= 1e-12, "omega_2(0.5) = " + g(w));
  c.expect(elapsed < 1e-3, "runtime " + g(elapsed) + " s");
  return {c.passed(), c.summary("runtime " + g(elapsed * 1e3) + " ms")};
}

Outcome omega_round_trip() {
  Check c;
  double worst = 0.0;
  for (const double p : {1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0}) {
    const BellmanCurve curve(p);
    for (int i = 0; i < 100; ++i) {
      const double x = i / 99.0;
      const double err = std::abs(curve.h(curve.omega(x)) - x);
      worst = std::max(worst, err);
      c.expect(err <= 1e-12, "p=" + g(p) + " x=" + g(x) + " error " + g(err));
    }
    c.expect(std::abs(curve.omega(1.0) - 1.0) <= 1e-12, "omega(1) at p=" + g(p));
    c.expect(std::abs(curve.omega(0.0) - p / (p - 1.0)) <= 1e-12, "omega(0) at p=" + g(p));
  }
  return {c.passed(), c.summary("max |H(omega(x)) - x| = " + g(worst))};
}

BatteryConfig acceptance_battery() {
  BatteryConfig config;
  config.inequalities = {Inequality::weak_type, Inequality::linear, Inequality::q_family,
                         Inequality::beta_family};
  config.arities = {2, 3};
  config.min_depth = 2;
  config.max_depth = 10;
  config.trials = 10000;
  config.seed = 1;
  return config;
}

struct BatteryRun {
  BatterySummary summary;
  double seconds;
};

BatteryRun run_acceptance_battery(const std::filesystem::path& csv) {
  std::ofstream out(csv, std::ios::binary);
  const auto start = Clock::now();
  BatteryRun run{run_battery(acceptance_battery(), &out), 0.0};
  out.close();
  run.seconds = seconds_since(start);
  return run;
}

Outcome inequality_battery(const std::filesystem::path& dir) {
  Check c;
  const BatteryRun run = run_acceptance_battery(dir / "acceptance_battery_run1.csv");
  c.expect(run.summary.violations == 0, std::to_string(run.summary.violations) + " violations");
  c.expect(run.summary.trials == 10000, "trials " + std::to_string(run.summary.trials));
  c.expect(run.seconds < 60.0, "runtime " + g(run.seconds) + " s");
  return {c.passed(), c.summary(std::to_string(run.summary.rows) + " rows, min relative deficit " +
                                g(run.summary.min_relative_deficit) + ", runtime " +
                                g(run.seconds) + " s")};
}

Outcome golden_case() {
  Check c;
  const StepFunction phi(build_uniform_tree(2, 2), {4, 2, 1, 1});
  const MaximalResult m = maximal_function(phi);
  const std::vector<double> expected_m = {4, 3, 2, 2};
  c.expect(std::vector<double>(m.m_phi.values().begin(), m.m_phi.values().end()) == expected_m,
           "M phi");
  const Linearization lin = linearize(m);
  c.expect(lin.a_mass == std::vector<double>{0.5, 0.25, 0.25}, "S_phi masses");
  const DeficitReport d = deficit(Inequality::linear, phi, {2.0, 1.0, 1.0, 2.0});
  c.expect(std::abs(d.deficit - 0.75) <= 1e-14, "deficit " + g(d.deficit));
  return {c.passed(), c.summary("deficit(linear) = " + g(d.deficit))};
}

Outcome hardy_equality() {
  Check c;
  double worst = 0.0;
  const auto check = [&](const LineFunction& fn, double p, double tol, const std::string& label) {
    const double f = mean(fn);
    const DeficitReport r = hardy_deficit(fn, {p, 1.0, 1.0 / (p - 1.0), f});
    worst = std::max(worst, std::abs(r.deficit));
    c.expect(std::abs(r.deficit) <= tol, label + " deficit " + g(r.deficit));
  };
  for (const double p : {1.5, 2.0, 3.0, 5.0}) {
    for (const double f : {0.5, 1.0, 3.0}) {
      check(LineStepFunction::constant(f), p, 1e-10, "constant p=" + g(p));
      check(discretize(LineStepFunction::constant(f), 1024), p, 1e-8, "constant 1024 p=" + g(p));
    }
  }
  const PowerLawFunction pl = PowerLawFunction::from_mean(1.0, 0.25);
  check(pl, 2.0, 1e-10, "power law");
  check(discretize(pl, 1024), 2.0, 1e-8, "power law 1024");
  return {c.passed(), c.summary("max |deficit| = " + g(worst))};
}

Outcome residual_identity() {
  Check c;
  double worst = 0.0;
  for (const double p : {2.0, 3.0}) {
    for (const double q : {1.0, 0.5 * (1.0 + p), p}) {
      for (const double beta : {0.2, 0.5, 1.0 / (p - 1.0)}) {
        for (const double f : {1.0, 1.7}) {
          const auto pts = extremizer_sweep({p, q, 1.0, f}, Family::g_beta, std::vector{beta});
          const double expected = q / p * std::pow(beta + 1.0, 1.0 - q) * std::pow(f, p);
          const double rel = std::abs(pts[0].residual - expected) / expected;
          worst = std::max(worst, rel);
          c.expect(pts[0].admissible && rel <= 1e-10,
                   "p=" + g(p) + " q=" + g(q) + " beta=" + g(beta) + " rel " + g(rel));
        }
      }
    }
  }
  return {c.passed(), c.summary("max relative error " + g(worst))};
}

Outcome gap_limit() {
  Check c;
  double worst = 0.0;
  for (const double p : {2.0, 3.0, 5.0}) {
    for (const double q : {1.0, 2.0, p}) {
      const double got = sharpness_gap(1.0 / p - 1e-6, p, q);
      const double limit = q / (p - 1.0);
      const double rel = std::abs(got - limit) / limit;
      worst = std::max(worst, rel);
      c.expect(rel <= 1e-3, "p=" + g(p) + " q=" + g(q) + " rel " + g(rel));
    }
  }
  for (const double alpha : {0.01, 0.1, 0.25, 0.4, 0.49, 0.5 - 1e-6}) {
    c.expect(std::abs(sharpness_gap(alpha, 2.0, 1.0) - 1.0) <= 1e-12, "q=1 alpha=" + g(alpha));
    c.expect(std::abs(sharpness_gap(alpha, 2.0, 2.0) - (3.0 - 2.0 * alpha)) <= 1e-12,
             "q=2 alpha=" + g(alpha));
  }
  return {c.passed(), c.summary("max relative distance to the limit " + g(worst))};
}

Outcome constants_coherence() {
  Check c;
  for (const double p : {1.5, 2.0, 3.0, 5.0}) {
    const double b0 = 1.0 / (p - 1.0);
    for (const double q : {1.0, 0.5 * (1.0 + p), p}) {
      for (int i = 1; i <= 50; ++i) {
        const double below = b0 * i / 51.0;
        const Constants lo = constants({p, q, below, 1.0});
        c.expect(std::abs(lo.t_beta - 1.0 / (below + 1.0)) <= 1e-12,
                 "t_beta p=" + g(p) + " q=" + g(q) + " beta=" + g(below));
        const double above = b0 * (1.0 + 0.1 * i);
        const Constants hi = constants({p, q, above, 1.0});
        const double residual = root_function(hi.t_beta, p, q, hi.A);
        c.expect(std::abs(residual) <= 1e-12,
                 "F(t_beta) = " + g(residual) + " p=" + g(p) + " q=" + g(q));
      }
      const double peak = std::pow((p - 1.0) / p, q);
      c.expect(std::abs(weight_A(p, q, b0) - peak) <= 1e-12, "h(1/(p-1)) p=" + g(p));
      for (int i = 0; i < 200; ++i) {
        const double beta = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
        c.expect(weight_A(p, q, beta) <= peak + 1e-12, "h above its peak at beta=" + g(beta));
      }
    }
  }
  return {c.passed(), c.summary("")};
}

Outcome beta_minimization() {
  Check c;
  std::mt19937_64 rng(20240901);
  std::uniform_real_distribution<double> pu(1.1, 6.0), fu(0.2, 5.0), xu(0.01, 0.99);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double p = pu(rng);
    const double f = fu(rng);
    const double x = xu(rng);
    const double F = std::pow(f, p) / x;
    const double b = bellman_value(p, f, F).value;
    const double m = minimize_beta_family_bound(p, f, F).min_value;
    const double rel = std::abs(m - b) / b;
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-6, "p=" + g(p) + " f=" + g(f) + " F=" + g(F) + " rel " + g(rel));
  }
  const double beta = minimize_beta_family_bound(2.0, 1.0, 2.0).beta_opt;
  c.expect(std::abs(beta - std::sqrt(0.5)) <= 1e-6, "minimizer " + g(beta));
  return {c.passed(), c.summary("max relative gap " + g(worst) + ", minimizer at (2,1,2) " + g(beta))};
}

Outcome oracle_sandwich() {
  Check c;
  std::string note;
  const auto start = Clock::now();
  for (const auto& [p, f, F] : {std::tuple{2.0, 1.0, 2.0}, {3.0, 1.0, 4.0}, {1.5, 1.0, 3.0}}) {
    const OracleResult r = oracle_sup(p, f, F, 12, 500, 1);
    const double B = r.bellman_target;
    const double ratio = r.best_value / B;
    c.expect(r.best_value >= 0.95 * B, "(" + g(p) + "," + g(f) + "," + g(F) + ") ratio " + g(ratio));
    c.expect(r.best_value <= B + 1e-9 * B, "above B at p=" + g(p));
    if (!note.empty()) note += ", ";
    note += "(" + g(p) + "," + g(f) + "," + g(F) + "): " + g(ratio) + " of B";
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 120.0, "runtime " + g(elapsed) + " s");
  return {c.passed(), c.summary(note + ", runtime " + g(elapsed) + " s")};
}

Outcome approximation_monotonicity() {
  Check c;
  const auto close_le = [](double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); };
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(31337, i));
    const Tree tree = build_uniform_tree(i % 2 == 0 ? 2 : 3, 10);
    const StepFunction phi = random_step_function(tree, rng);
    const std::vector<double> m = maximal_values(phi);
    const double F = moment(phi, 2.5);
    std::vector<double> prev(phi.size(), 0.0);
    bool ordered = true;
    bool bounded = true;
    bool moments = true;
    for (int level = 0; level <= tree.depth(); ++level) {
      const StepFunction coarse = level_approximation(phi, level);
      const std::vector<double> cur = maximal_values(coarse);
      for (std::size_t k = 0; k < cur.size(); ++k) {
        ordered &= close_le(prev[k], cur[k]);
        bounded &= close_le(cur[k], m[k]);
      }
      moments &= close_le(moment(coarse, 2.5), F);
      prev = cur;
    }
    c.expect(ordered, "Phi_m not increasing for function " + std::to_string(i));
    c.expect(bounded, "Phi_m above M phi for function " + std::to_string(i));
    c.expect(moments, "F_m above F for function " + std::to_string(i));
  }
  return {c.passed(), c.summary("")};
}

Outcome determinism(const std::filesystem::path& dir) {
  Check c;
  const auto read = [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto first = dir / "acceptance_battery_run1.csv";
  const auto second = dir / "acceptance_battery_run2.csv";
  if (!std::filesystem::exists(first)) run_acceptance_battery(first);
  run_acceptance_battery(second);
  const std::string a = read(first);
  const std::string b = read(second);
  c.expect(!a.empty(), "empty first run");
  c.expect(a == b, "CSV files differ");
  return {c.passed(), c.summary(std::to_string(a.size()) + " bytes compared")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Acceptance criteria");
  int only = 0;
  std::string dir = ".";
  app.add_option("--only", only, "Run a single criterion (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--dir", dir, "Directory for the battery CSV files")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const std::filesystem::path out_dir(dir);
  const std::vector<std::function<Outcome()>> criteria = {
      bellman_closed_form,
      omega_round_trip,
      [&] { return inequality_battery(out_dir); },
      golden_case,
      hardy_equality,
      residual_identity,
      gap_limit,
      constants_coherence,
      beta_minimization,
      oracle_sandwich,
      approximation_monotonicity,
      [&] { return determinism(out_dir); },
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all &= o.pass;
    std::printf("criterion %zu: %s %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
