#include "maxtree/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxtree/battery.hpp"
#include "maxtree/bellman.hpp"
#include "maxtree/error.hpp"
#include "maxtree/format.hpp"
#include "maxtree/inequality_lab.hpp"
#include "maxtree/maximal_op.hpp"
#include "maxtree/oracle.hpp"
#include "maxtree/parallel.hpp"
#include "maxtree/random.hpp"
#include "maxtree/rearrangement.hpp"

namespace maxtree::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kSlack = 1e-9;

// Non-finite reals become null; JSON has no literal for them.
Json num(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

Json nums(std::span<const double> xs) {
  Json a = Json::array();
  for (const double x : xs) a.push_back(num(x));
  return a;
}

std::string csv(double x) { return std::isnan(x) ? std::string() : format_double(x); }

// Destination for results: the named file, or the default stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, const char* flag) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw ParseError(std::string(flag) + ": cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::ifstream open_input(const std::string& path, const char* flag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(std::string(flag) + ": cannot open '" + path + "'");
  return in;
}

void check_format(const std::string& format) {
  if (format != "json" && format != "csv") {
    throw ParseError("--format: expected json or csv, got '" + format + "'");
  }
}

// ---------------------------------------------------------------------------

struct MaximalOptions {
  std::string input;
  std::string output;
  std::string format = "json";
  std::optional<double> lambda;
};

int run_maximal(const MaximalOptions& o, std::ostream& out, std::ostream& err) {
  check_format(o.format);
  StepFunction phi = [&] {
    std::ifstream in = open_input(o.input, "--input");
    try {
      return read_step_function(in);
    } catch (const ParseError& e) {
      throw ParseError(std::string("--input: ") + e.what());
    }
  }();
  if (o.lambda && !(*o.lambda > 0.0)) {
    throw DomainError("--lambda: must be positive, got " + format_double(*o.lambda));
  }
  const MaximalResult result = maximal_function(phi);
  const Linearization lin = linearize(result);

  Json config;
  config["command"] = "maximal";
  config["input"] = o.input;
  config["arity"] = phi.tree().arity();
  config["depth"] = phi.tree().depth();
  config["format"] = o.format;
  config["lambda"] = o.lambda ? num(*o.lambda) : Json(nullptr);

  std::optional<WeakTypeTerms> weak;
  if (o.lambda) weak = weak_type_terms(phi, result.m_phi.values(), *o.lambda);

  Sink sink(o.output, out, "--output");
  if (o.format == "json") {
    Json j;
    j["config"] = config;
    j["phi"] = nums(phi.values());
    j["m_phi"] = nums(result.m_phi.values());
    Json att = Json::array();
    for (const NodeId id : result.attaining_node) att.push_back(id.value);
    j["attaining"] = att;
    j["linearization"] = to_json(lin);
    if (weak) {
      j["weak_type"] = {{"lambda", num(weak->lambda)},
                        {"set_measure", num(weak->set_measure)},
                        {"restricted_integral", num(weak->restricted_integral)},
                        {"deficit", num(weak->deficit())}};
    }
    *sink << j.dump(2) << '\n';
  } else {
    *sink << "# config: " << config.dump() << '\n';
    *sink << "leaf,phi,m_phi,attaining_node\n";
    for (std::size_t i = 0; i < phi.size(); ++i) {
      *sink << i << ',' << csv(phi.value(i)) << ',' << csv(result.m_phi.value(i)) << ','
            << result.attaining_node[i].value << '\n';
    }
  }
  if (weak) {
    const double rhs = weak->restricted_integral / weak->lambda;
    if (weak->deficit() < -kSlack * std::max(1.0, rhs)) {
      err << "weak-type inequality violated: deficit " << format_double(weak->deficit())
          << '\n';
      return kInvariantViolation;
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct BellmanOptions {
  double p = 2.0;
  double f = 1.0;
  double F = 2.0;
  std::string output;
};

int run_bellman(const BellmanOptions& o, std::ostream& out, std::ostream& err) {
  const BellmanPoint b = bellman_value(o.p, o.f, o.F);
  const BetaFamilyMinimum m = minimize_beta_family_bound(o.p, o.f, o.F);

  Json j;
  j["config"] = {{"command", "bellman"}, {"p", o.p}, {"f", o.f}, {"F", o.F}};
  j["value"] = num(b.value);
  j["alpha"] = num(b.alpha);
  j["K"] = num(b.K);
  j["beta_opt"] = num(m.beta_opt);
  j["min_value"] = num(m.min_value);
  j["x"] = num(std::pow(o.f, o.p) / o.F);
  j["extremal_exponent"] = num(-1.0 + 1.0 / b.alpha);
  j["relative_gap"] = num((m.min_value - b.value) / b.value);
  j["unimodal"] = m.unimodal;
  if (!m.warning.empty()) j["warning"] = m.warning;
  Sink sink(o.output, out, "--output");
  *sink << j.dump(2) << '\n';

  if (!m.warning.empty()) err << "warning: " << m.warning << '\n';
  if (m.min_value < b.value * (1.0 - kSlack)) {
    err << "beta-family bound fell below the Bellman value\n";
    return kInvariantViolation;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::vector<std::string> ineq;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> beta;
  std::vector<std::size_t> arity;
  std::optional<int> depth;
  int min_depth = 2;
  int max_depth = 10;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  double slack = kSlack;
  std::string output;
  std::string summary;
};

Json grid_json(const std::vector<double>& values) {
  if (values.empty()) return "standard";
  return nums(values);
}

int run_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  BatteryConfig config;
  if (!o.ineq.empty()) {
    config.inequalities.clear();
    for (const auto& id : o.ineq) {
      try {
        config.inequalities.push_back(parse_inequality(id));
      } catch (const ParseError& e) {
        throw ParseError(std::string("--ineq: ") + e.what());
      }
    }
  }
  if (!o.p.empty()) config.p_values = o.p;
  config.q_values = o.q;
  config.beta_values = o.beta;
  if (!o.arity.empty()) config.arities = o.arity;
  config.min_depth = o.depth ? *o.depth : o.min_depth;
  config.max_depth = o.depth ? *o.depth : o.max_depth;
  config.trials = o.trials;
  config.seed = o.seed;
  config.slack = o.slack;
  config.validate();

  Json echo;
  echo["command"] = "verify";
  Json ids = Json::array();
  for (const auto i : config.inequalities) ids.push_back(wire_id(i));
  echo["ineq"] = ids;
  echo["p"] = nums(config.p_values);
  echo["q"] = grid_json(config.q_values);
  echo["beta"] = grid_json(config.beta_values);
  echo["arity"] = config.arities;
  echo["min_depth"] = config.min_depth;
  echo["max_depth"] = config.max_depth;
  echo["trials"] = config.trials;
  echo["seed"] = config.seed;
  echo["slack"] = config.slack;

  BatterySummary summary;
  {
    Sink sink(o.output, out, "--output");
    *sink << "# config: " << echo.dump() << '\n';
    summary = run_battery(config, &*sink);
  }
  if (o.summary.empty()) {
    write_battery_summary_json(err, summary);
  } else {
    Sink sink(o.summary, err, "--summary");
    write_battery_summary_json(*sink, summary);
  }
  return summary.violations > 0 ? kInvariantViolation : kOk;
}

// ---------------------------------------------------------------------------

struct SharpnessOptions {
  std::string family = "g_alpha";
  double p = 2.0;
  double q = 1.0;
  std::optional<double> beta;
  double f = 1.0;
  std::vector<double> grid;
  std::string format = "csv";
  std::string output;
};

std::vector<double> default_grid(Family family, double p) {
  std::vector<double> grid;
  if (family == Family::g_alpha) {
    for (int k = 1; k <= 12; ++k) grid.push_back((1.0 - std::pow(10.0, -0.5 * k)) / p);
  } else {
    for (int k = 1; k <= 10; ++k) grid.push_back(k / (10.0 * (p - 1.0)));
  }
  return grid;
}

int run_sharpness(const SharpnessOptions& o, std::ostream& out, std::ostream& err) {
  check_format(o.format);
  Family family;
  try {
    family = parse_family(o.family);
  } catch (const ParseError& e) {
    throw ParseError(std::string("--family: ") + e.what());
  }
  check_exponent(o.p);
  IneqParams params{o.p, o.q, o.beta.value_or(1.0 / (o.p - 1.0)), o.f};
  params.validate();
  const std::vector<double> grid = o.grid.empty() ? default_grid(family, o.p) : o.grid;
  const std::vector<SweepPoint> points = extremizer_sweep(params, family, grid);

  Json config;
  config["command"] = "sharpness";
  config["family"] = to_string(family);
  config["p"] = o.p;
  config["q"] = o.q;
  config["beta"] = family == Family::g_alpha ? num(params.beta) : Json("grid");
  config["f"] = o.f;
  config["grid"] = nums(grid);

  int status = kOk;
  for (const auto& pt : points) {
    if (pt.admissible && pt.report.violates(kSlack)) status = kInvariantViolation;
  }

  Sink sink(o.output, out, "--output");
  if (o.format == "csv") {
    *sink << "# config: " << config.dump() << '\n';
    *sink << "family,parameter,admissible,lhs,rhs,deficit,residual,gap,reason\n";
    for (const auto& pt : points) {
      const bool alpha = family == Family::g_alpha;
      *sink << to_string(family) << ',' << csv(pt.parameter) << ','
            << (pt.admissible ? 1 : 0) << ',';
      if (pt.admissible) {
        *sink << csv(pt.report.lhs) << ',' << csv(pt.report.rhs) << ','
              << csv(pt.report.deficit) << ',' << csv(pt.residual) << ','
              << (alpha ? csv(pt.gap) : std::string());
      } else {
        *sink << ",,,,";
      }
      *sink << ',' << pt.reason << '\n';
    }
  } else {
    Json j;
    j["config"] = config;
    Json rows = Json::array();
    for (const auto& pt : points) {
      Json r;
      r["parameter"] = num(pt.parameter);
      r["admissible"] = pt.admissible;
      if (pt.admissible) {
        r["lhs"] = num(pt.report.lhs);
        r["rhs"] = num(pt.report.rhs);
        r["deficit"] = num(pt.report.deficit);
        r["residual"] = num(pt.residual);
        if (family == Family::g_alpha) r["gap"] = num(pt.gap);
        r["limit"] = pt.report.limit;
      } else {
        r["reason"] = pt.reason;
      }
      rows.push_back(r);
    }
    j["points"] = rows;
    *sink << j.dump(2) << '\n';
  }
  if (status != kOk) err << "negative deficit along the extremizer family\n";
  return status;
}

// ---------------------------------------------------------------------------

struct OracleOptions {
  double p = 2.0;
  double f = 1.0;
  double F = 2.0;
  int depth = 12;
  std::size_t budget = 500;
  std::uint64_t seed = 1;
  std::string output;
  std::string phi_output;
};

int run_oracle(const OracleOptions& o, std::ostream& out, std::ostream& err) {
  const OracleResult r = oracle_sup(o.p, o.f, o.F, o.depth, o.budget, o.seed);
  Json j;
  j["config"] = {{"command", "oracle"}, {"p", o.p},           {"f", o.f},
                 {"F", o.F},            {"depth", o.depth},   {"budget", o.budget},
                 {"seed", o.seed}};
  j["best_value"] = num(r.best_value);
  j["bellman_target"] = num(r.bellman_target);
  j["ratio_to_target"] = num(r.best_value / r.bellman_target);
  j["bellman_achieved"] = num(r.bellman_achieved);
  j["f_achieved"] = num(r.f_achieved);
  j["F_achieved"] = num(r.F_achieved);
  j["alpha"] = num(r.alpha);
  j["identity_value"] = num(r.identity_value);
  j["best_sample"] = r.best_sample;
  j["best_seed"] = r.best_seed;
  j["swaps_attempted"] = r.swaps_attempted;
  j["swaps_accepted"] = r.swaps_accepted;
  const auto [lo, hi] = std::minmax_element(r.best_leaf_values.begin(), r.best_leaf_values.end());
  j["best_phi"] = {{"leaves", r.best_leaf_values.size()}, {"min", num(*lo)}, {"max", num(*hi)}};
  {
    Sink sink(o.output, out, "--output");
    *sink << j.dump(2) << '\n';
  }
  if (!o.phi_output.empty()) {
    Sink sink(o.phi_output, out, "--phi-output");
    write_step_function(*sink, StepFunction(build_uniform_tree(2, o.depth), r.best_leaf_values));
  }
  if (r.best_value > r.bellman_achieved * (1.0 + kSlack)) {
    err << "oracle value exceeds the Bellman bound\n";
    return kInvariantViolation;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SymmetrizeOptions {
  std::string input;
  std::string powerlaw;
  double p = 2.0;
  std::size_t arity = 2;
  int depth = 10;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string output;
};

int run_symmetrize(const SymmetrizeOptions& o, std::ostream& out, std::ostream& err) {
  check_format(o.format);
  check_exponent(o.p);
  if (o.input.empty() == o.powerlaw.empty()) {
    throw ParseError("exactly one of --input and --powerlaw is required");
  }
  std::optional<LineFunction> g;
  if (!o.input.empty()) {
    std::ifstream in = open_input(o.input, "--input");
    try {
      g = read_line_step_function(in);
    } catch (const ParseError& e) {
      throw ParseError(std::string("--input: ") + e.what());
    }
    if (!std::get<LineStepFunction>(*g).is_non_increasing()) {
      throw DomainError("--input: the profile must be non-increasing");
    }
  } else {
    try {
      g = parse_power_law(o.powerlaw);
    } catch (const Error& e) {
      throw ParseError(std::string("--powerlaw: ") + e.what());
    }
  }

  const Tree tree = build_uniform_tree(o.arity, o.depth);
  const std::size_t n = tree.leaf_count();
  const LineStepFunction cells =
      std::visit([&](const auto& h) { return discretize(h, n); }, *g);
  const double target = hardy_power(cells, o.p);
  double continuous_target = std::numeric_limits<double>::quiet_NaN();
  try {
    continuous_target = hardy_power(*g, o.p);
  } catch (const DivergentIntegralError&) {
  }

  std::vector<std::uint64_t> seeds(o.samples + 1, kIdentitySeed);
  for (std::size_t i = 1; i <= o.samples; ++i) seeds[i] = derive_seed(o.seed, i);
  std::vector<double> values(o.samples + 1);
  parallel_for(values.size(), configured_threads(), [&](std::size_t i) {
    values[i] = maximal_power_integral(random_rearrangement(cells, tree, seeds[i]), o.p);
  });
  std::size_t best = 1;
  for (std::size_t i = 2; i <= o.samples; ++i) {
    if (values[i] > values[best]) best = i;
  }

  Json config;
  config["command"] = "symmetrize";
  config["input"] = o.input.empty() ? Json(nullptr) : Json(o.input);
  config["powerlaw"] = o.powerlaw.empty() ? Json(nullptr) : Json(o.powerlaw);
  config["p"] = o.p;
  config["arity"] = o.arity;
  config["depth"] = o.depth;
  config["samples"] = o.samples;
  config["seed"] = o.seed;

  Sink sink(o.output, out, "--output");
  if (o.format == "json") {
    Json j;
    j["config"] = config;
    j["hardy_target"] = num(target);
    j["continuous_hardy_target"] = num(continuous_target);
    j["identity_value"] = num(values[0]);
    if (o.samples > 0) {
      j["best_value"] = num(values[best]);
      j["best_seed"] = seeds[best];
      j["best_ratio"] = num(values[best] / target);
    }
    Json rows = Json::array();
    for (std::size_t i = 1; i <= o.samples; ++i) {
      rows.push_back({{"seed", seeds[i]}, {"value", num(values[i])}});
    }
    j["samples"] = rows;
    *sink << j.dump(2) << '\n';
  } else {
    *sink << "# config: " << config.dump() << '\n';
    *sink << "# hardy_target: " << format_double(target) << '\n';
    *sink << "sample,seed,value,ratio\n";
    for (std::size_t i = 0; i <= o.samples; ++i) {
      *sink << i << ',' << seeds[i] << ',' << csv(values[i]) << ','
            << csv(values[i] / target) << '\n';
    }
  }
  for (const double v : values) {
    if (v > target * (1.0 + kSlack)) {
      err << "a rearrangement exceeded the Hardy bound of its profile\n";
      return kInvariantViolation;
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computational lab for the maximal operator on trees", "maxtree"};
  app.require_subcommand(1);

  MaximalOptions maximal;
  auto* sub_maximal = app.add_subcommand("maximal", "M phi and its linearization");
  sub_maximal->add_option("--input", maximal.input, "Step-function CSV")->required();
  sub_maximal->add_option("--output", maximal.output, "Output file (default stdout)");
  sub_maximal->add_option("--format", maximal.format, "json or csv")->capture_default_str();
  sub_maximal->add_option("--lambda", maximal.lambda, "Also report the weak-type terms");

  BellmanOptions bellman;
  auto* sub_bellman = app.add_subcommand("bellman", "Closed form and beta-family minimum");
  sub_bellman->add_option("--p", bellman.p)->required();
  sub_bellman->add_option("--f", bellman.f)->required();
  sub_bellman->add_option("--F", bellman.F)->required();
  sub_bellman->add_option("--output", bellman.output);

  VerifyOptions verify;
  auto* sub_verify = app.add_subcommand("verify", "Randomized deficit battery");
  sub_verify->add_option("--ineq", verify.ineq, "1.2, 1.7, 1.8, 1.9, 1.10")->delimiter(',');
  sub_verify->add_option("--p", verify.p)->delimiter(',');
  sub_verify->add_option("--q", verify.q)->delimiter(',');
  sub_verify->add_option("--beta", verify.beta)->delimiter(',');
  sub_verify->add_option("--arity", verify.arity)->delimiter(',');
  auto* depth_opt = sub_verify->add_option("--depth", verify.depth, "Fixed depth");
  sub_verify->add_option("--min-depth", verify.min_depth)->excludes(depth_opt);
  sub_verify->add_option("--max-depth", verify.max_depth)->excludes(depth_opt);
  sub_verify->add_option("--trials", verify.trials)->capture_default_str();
  sub_verify->add_option("--seed", verify.seed)->capture_default_str();
  sub_verify->add_option("--slack", verify.slack)->capture_default_str();
  sub_verify->add_option("--output", verify.output, "CSV file (default stdout)");
  sub_verify->add_option("--summary", verify.summary, "Summary JSON file (default stderr)");

  SharpnessOptions sharp;
  auto* sub_sharp = app.add_subcommand("sharpness", "Extremizer sweeps");
  sub_sharp->add_option("--family", sharp.family, "g_alpha or g_beta")->capture_default_str();
  sub_sharp->add_option("--p", sharp.p)->required();
  sub_sharp->add_option("--q", sharp.q)->capture_default_str();
  sub_sharp->add_option("--beta", sharp.beta, "g_alpha only; default 1/(p-1)");
  sub_sharp->add_option("--f", sharp.f)->capture_default_str();
  sub_sharp->add_option("--grid", sharp.grid, "alpha or beta values")->delimiter(',');
  sub_sharp->add_option("--format", sharp.format)->capture_default_str();
  sub_sharp->add_option("--output", sharp.output);

  OracleOptions oracle;
  auto* sub_oracle = app.add_subcommand("oracle", "Rearrangement search for the supremum");
  sub_oracle->add_option("--p", oracle.p)->required();
  sub_oracle->add_option("--f", oracle.f)->required();
  sub_oracle->add_option("--F", oracle.F)->required();
  sub_oracle->add_option("--depth", oracle.depth)->capture_default_str();
  sub_oracle->add_option("--budget", oracle.budget)->capture_default_str();
  sub_oracle->add_option("--seed", oracle.seed)->capture_default_str();
  sub_oracle->add_option("--output", oracle.output);
  sub_oracle->add_option("--phi-output", oracle.phi_output, "Best leaf values as CSV");

  SymmetrizeOptions sym;
  auto* sub_sym = app.add_subcommand("symmetrize", "Random rearrangements vs the Hardy target");
  sub_sym->add_option("--input", sym.input, "Non-increasing line step CSV");
  sub_sym->add_option("--powerlaw", sym.powerlaw, "powerlaw:f=<v>,alpha=<v>");
  sub_sym->add_option("--p", sym.p)->capture_default_str();
  sub_sym->add_option("--arity", sym.arity)->capture_default_str();
  sub_sym->add_option("--depth", sym.depth)->capture_default_str();
  sub_sym->add_option("--samples", sym.samples)->capture_default_str();
  sub_sym->add_option("--seed", sym.seed)->capture_default_str();
  sub_sym->add_option("--format", sym.format)->capture_default_str();
  sub_sym->add_option("--output", sym.output);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (*sub_maximal) return run_maximal(maximal, out, err);
    if (*sub_bellman) return run_bellman(bellman, out, err);
    if (*sub_verify) return run_verify(verify, out, err);
    if (*sub_sharp) return run_sharpness(sharp, out, err);
    if (*sub_oracle) return run_oracle(oracle, out, err);
    if (*sub_sym) return run_symmetrize(sym, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace maxtree::cli
