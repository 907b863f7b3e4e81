#include "mpc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpc/errors.hpp"

namespace mpc::cli {

namespace {

using nlohmann::json;

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(join_path(path, key) + ": unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join_path(path, key) + ": required key is missing");
  return obj.at(key);
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field + ": must be finite");
  return x;
}

std::int64_t as_integer(const json& v, const std::string& field, std::int64_t min) {
  if (v.is_number_integer()) {
    const auto x = v.get<std::int64_t>();
    if (x < min) throw ConfigError(field + ": must be >= " + std::to_string(min));
    return x;
  }
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::floor(x) == x && x >= static_cast<double>(min) && x < 9.2e18) return static_cast<std::int64_t>(x);
  }
  throw ConfigError(field + ": expected an integer >= " + std::to_string(min));
}

std::string as_string(const json& v, const std::string& field, const std::set<std::string>& choices) {
  if (!v.is_string()) throw ConfigError(field + ": expected a string");
  const auto s = v.get<std::string>();
  if (!choices.count(s)) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
    throw ConfigError(field + ": '" + s + "' is not one of " + list);
  }
  return s;
}

std::vector<double> number_list(const json& v, const std::string& field) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    reject_unknown(v, {"start", "stop", "step"}, field);
    const double start = as_number(require(v, "start", field), field + ".start");
    const double stop = as_number(require(v, "stop", field), field + ".stop");
    const double step = as_number(require(v, "step", field), field + ".step");
    if (!(step > 0.0) || stop < start) throw ConfigError(field + ": need step > 0 and stop >= start");
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError(field + ": grid has more than 100000 points");
    // Round to a decimal quantum a millionth of the step, dividing by an exact
    // power of ten, so -1.5 + 14·0.1 is stored as the double nearest -0.1.
    const double scale = std::pow(10.0, std::clamp(6.0 - std::floor(std::log10(step)), 0.0, 22.0));
    for (std::int64_t i = 0; i < count; ++i) {
      const double x = start + static_cast<double>(i) * step;
      const double snapped = std::round(x * scale) / scale;
      out.push_back(snapped == 0.0 ? 0.0 : snapped);
    }
  } else {
    throw ConfigError(field + ": expected a list of numbers or {start, stop, step}");
  }
  if (out.empty()) throw ConfigError(field + ": empty grid");
  return out;
}

ConstraintFunction parse_function(const json& item, const std::string& path) {
  const std::string kind = as_string(require(item, "kind", path), path + ".kind",
                                     {"positive_part", "square", "one_sided_square", "step_indicator", "smoothed_step",
                                      "power_law"});
  std::set<std::string> allowed{"kind", "budget"};
  ConstraintFunction f = ConstraintFunction::square();
  try {
    if (kind == "positive_part") {
      f = ConstraintFunction::positive_part();
    } else if (kind == "square") {
      f = ConstraintFunction::square();
    } else if (kind == "one_sided_square") {
      f = ConstraintFunction::one_sided_square();
    } else if (kind == "step_indicator") {
      allowed.insert("threshold");
      f = ConstraintFunction::step_indicator(as_number(require(item, "threshold", path), path + ".threshold"));
    } else if (kind == "smoothed_step") {
      allowed.insert({"threshold", "slope"});
      f = ConstraintFunction::smoothed_step(as_number(require(item, "threshold", path), path + ".threshold"),
                                            as_number(require(item, "slope", path), path + ".slope"));
    } else {
      allowed.insert("exponent");
      f = ConstraintFunction::power_law(as_number(require(item, "exponent", path), path + ".exponent"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  reject_unknown(item, allowed, path);
  return f;
}

SearchOptions parse_optimizer(const json& v, SearchOptions s) {
  const std::string p = "optimizer";
  if (!v.is_object()) throw ConfigError(p + ": expected an object");
  reject_unknown(v, {"restarts", "grid_points", "max_iterations", "weight_floor", "tolerance", "tail_mass", "mean_mode"}, p);
  if (v.contains("restarts")) s.restarts = static_cast<int>(as_integer(v["restarts"], p + ".restarts", 1));
  if (v.contains("grid_points")) s.grid_points = static_cast<int>(as_integer(v["grid_points"], p + ".grid_points", 16));
  if (v.contains("max_iterations")) s.max_iterations = static_cast<int>(as_integer(v["max_iterations"], p + ".max_iterations", 1));
  auto positive = [&](const char* key, double& slot, double upper) {
    if (!v.contains(key)) return;
    const double x = as_number(v[key], p + "." + key);
    if (!(x > 0.0 && x < upper)) throw ConfigError(p + "." + key + ": must lie in (0, " + format_number(upper) + ")");
    slot = x;
  };
  positive("weight_floor", s.weight_floor, 1.0);
  positive("tolerance", s.tolerance, 1.0);
  positive("tail_mass", s.tail_mass, 0.5);
  if (v.contains("mean_mode")) {
    const std::string m = as_string(v["mean_mode"], p + ".mean_mode", {"auto", "inequality", "equality"});
    s.mean_mode = m == "auto" ? MeanMode::Auto : m == "inequality" ? MeanMode::Inequality : MeanMode::Equality;
  }
  return s;
}

std::string syntax_location(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::string what = e.what();
    throw ConfigError("syntax error at " + syntax_location(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                      what.substr(what.find(':') == std::string::npos ? 0 : what.rfind(':') + 2));
  }
  if (!root.is_object()) throw ConfigError("top level: expected an object");
  reject_unknown(root, {"channel", "constraints", "command", "r", "r_grid", "n", "n_grid", "sweep_bound", "r_prime",
                        "mc_samples", "seed", "theta", "theta_pilot_samples", "kappa_prime", "mixture", "units",
                        "output_format", "output", "optimizer", "verify_scale"},
                 "");
  RunConfig cfg;

  if (root.contains("units")) cfg.bits = as_string(root["units"], "units", {"nats", "bits"}) == "bits";
  const double rate_scale = cfg.bits ? std::numbers::ln2 : 1.0;

  const json& ch = require(root, "channel", "");
  if (!ch.is_object()) throw ConfigError("channel: expected an object");
  reject_unknown(ch, {"noise_variance", "cost_threshold"}, "channel");
  const double nv = as_number(require(ch, "noise_variance", "channel"), "channel.noise_variance");
  const double gamma = as_number(require(ch, "cost_threshold", "channel"), "channel.cost_threshold");
  if (!(nv > 0.0)) throw ConfigError("channel.noise_variance: must be positive");
  if (!(gamma > 0.0)) throw ConfigError("channel.cost_threshold: must be positive (budget domain (0,∞) × [0,∞)^k)");
  cfg.ch = ChannelSpec::make(nv, gamma);

  const json& items = require(root, "constraints", "");
  if (!items.is_array()) throw ConfigError("constraints: expected a list");
  std::vector<ConstraintItem> parsed;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string path = "constraints[" + std::to_string(i) + "]";
    if (!items[i].is_object()) throw ConfigError(path + ": expected an object");
    const ConstraintFunction f = parse_function(items[i], path);
    const double budget = as_number(require(items[i], "budget", path), path + ".budget");
    if (budget < 0.0) {
      throw ConfigError(path + ".budget: must be >= 0; budgets live in the domain (0,∞) × [0,∞)^k");
    }
    parsed.push_back({f, budget});
  }
  if (parsed.size() > 8) throw ConfigError("constraints: at most 8 constraint functions are supported");
  try {
    cfg.cs = ConstraintSet(gamma, parsed);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("constraints: ") + e.what());
  }

  const std::string cmd = as_string(require(root, "command", ""), "command",
                                    {"limit", "converse", "achievability", "sweep", "verify"});
  cfg.command = cmd == "limit"           ? Command::Limit
                : cmd == "converse"      ? Command::Converse
                : cmd == "achievability" ? Command::Achievability
                : cmd == "sweep"         ? Command::Sweep
                                         : Command::Verify;

  if (root.contains("r") && root.contains("r_grid")) throw ConfigError("r, r_grid: give only one");
  if (root.contains("r")) cfg.r_values = {as_number(root["r"], "r") * rate_scale};
  if (root.contains("r_grid")) {
    for (double r : number_list(root["r_grid"], "r_grid")) cfg.r_values.push_back(r * rate_scale);
  }
  if (root.contains("n") && root.contains("n_grid")) throw ConfigError("n, n_grid: give only one");
  if (root.contains("n")) cfg.n_values = {as_integer(root["n"], "n", 2)};
  if (root.contains("n_grid")) {
    const json& g = root["n_grid"];
    if (!g.is_array() || g.empty()) throw ConfigError("n_grid: expected a nonempty list of integers");
    for (std::size_t i = 0; i < g.size(); ++i) cfg.n_values.push_back(as_integer(g[i], "n_grid[" + std::to_string(i) + "]", 2));
  }
  if (root.contains("sweep_bound")) {
    const std::string b = as_string(root["sweep_bound"], "sweep_bound", {"limit", "converse", "achievability", "analytic"});
    cfg.sweep_bound = b == "limit"      ? SweepBound::Limit
                      : b == "converse" ? SweepBound::Converse
                      : b == "analytic" ? SweepBound::Analytic
                                        : SweepBound::Achievability;
  }
  if (root.contains("r_prime")) {
    const json& v = root["r_prime"];
    if (v.is_string()) {
      as_string(v, "r_prime", {"auto"});
    } else {
      cfg.r_prime = as_number(v, "r_prime") * rate_scale;
    }
  }
  if (root.contains("mc_samples")) cfg.mc_samples = static_cast<std::uint64_t>(as_integer(root["mc_samples"], "mc_samples", 100));
  if (root.contains("seed")) cfg.seed = static_cast<std::uint64_t>(as_integer(root["seed"], "seed", 0));
  if (root.contains("theta")) {
    const json& v = root["theta"];
    if (v.is_string()) {
      cfg.theta_mode = as_string(v, "theta", {"default", "auto"}) == "auto" ? ThetaMode::Auto : ThetaMode::Default;
    } else {
      cfg.theta = as_number(v, "theta") * rate_scale;
      if (!(cfg.theta > 0.0)) throw ConfigError("theta: must be positive");
      cfg.theta_mode = ThetaMode::Fixed;
    }
  }
  if (root.contains("theta_pilot_samples")) {
    cfg.theta_pilot_samples = static_cast<std::uint64_t>(as_integer(root["theta_pilot_samples"], "theta_pilot_samples", 100));
  }
  if (root.contains("kappa_prime")) cfg.kappa_prime = as_number(root["kappa_prime"], "kappa_prime") * rate_scale;
  if (root.contains("mixture")) {
    const json& m = root["mixture"];
    if (!m.is_object()) throw ConfigError("mixture: expected an object");
    reject_unknown(m, {"atoms", "weights"}, "mixture");
    DiscreteDistribution d;
    d.atoms = number_list(require(m, "atoms", "mixture"), "mixture.atoms");
    d.weights = number_list(require(m, "weights", "mixture"), "mixture.weights");
    try {
      d.validate(cfg.cs.k() + 2);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("mixture: ") + e.what());
    }
    if (!check_membership_U(d, cfg.cs)) throw ConfigError("mixture: violates the moment constraints");
    cfg.mixture = d;
  }
  if (root.contains("output_format")) {
    cfg.format = as_string(root["output_format"], "output_format", {"csv", "jsonl"}) == "csv" ? OutputFormat::Csv
                                                                                             : OutputFormat::JsonLines;
  }
  if (root.contains("output")) {
    if (!root["output"].is_string()) throw ConfigError("output: expected a path string");
    cfg.output = root["output"].get<std::string>();
  }
  if (root.contains("optimizer")) cfg.optimizer = parse_optimizer(root["optimizer"], cfg.optimizer);
  if (root.contains("verify_scale")) {
    cfg.verify_scale = as_string(root["verify_scale"], "verify_scale", {"quick", "full"}) == "quick" ? verify::Scale::Quick
                                                                                                     : verify::Scale::Full;
  }

  // Command-level requirements.
  const bool needs_r = cfg.command != Command::Verify;
  const bool needs_n = cfg.command == Command::Converse || cfg.command == Command::Achievability ||
                       (cfg.command == Command::Sweep && cfg.sweep_bound != SweepBound::Limit);
  const bool uses_mc = cfg.command == Command::Achievability || cfg.command == Command::Verify ||
                       (cfg.command == Command::Sweep && cfg.sweep_bound == SweepBound::Achievability);
  if (needs_r && cfg.r_values.empty()) throw ConfigError("r: required for command '" + cmd + "' (give r or r_grid)");
  if (needs_n && cfg.n_values.empty()) throw ConfigError("n: required for command '" + cmd + "' (give n or n_grid)");
  if (uses_mc && !cfg.seed) throw ConfigError("seed: required for Monte Carlo commands (reproducibility)");
  if (cfg.r_prime) {
    for (double r : cfg.r_values) {
      if (!(*cfg.r_prime < r)) throw ConfigError("r_prime: must be below every r");
    }
  }
  if (cfg.command == Command::Limit || (cfg.command == Command::Sweep && cfg.sweep_bound == SweepBound::Limit)) {
    if (!cfg.cs.condition2_holds()) {
      throw ConfigError("constraints: no function diverges upward; replace step_indicator by smoothed_step");
    }
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

std::string status_name(OptimizerStatus s) {
  switch (s) {
    case OptimizerStatus::Converged: return "Converged";
    case OptimizerStatus::IterationCap: return "IterationCap";
    case OptimizerStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

class Runner {
 public:
  Runner(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& log)
      : cfg_(cfg), opts_(opts), out_(out), log_(log) {
    search_ = cfg.optimizer;
    search_.threads = opts.threads;
    if (cfg.seed) search_.seed = *cfg.seed;
  }

  void emit(ResultRow row) {
    row.units = cfg_.bits ? "bits" : "nats";
    row.constraints = cfg_.cs.describe();
    write_row(out_, cfg_.format, row);
    out_.flush();
    if (opts_.verbose) {
      log_ << to_string(row.kind) << " n=" << (row.n ? std::to_string(*row.n) : "-") << " r=" << format_number(row.r)
           << " value=" << format_number(row.value) << " wall_time=" << format_number(row.wall_time) << "s\n";
    }
  }

  double echo_r(double r) const { return cfg_.bits ? r / std::numbers::ln2 : r; }

  void limit(double r) {
    const auto t0 = clock();
    const OptimizerResult res = asymptotic_limit(cfg_.ch, cfg_.cs, r, search_);
    ResultRow row;
    row.kind = BoundKind::Limit;
    row.r = echo_r(r);
    row.value = res.value;
    row.status = status_name(res.status);
    row.certificate_gap = res.certificate_gap;
    row.note = atoms_note(res.distribution, "u");
    row.wall_time = since(t0);
    emit(row);
  }

  void converse(std::int64_t n, double r) {
    const auto t0 = clock();
    const BoundResult b = converse_lower_bound({cfg_.ch, cfg_.cs, n, r, cfg_.r_prime}, search_);
    ResultRow row;
    row.kind = BoundKind::LowerBound;
    row.n = n;
    row.r = echo_r(r);
    row.value = b.value;
    row.status = status_name(b.optimizer.status);
    row.certificate_gap = b.optimizer.certificate_gap;
    row.note = "r_prime=" + format_number(echo_r(b.r_prime)) + ";raw=" + format_number(b.raw_value);
    row.wall_time = since(t0);
    emit(row);
  }

  AchievabilityQuery query(std::int64_t n, double r) {
    DiscreteDistribution mixture;
    if (cfg_.mixture) {
      mixture = *cfg_.mixture;
    } else {
      auto it = optima_.find(r);
      if (it == optima_.end()) it = optima_.emplace(r, asymptotic_limit(cfg_.ch, cfg_.cs, r, search_).distribution).first;
      mixture = it->second;
    }
    MCConfig mc;
    mc.samples = cfg_.mc_samples;
    mc.seed = cfg_.seed.value_or(0);
    mc.threads = opts_.threads;
    AchievabilityQuery q{cfg_.ch, cfg_.cs, n, r, default_theta(n), mixture, mc};
    if (cfg_.theta_mode == ThetaMode::Fixed) q.theta = cfg_.theta;
    if (cfg_.theta_mode == ThetaMode::Auto) q.theta = select_theta(q, cfg_.theta_pilot_samples);
    return q;
  }

  void achievability(std::int64_t n, double r, bool mc_row, bool analytic_row) {
    const auto t0 = clock();
    const AchievabilityQuery q = query(n, r);
    if (mc_row) {
      const MCEstimate est = mc_achievability_epsilon(q);
      ResultRow row;
      row.kind = BoundKind::UpperBoundMC;
      row.n = n;
      row.r = echo_r(r);
      row.value = est.mean;
      row.std_error = est.std_error;
      row.status = "OK";
      row.samples = est.samples;
      row.seed = est.seed;
      row.theta = cfg_.bits ? q.theta / std::numbers::ln2 : q.theta;
      row.note = atoms_note(q.mixture, "u");
      row.wall_time = since(t0);
      emit(row);
    }
    if (analytic_row) {
      ResultRow row;
      row.kind = BoundKind::AnalyticCurve;
      row.n = n;
      row.r = echo_r(r);
      row.value = analytic_achievability_curve(cfg_.ch, q, cfg_.kappa_prime);
      row.status = "OK";
      row.note = "kappa_prime=" + format_number(cfg_.bits ? cfg_.kappa_prime / std::numbers::ln2 : cfg_.kappa_prime);
      row.wall_time = since(t0);
      emit(row);
    }
  }

  int verify() {
    verify::Options o;
    o.ch = cfg_.ch;
    o.scale = cfg_.verify_scale;
    o.seed = cfg_.seed.value_or(0);
    o.threads = opts_.threads;
    bool all = true;
    auto report = [&](const CheckRow& row) {
      write_row(out_, cfg_.format, row);
      out_.flush();
      all = all && row.passed;
      if (opts_.verbose) log_ << row.id << ' ' << (row.passed ? "pass" : "FAIL") << " wall_time=" << format_number(row.wall_time) << "s\n";
    };
    for (const CheckRow& row : verify::suite(o)) report(row);
    return all ? 0 : 3;
  }

  int execute() {
    const bool checks = cfg_.command == Command::Verify;
    write_header(out_, cfg_.format, checks);
    try {
      switch (cfg_.command) {
        case Command::Limit:
          for (double r : cfg_.r_values) limit(r);
          break;
        case Command::Converse:
          for (std::int64_t n : cfg_.n_values)
            for (double r : cfg_.r_values) converse(n, r);
          break;
        case Command::Achievability:
          for (std::int64_t n : cfg_.n_values)
            for (double r : cfg_.r_values) achievability(n, r, true, true);
          break;
        case Command::Sweep:
          if (cfg_.sweep_bound == SweepBound::Limit) {
            for (double r : cfg_.r_values) limit(r);
            break;
          }
          for (std::int64_t n : cfg_.n_values) {
            for (double r : cfg_.r_values) {
              if (cfg_.sweep_bound == SweepBound::Converse) converse(n, r);
              if (cfg_.sweep_bound == SweepBound::Achievability) achievability(n, r, true, false);
              if (cfg_.sweep_bound == SweepBound::Analytic) achievability(n, r, false, true);
            }
          }
          break;
        case Command::Verify:
          return verify();
      }
    } catch (const std::exception& e) {
      if (checks) {
        write_row(out_, cfg_.format, failure_check(e.what()));
      } else {
        write_row(out_, cfg_.format, failure_row(e.what()));
      }
      out_.flush();
      log_ << "error: " << e.what() << '\n';
      return 3;
    }
    return 0;
  }

 private:
  using Clock = std::chrono::steady_clock;
  static Clock::time_point clock() { return Clock::now(); }
  static double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

  static std::string atoms_note(const DiscreteDistribution& d, const char* label) {
    std::string s;
    for (std::size_t j = 0; j < d.size(); ++j) {
      s += (j ? ";" : "") + std::string(label) + "=" + format_number(d.atoms[j]) + "@" + format_number(d.weights[j]);
    }
    return s;
  }

  const RunConfig& cfg_;
  const RunOptions& opts_;
  std::ostream& out_;
  std::ostream& log_;
  SearchOptions search_;
  std::map<double, DiscreteDistribution> optima_;
};

}  // namespace

int run(const RunConfig& config, const RunOptions& opts, std::ostream& out, std::ostream& log) {
  Runner runner(config, opts, out, log);
  return runner.execute();
}

int main(int argc, char** argv) {
  CLI::App app{"Second-order error probability limits and finite-blocklength bounds for AWGN channels "
               "under multifaceted power constraints"};
  std::string config_path;
  std::string output_path;
  int threads = 0;
  bool verbose = false;
  app.add_option("config", config_path, "JSON run configuration")->required();
  app.add_option("--output", output_path, "output file (overrides the config's output key)");
  app.add_option("--threads", threads, "worker threads (overrides MPC_BOUNDS_THREADS)")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "progress and wall time on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunOptions opts;
  opts.verbose = verbose;
  opts.threads = 1;
  if (const char* env = std::getenv("MPC_BOUNDS_THREADS")) {
    try {
      opts.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "error: MPC_BOUNDS_THREADS must be a positive integer\n";
      return 2;
    }
  }
  if (threads > 0) opts.threads = threads;

  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  const std::string target = !output_path.empty() ? output_path : cfg.output.value_or("");
  if (target.empty()) return run(cfg, opts, std::cout, std::cerr);
  std::ofstream file(target, std::ios::binary | std::ios::trunc);
  if (!file) {
    std::cerr << "error: cannot open output file '" << target << "'\n";
    return 2;
  }
  return run(cfg, opts, file, std::cerr);
}

}  // namespace mpc::cli
