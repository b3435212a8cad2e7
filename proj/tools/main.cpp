// Command-line surface over the age-of-information analysis library.
//
// Subcommands: analyze, simulate, validate, coud, approx, optimize. Output is
// CSV or JSON with fixed column order and locale-independent formatting, so
// identical invocations are byte-identical. A JSON run spec is embedded in
// JSON output and can be fed back through --config; explicit flags win over
// config values.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoiq.h"

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 12345;

// 9 significant digits, '.' separator, no locale involvement.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw CliError{code, message}; }

[[noreturn]] void fail_from_api(aoiq_status status) {
  const int code = status == AOIQ_ERR_ACCURACY ? 3 : 2;
  fail(code, aoiq_last_error());
}

void check(aoiq_status status) {
  if (status != AOIQ_OK) fail_from_api(status);
}

struct RunSpec {
  std::string command;
  std::string model = "fcfs";
  double lambda = 0.5;
  double mu = 0.9;
  double p = 1.0;
  std::string f = "linear";
  double alpha = 1.0;
  double beta = 0.0;
  int n = 2;
  int x_max = 100;
  std::uint64_t slots = 1'000'000;
  std::uint64_t warmup = 10'000;
  std::uint64_t seed = kDefaultSeed;
  double epsilon = 1e-3;
  int probe_t = 15;
  std::string metric = "pcoud";
  double tol = 1e-7;
  std::string format = "csv";

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["model"] = model;
    j["lambda"] = lambda;
    j["mu"] = mu;
    j["p"] = p;
    j["f"] = f;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["n"] = n;
    j["x-max"] = x_max;
    j["slots"] = slots;
    j["warmup"] = warmup;
    j["seed"] = seed;
    j["epsilon"] = epsilon;
    j["probe-t"] = probe_t;
    j["metric"] = metric;
    j["tol"] = tol;
    j["format"] = format;
    return j;
  }

  void apply_json(const ordered_json& j) {
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("command", command);
    get("model", model);
    get("lambda", lambda);
    get("mu", mu);
    get("p", p);
    get("f", f);
    get("alpha", alpha);
    get("beta", beta);
    get("n", n);
    get("x-max", x_max);
    get("slots", slots);
    get("warmup", warmup);
    get("seed", seed);
    get("epsilon", epsilon);
    get("probe-t", probe_t);
    get("metric", metric);
    get("tol", tol);
    get("format", format);
  }
};

aoiq_model_kind model_kind(const std::string& name) {
  if (name == "fcfs") return AOIQ_MODEL_FCFS;
  if (name == "lcfs-p") return AOIQ_MODEL_LCFS_PREEMPTIVE;
  if (name == "bufferless") return AOIQ_MODEL_BUFFERLESS;
  fail(2, "unknown model '" + name + "' (expected fcfs, lcfs-p, or bufferless)");
}

aoiq_cost cost_from(const RunSpec& spec) {
  aoiq_cost cost{AOIQ_COST_LINEAR, spec.alpha, spec.beta, spec.n, nullptr, 0};
  if (spec.f == "linear")
    cost.kind = AOIQ_COST_LINEAR;
  else if (spec.f == "power")
    cost.kind = AOIQ_COST_POWER;
  else if (spec.f == "affine-quad")
    cost.kind = AOIQ_COST_AFFINE_QUAD;
  else if (spec.f == "exp")
    cost.kind = AOIQ_COST_EXP;
  else if (spec.f == "log")
    cost.kind = AOIQ_COST_LOG;
  else
    fail(2, "unknown cost '" + spec.f + "' (expected linear, power, affine-quad, exp, or log)");
  return cost;
}

aoiq_metric metric_from(const RunSpec& spec) {
  if (spec.metric == "coud") return AOIQ_METRIC_COUD;
  if (spec.metric == "pcoud") return AOIQ_METRIC_PCOUD;
  fail(2, "unknown metric '" + spec.metric + "' (expected coud or pcoud)");
}

struct ModelHandle {
  aoiq_model* handle = nullptr;
  explicit ModelHandle(const RunSpec& spec) {
    check(aoiq_model_create(model_kind(spec.model), spec.lambda, spec.mu, spec.p, &handle));
  }
  ~ModelHandle() { aoiq_model_free(handle); }
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
};

struct SimHandle {
  aoiq_sim* handle = nullptr;
  SimHandle(const ModelHandle& model, const RunSpec& spec, bool record_trace) {
    check(aoiq_simulate(model.handle, spec.slots, spec.warmup, spec.seed,
                        std::max(spec.x_max, 500), record_trace ? 1 : 0, &handle));
  }
  ~SimHandle() { aoiq_sim_free(handle); }
  SimHandle(const SimHandle&) = delete;
  SimHandle& operator=(const SimHandle&) = delete;
};

// Uniform tabular result: one header, rows of preformatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

  std::string to_csv() const {
    std::ostringstream out;
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return out.str();
  }

  ordered_json to_json() const {
    ordered_json j;
    j["columns"] = columns;
    ordered_json rows_json = ordered_json::array();
    for (const auto& row : rows) rows_json.push_back(row);
    j["rows"] = rows_json;
    return j;
  }
};

std::string render(const RunSpec& spec, const Table& table) {
  if (spec.format == "csv") return table.to_csv();
  if (spec.format == "json") {
    ordered_json j;
    j["command"] = spec.command;
    j["run_spec"] = spec.to_json();
    j["result"] = table.to_json();
    return j.dump(2) + "\n";
  }
  fail(2, "unknown format '" + spec.format + "' (expected csv or json)");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(2, "cannot open output path '" + out_path + "'");
  out << text;
}

Table run_analyze(const RunSpec& spec) {
  if (spec.x_max < 1) fail(2, "analyze: x-max must be >= 1");
  ModelHandle model(spec);
  Table t;
  t.columns = {"x", "aoi_pmf", "paoi_pmf", "aoi_cdf", "paoi_cdf"};
  for (int x = 1; x <= spec.x_max; ++x) {
    double ap = 0, pp = 0, ac = 0, pc = 0;
    check(aoiq_aoi_pmf(model.handle, x, &ap));
    check(aoiq_paoi_pmf(model.handle, x, &pp));
    check(aoiq_aoi_cdf(model.handle, x, &ac));
    check(aoiq_paoi_cdf(model.handle, x, &pc));
    t.add_row({fmt(x), fmt(ap), fmt(pp), fmt(ac), fmt(pc)});
  }
  return t;
}

void write_trace(const SimHandle& sim, const std::string& path) {
  std::ostringstream out;
  out << "n,t_n,t'_n,T_n,A_n\n";
  const std::uint64_t len = aoiq_sim_trace_len(sim.handle);
  for (std::uint64_t i = 0; i < len; ++i) {
    aoiq_delivery rec{};
    check(aoiq_sim_trace_get(sim.handle, i, &rec));
    out << rec.n << "," << rec.t_generated << "," << rec.t_delivered << "," << rec.system_time
        << "," << rec.peak_age << "\n";
  }
  emit(out.str(), path);
}

Table run_simulate(const RunSpec& spec, const std::string& trace_out) {
  ModelHandle model(spec);
  SimHandle sim(model, spec, !trace_out.empty());
  Table t;
  t.columns = {"model", "lambda", "mu",       "p",        "slots",     "warmup",
               "seed",  "deliveries", "rate_estimate", "aoi_mean", "paoi_mean", "system_time_mean"};
  t.add_row({spec.model, fmt(spec.lambda), fmt(spec.mu), fmt(spec.p), fmt(spec.slots),
             fmt(spec.warmup), fmt(spec.seed), fmt(aoiq_sim_deliveries(sim.handle)),
             fmt(aoiq_sim_rate(sim.handle)), fmt(aoiq_sim_mean(sim.handle, AOIQ_DIST_AOI)),
             fmt(aoiq_sim_mean(sim.handle, AOIQ_DIST_PAOI)),
             fmt(aoiq_sim_mean(sim.handle, AOIQ_DIST_SYSTEM_TIME))});
  if (!trace_out.empty()) write_trace(sim, trace_out);
  return t;
}

Table run_validate(const RunSpec& spec, bool* all_passed) {
  ModelHandle model(spec);
  SimHandle sim(model, spec, false);

  const int x_hist = std::max(spec.x_max, 500);
  std::vector<double> emp_aoi(static_cast<size_t>(x_hist) + 1, 0.0);
  std::vector<double> emp_paoi(static_cast<size_t>(x_hist) + 1, 0.0);
  double emp_aoi_tail = 0.0, emp_paoi_tail = 0.0;
  check(aoiq_sim_pmf(sim.handle, AOIQ_DIST_AOI, emp_aoi.data(), x_hist + 1, &emp_aoi_tail));
  check(aoiq_sim_pmf(sim.handle, AOIQ_DIST_PAOI, emp_paoi.data(), x_hist + 1, &emp_paoi_tail));

  double tv_aoi = 0.0, tv_paoi = 0.0;
  double ana_aoi_mass = 0.0, ana_paoi_mass = 0.0;
  for (int x = 1; x <= x_hist; ++x) {
    double ap = 0, pp = 0;
    check(aoiq_aoi_pmf(model.handle, x, &ap));
    check(aoiq_paoi_pmf(model.handle, x, &pp));
    tv_aoi += std::abs(ap - emp_aoi[static_cast<size_t>(x)]);
    tv_paoi += std::abs(pp - emp_paoi[static_cast<size_t>(x)]);
    ana_aoi_mass += ap;
    ana_paoi_mass += pp;
  }
  tv_aoi = 0.5 * (tv_aoi + std::abs(1.0 - ana_aoi_mass - emp_aoi_tail));
  tv_paoi = 0.5 * (tv_paoi + std::abs(1.0 - ana_paoi_mass - emp_paoi_tail));

  const aoiq_cost linear{AOIQ_COST_LINEAR, 1.0, 0.0, 1, nullptr, 0};
  double analytic_mean = 0.0;
  check(aoiq_cost_mean_closed(model.handle, AOIQ_METRIC_COUD, &linear, &analytic_mean));
  const double mean_rel_err =
      std::abs(aoiq_sim_mean(sim.handle, AOIQ_DIST_AOI) - analytic_mean) / analytic_mean;

  double residual = 0.0, renewal_rate_gap = 0.0;
  int low_confidence = 0;
  check(aoiq_sim_stationary_residual(sim.handle, 50, &residual, &renewal_rate_gap, &low_confidence));

  Table t;
  t.columns = {"check", "value", "threshold", "status"};
  bool ok = true;
  const auto row = [&](const char* name, double value, double threshold) {
    const bool pass = value < threshold;
    ok = ok && pass;
    t.add_row({name, fmt(value), fmt(threshold), pass ? "PASS" : "FAIL"});
  };
  row("aoi_tv", tv_aoi, 0.01);
  row("paoi_tv", tv_paoi, 0.01);
  row("aoi_mean_rel_err", mean_rel_err, 0.02);
  row("stationary_identity_residual", residual, 0.01);
  if (model_kind(spec.model) == AOIQ_MODEL_BUFFERLESS) {
    // Age and peak age share one distribution in this system.
    double tv_identity = 0.0;
    for (int x = 1; x <= x_hist; ++x)
      tv_identity += std::abs(emp_aoi[static_cast<size_t>(x)] - emp_paoi[static_cast<size_t>(x)]);
    tv_identity = 0.5 * (tv_identity + std::abs(emp_aoi_tail - emp_paoi_tail));
    row("aoi_paoi_tv", tv_identity, 0.01);
  }
  *all_passed = ok;
  return t;
}

Table run_coud(const RunSpec& spec) {
  ModelHandle model(spec);
  const aoiq_cost cost = cost_from(spec);
  Table t;
  t.columns = {"metric", "closed_form", "numeric"};
  for (aoiq_metric metric : {AOIQ_METRIC_COUD, AOIQ_METRIC_PCOUD}) {
    double numeric = 0.0;
    check(aoiq_cost_mean_numeric(model.handle, metric, &cost, 1e-14, &numeric));
    double closed = 0.0;
    if (cost.kind == AOIQ_COST_EXP) {
      // No closed form; the power-series route is the analytic path.
      check(aoiq_cost_mean_series(model.handle, metric, &cost, spec.probe_t,
                                  std::min(spec.epsilon, 1e-6), &closed));
    } else if (cost.kind == AOIQ_COST_LOG) {
      closed = numeric;  // analytic route for this cost is the summation itself
    } else {
      check(aoiq_cost_mean_closed(model.handle, metric, &cost, &closed));
    }
    t.add_row({metric == AOIQ_METRIC_COUD ? "coud" : "pcoud", fmt(closed), fmt(numeric)});
  }
  return t;
}

Table run_approx(const RunSpec& spec) {
  const aoiq_cost cost = cost_from(spec);
  if (cost.kind != AOIQ_COST_EXP && cost.kind != AOIQ_COST_LOG)
    fail(2, "approx: cost must be exp or log");
  std::vector<double> gaps(256, 0.0);
  int k = 0;
  check(aoiq_approximate(&cost, spec.probe_t, spec.epsilon, static_cast<int>(gaps.size()),
                         gaps.data(), &k));
  Table t;
  t.columns = {"k", "gap"};
  for (int i = 1; i <= k; ++i) t.add_row({fmt(i), fmt(gaps[static_cast<size_t>(i - 1)])});
  return t;
}

Table run_optimize(const RunSpec& spec) {
  const aoiq_cost cost = cost_from(spec);
  aoiq_opt_result r{};
  check(aoiq_optimal_lambda(model_kind(spec.model), &cost, metric_from(spec), spec.mu, spec.p,
                            spec.tol, &r));
  Table t;
  t.columns = {"lambda_star", "objective",  "method",
               "iterations",  "bracket_lo", "bracket_hi"};
  t.add_row({fmt(r.lambda_star), fmt(r.objective_value),
             r.method == 0 ? "closed_form" : "golden_section", fmt(r.iterations),
             fmt(r.bracket_lo), fmt(r.bracket_hi)});
  return t;
}

int run(int argc, char** argv) {
  RunSpec spec;
  std::string config_path, out_path, trace_out;

  CLI::App app{"Exact stationary age-of-information analysis for discrete-time "
               "status-update systems, with a built-in validating simulator"};
  app.require_subcommand(0, 1);
  app.add_option("--config", config_path, "JSON run spec (flags override its values)");

  std::map<std::string, CLI::App*> commands;
  std::map<std::string, CLI::Option*> opts;
  const auto add_common = [&](CLI::App* cmd) {
    const std::string name = cmd->get_name();
    opts[name + ".model"] = cmd->add_option("--model", spec.model, "fcfs, lcfs-p, or bufferless");
    opts[name + ".lambda"] = cmd->add_option("--lambda", spec.lambda, "arrival probability");
    opts[name + ".mu"] = cmd->add_option("--mu", spec.mu, "service success probability");
    opts[name + ".p"] = cmd->add_option("--p", spec.p, "channel success probability (bufferless)");
    opts[name + ".f"] = cmd->add_option("--f", spec.f,
                                        "cost: linear, power, affine-quad, exp, log");
    opts[name + ".alpha"] = cmd->add_option("--alpha", spec.alpha, "cost scale");
    opts[name + ".beta"] = cmd->add_option("--beta", spec.beta, "linear term of affine-quad");
    opts[name + ".n"] = cmd->add_option("--n", spec.n, "power-cost exponent");
    opts[name + ".x-max"] = cmd->add_option("--x-max", spec.x_max, "largest age emitted");
    opts[name + ".slots"] = cmd->add_option("--slots", spec.slots, "simulated slots");
    opts[name + ".warmup"] = cmd->add_option("--warmup", spec.warmup, "discarded leading slots");
    opts[name + ".seed"] = cmd->add_option("--seed", spec.seed, "simulation seed");
    opts[name + ".epsilon"] = cmd->add_option("--epsilon", spec.epsilon, "series gap target");
    opts[name + ".probe-t"] = cmd->add_option("--probe-t", spec.probe_t, "series probe age");
    opts[name + ".metric"] = cmd->add_option("--metric", spec.metric, "coud or pcoud");
    opts[name + ".tol"] = cmd->add_option("--tol", spec.tol, "optimizer tolerance");
    opts[name + ".format"] = cmd->add_option("--format", spec.format, "csv or json");
    cmd->add_option("--out", out_path, "write output to this path instead of stdout");
    if (name == "simulate")
      cmd->add_option("--trace-out", trace_out, "write per-delivery trace CSV to this path");
    commands[name] = cmd;
  };
  add_common(app.add_subcommand("analyze", "stationary pmfs and distribution functions"));
  add_common(app.add_subcommand("simulate", "slot-level Monte-Carlo run summary"));
  add_common(app.add_subcommand("validate", "simulation vs analytics with pass/fail checks"));
  add_common(app.add_subcommand("coud", "average cost and peak cost of an age penalty"));
  add_common(app.add_subcommand("approx", "power-series gap trajectory for exp/log costs"));
  add_common(app.add_subcommand("optimize", "arrival probability minimizing a cost mean"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::string command;
  for (const auto& [name, cmd] : commands)
    if (cmd->parsed()) command = name;

  // Resolution order: defaults, then environment seed, then config file,
  // then explicit flags (which CLI11 has already written into `spec`).
  RunSpec resolved;
  if (const char* env_seed = std::getenv("AOIQ_SEED"); env_seed != nullptr) {
    std::uint64_t parsed = 0;
    const auto res = std::from_chars(env_seed, env_seed + std::strlen(env_seed), parsed);
    if (res.ec != std::errc() || *res.ptr != '\0')
      fail(2, "AOIQ_SEED must be an unsigned integer");
    resolved.seed = parsed;
  }
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) fail(2, "cannot read config '" + config_path + "'");
    ordered_json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      fail(2, std::string("config is not valid JSON: ") + e.what());
    }
    if (j.contains("run_spec")) j = j.at("run_spec");
    try {
      resolved.apply_json(j);
    } catch (const std::exception& e) {
      fail(2, std::string("bad config value: ") + e.what());
    }
  }
  if (!command.empty())
    resolved.command = command;
  else
    command = resolved.command;
  if (command.empty()) {
    std::cerr << "error: no command given (and none found in --config)\n";
    return 2;
  }
  const auto flag_given = [&](const char* field) {
    const auto it = opts.find(command + "." + field);
    return it != opts.end() && it->second->count() > 0;
  };
  if (flag_given("model")) resolved.model = spec.model;
  if (flag_given("lambda")) resolved.lambda = spec.lambda;
  if (flag_given("mu")) resolved.mu = spec.mu;
  if (flag_given("p")) resolved.p = spec.p;
  if (flag_given("f")) resolved.f = spec.f;
  if (flag_given("alpha")) resolved.alpha = spec.alpha;
  if (flag_given("beta")) resolved.beta = spec.beta;
  if (flag_given("n")) resolved.n = spec.n;
  if (flag_given("x-max")) resolved.x_max = spec.x_max;
  if (flag_given("slots")) resolved.slots = spec.slots;
  if (flag_given("warmup")) resolved.warmup = spec.warmup;
  if (flag_given("seed")) resolved.seed = spec.seed;
  if (flag_given("epsilon")) resolved.epsilon = spec.epsilon;
  if (flag_given("probe-t")) resolved.probe_t = spec.probe_t;
  if (flag_given("metric")) resolved.metric = spec.metric;
  if (flag_given("tol")) resolved.tol = spec.tol;
  if (flag_given("format")) resolved.format = spec.format;

  // Explicit flags must be consistent with the chosen model; config snapshots
  // carry every field and are exempt.
  const bool is_bufferless = model_kind(resolved.model) == AOIQ_MODEL_BUFFERLESS;
  if (flag_given("p") && !is_bufferless)
    fail(2, "--p applies to the bufferless model only");
  if (flag_given("mu") && is_bufferless)
    fail(2, "--mu does not apply to the bufferless model");

  Table table;
  int exit_code = 0;
  if (command == "analyze") {
    table = run_analyze(resolved);
  } else if (command == "simulate") {
    table = run_simulate(resolved, trace_out);
  } else if (command == "validate") {
    bool all_passed = false;
    table = run_validate(resolved, &all_passed);
    if (!all_passed) exit_code = 3;
  } else if (command == "coud") {
    table = run_coud(resolved);
  } else if (command == "approx") {
    table = run_approx(resolved);
  } else if (command == "optimize") {
    table = run_optimize(resolved);
  } else {
    fail(2, "unknown command '" + command + "'");
  }
  emit(render(resolved, table), out_path);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
