// levcap: endogenous-bankruptcy capital structure calculator.
//
// Subcommands: solve, value, two-stage, sweep, validate.  Input is a JSON
// config (see configs/); all rates are decimals, asset values are linear V0.
// Exit codes: 0 ok, 2 config error, 3 solver failure, 4 validation failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levcap/config.hpp"
#include "levcap/mc_oracle.hpp"
#include "levcap/solver.hpp"

namespace {

using levcap::RunConfig;
using json = nlohmann::ordered_json;

constexpr const char* kSchema = "levcap/1";

// 12 significant digits, matching the CSV contract.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CsvWriter {
  std::ofstream file;
  std::ostream* out = nullptr;

  explicit CsvWriter(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw levcap::ConfigError("cannot open output file: " + path);
    out = &file;
  }
  void row(const std::vector<std::string>& cells) {
    if (!out) return;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) *out << ',';
      *out << cells[i];
    }
    *out << '\n';
  }
};

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::optional<double> P_override;
  std::optional<std::uint64_t> seed_override;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  const char* env_cfg = std::getenv("LEVCAP_CONFIG");
  cmd->add_option("--config", opts.config_path, "model config (JSON)")
      ->default_val(env_cfg ? env_cfg : "");
  cmd->add_option("--out", opts.out_path, "CSV output path");
  cmd->add_option("--P", opts.P_override, "override the debt face value");
  cmd->add_option("--seed", opts.seed_override, "override the MC seed");
}

RunConfig load(const CommonOpts& opts) {
  if (opts.config_path.empty())
    throw levcap::ConfigError(
        "no config given; use --config or set LEVCAP_CONFIG");
  RunConfig cfg = levcap::load_config(opts.config_path);
  if (opts.P_override) {
    if (*opts.P_override < 0.0) throw levcap::ConfigError("--P: must be >= 0");
    cfg.debt.P = *opts.P_override;
  }
  if (opts.seed_override) cfg.mc.seed = *opts.seed_override;
  const char* threads = std::getenv("LEVCAP_THREADS");
  if (threads) cfg.mc.threads = std::atoi(threads);
  return cfg;
}

int cmd_solve(const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  json out;
  out["schema"] = kSchema;
  out["command"] = "solve";
  if (cfg.debt.P == 0.0) {
    // Unlevered firm: no debt, no stopping problem.
    out["B_star"] = nullptr;
    out["bankruptcy_asset_level"] = nullptr;
    out["equity"] = cfg.V0;
    out["debt"] = 0.0;
    out["firm"] = cfg.V0;
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  auto inst = cfg.instance();
  auto res = levcap::solve_bankruptcy_level(inst, cfg.x());
  out["B_star"] = res.B_star;
  out["bankruptcy_asset_level"] = res.bankruptcy_asset_level;
  out["K1_residual"] = res.K1_residual;
  out["optimality"] =
      res.flag == levcap::Optimality::OPTIMAL ? "OPTIMAL" : "CANDIDATE";
  out["condition_report"] = {{"K1_monotone_on_grid", res.K1_monotone_on_grid},
                             {"K2_nonneg_above_root", res.K2_nonneg_above_root}};
  out["V0"] = cfg.V0;
  out["equity"] = *res.equity_at_x;
  out["debt"] = *res.debt_at_x;
  out["firm"] = *res.firm_at_x;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_value(const CommonOpts& opts, std::vector<double>& B_list,
              double v_max, int points) {
  RunConfig cfg = load(opts);
  auto inst = cfg.instance();
  if (B_list.empty()) {
    const double bs = levcap::solve_bankruptcy_level(inst).B_star;
    B_list = {bs - 0.2, bs - 0.1, bs, bs + 0.1, bs + 0.2};
  }
  CsvWriter csv(opts.out_path.empty() ? "" : opts.out_path);
  std::ostream& os = csv.out ? *csv.out : std::cout;
  os << "B,V0,equity,debt,firm\n";
  for (double B : B_list) {
    const double x_lo = B + 0.01;
    const double x_hi = std::log(v_max);
    if (x_hi <= x_lo)
      throw levcap::ConfigError("--vmax: must exceed e^B for every B");
    for (double x : levcap::linspace(x_lo, x_hi, points)) {
      os << fmt(B) << ',' << fmt(std::exp(x)) << ','
         << fmt(levcap::equity(inst, x, B)) << ','
         << fmt(levcap::debt(inst, x, B)) << ',' << fmt(levcap::firm(inst, x, B))
         << '\n';
    }
  }
  return 0;
}

int cmd_two_stage(const CommonOpts& opts, double p_max, double p_step) {
  RunConfig cfg = load(opts);
  std::vector<double> grid;
  for (double P = 0.0; P <= p_max + 1e-9; P += p_step) grid.push_back(P);
  auto res = levcap::solve_two_stage(cfg.model_spec(), cfg.x(), grid);

  json out;
  out["schema"] = kSchema;
  out["command"] = "two-stage";
  out["P_star"] = res.P_star;
  if (std::isnan(res.B_star_at_P_star))
    out["B_star_at_P_star"] = nullptr;
  else
    out["B_star_at_P_star"] = res.B_star_at_P_star;
  out["firm_value"] = res.firm_value;
  out["V0"] = cfg.V0;
  std::cout << out.dump(2) << '\n';

  CsvWriter csv(opts.out_path);
  csv.row({"P", "B_star", "firm"});
  for (const auto& s : res.sweep)
    csv.row({fmt(s.P), s.B_star ? fmt(*s.B_star) : "", fmt(s.firm_value)});
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& knob,
              const std::string& range, const std::string& mode) {
  RunConfig cfg = load(opts);
  levcap::SweepKnob k;
  if (knob == "a")
    k = levcap::SweepKnob::a;
  else if (knob == "c")
    k = levcap::SweepKnob::c_tax;
  else
    throw levcap::ConfigError("--knob: must be 'a' or 'c'");

  levcap::SweepMode md;
  if (mode == "fixed_P")
    md = levcap::SweepMode::fixed_P;
  else if (mode == "two_stage")
    md = levcap::SweepMode::two_stage;
  else
    throw levcap::ConfigError("--mode: must be 'fixed_P' or 'two_stage'");

  double lo = (k == levcap::SweepKnob::a) ? 0.0 : 3.0;
  double hi = (k == levcap::SweepKnob::a) ? 1.0 : 8.0;
  int steps = 11;
  if (!range.empty()) {
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 ||
        steps < 2 || !(hi > lo))
      throw levcap::ConfigError("--range: expected lo:hi:steps with hi > lo");
  }
  if (k == levcap::SweepKnob::a && (lo < 0.0 || hi > 1.0))
    throw levcap::ConfigError("--range: knob 'a' must stay within [0,1]");

  auto rows = levcap::sweep_scale_effects(cfg.model_spec(), cfg.x(), k, lo, hi,
                                          steps, md, cfg.debt.P);
  CsvWriter csv(opts.out_path.empty() ? "" : opts.out_path);
  std::ostream& os = csv.out ? *csv.out : std::cout;
  os << "knob,B_star,bankruptcy_asset_level,equity,debt,firm,debt_equity";
  if (md == levcap::SweepMode::two_stage) os << ",P_star";
  os << ",status\n";
  for (const auto& r : rows) {
    os << fmt(r.knob) << ',';
    if (r.ok) {
      os << fmt(r.B_star) << ',' << fmt(r.bankruptcy_asset_level) << ','
         << fmt(r.equity) << ',' << fmt(r.debt) << ',' << fmt(r.firm) << ','
         << fmt(r.debt_equity_ratio);
      if (md == levcap::SweepMode::two_stage) os << ',' << fmt(*r.P_star);
      os << ",ok\n";
    } else {
      const int blanks = md == levcap::SweepMode::two_stage ? 7 : 6;
      for (int i = 0; i < blanks; ++i) os << ',';
      os << "skipped: " << r.error << '\n';
    }
  }
  return 0;
}

int cmd_validate(const CommonOpts& opts, const std::string& bias_spec) {
  RunConfig cfg = load(opts);
  auto inst = cfg.instance();
  auto res = levcap::solve_bankruptcy_level(inst);
  const double B = res.B_star;
  const double x = cfg.x();

  auto mc = levcap::simulate_functionals(inst, x, B, cfg.mc);

  // Closed-form counterparts, in the same order as McFunctionals.
  struct Entry {
    const char* name;
    double closed;
    const levcap::McEstimate* est;
  };
  const auto& ev_r = inst.ev_r;
  const auto& ev_rm = inst.ev_rm;
  double closed[8] = {
      levcap::lambda_fn(inst, ev_r, x, B),
      levcap::lambda_fn(inst, ev_rm, x, B),
      levcap::M_fn(inst, ev_rm, 1, x, B),
      levcap::M_fn(inst, ev_r, 2, x, B),
      // E[e^{-(r+m)tau + X_tau}] = e^x - e^B Gamma^{(r+m)}(x-B)
      std::exp(x) - std::exp(B) * ev_rm.gamma_fn(x - B),
      levcap::equity(inst, x, B),
      levcap::debt(inst, x, B),
      levcap::firm(inst, x, B),
  };
  Entry entries[8] = {
      {"lambda_r", closed[0], &mc.lambda_r},
      {"lambda_rm", closed[1], &mc.lambda_rm},
      {"m1_rm", closed[2], &mc.m1_rm},
      {"m2_r", closed[3], &mc.m2_r},
      {"gamma_term", closed[4], &mc.gamma_term},
      {"equity", closed[5], &mc.equity},
      {"debt", closed[6], &mc.debt},
      {"firm", closed[7], &mc.firm},
  };

  // Deliberate-bias hook (negative control for the test suite): shifts one
  // closed-form value so the comparison must fail and name the functional.
  if (!bias_spec.empty()) {
    const auto colon = bias_spec.find(':');
    if (colon == std::string::npos)
      throw levcap::ConfigError("--bias: expected NAME:VALUE");
    const std::string name = bias_spec.substr(0, colon);
    const double value = std::atof(bias_spec.c_str() + colon + 1);
    bool found = false;
    for (auto& e : entries)
      if (name == e.name) {
        e.closed += value;
        found = true;
      }
    if (!found) throw levcap::ConfigError("--bias: unknown functional " + name);
  }

  json out;
  out["schema"] = kSchema;
  out["command"] = "validate";
  out["B_star"] = B;
  out["n_paths"] = cfg.mc.n_paths;
  out["seed"] = cfg.mc.seed;
  bool all_ok = true;
  json rows = json::array();
  for (const auto& e : entries) {
    const double err = e.est->std_error;
    const double dev = err > 0.0 ? (e.est->mean - e.closed) / err : 0.0;
    const bool ok = std::abs(e.est->mean - e.closed) <= 3.0 * err;
    all_ok = all_ok && ok;
    rows.push_back({{"functional", e.name},
                    {"closed_form", e.closed},
                    {"mc_mean", e.est->mean},
                    {"mc_std_error", err},
                    {"deviation_se", dev},
                    {"within_3se", ok}});
  }
  out["functionals"] = rows;
  out["all_within_3se"] = all_ok;
  std::cout << out.dump(2) << '\n';
  if (!all_ok) {
    for (const auto& r : rows)
      if (!r.at("within_3se").get<bool>())
        std::cerr << "validation failure: " << r.at("functional").get<std::string>()
                  << " outside 3 standard errors\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal capital structure for jump-diffusion asset values"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* solve = app.add_subcommand("solve", "optimal bankruptcy level");
  add_common(solve, opts);

  auto* value = app.add_subcommand("value", "equity/debt/firm value curves");
  add_common(value, opts);
  std::vector<double> B_list;
  double v_max = 200.0;
  int points = 50;
  value->add_option("--B", B_list, "bankruptcy levels (default B* +- 0.2)");
  value->add_option("--vmax", v_max, "largest asset value in the grid");
  value->add_option("--points", points, "grid points per level")
      ->check(CLI::Range(2, 100000));

  auto* two_stage = app.add_subcommand("two-stage", "optimal face value");
  add_common(two_stage, opts);
  double p_max = 100.0, p_step = 1.0;
  two_stage->add_option("--pmax", p_max, "largest face value on the grid");
  two_stage->add_option("--pstep", p_step, "coarse grid step");

  auto* sweep = app.add_subcommand("sweep", "scale-effect parameter sweeps");
  add_common(sweep, opts);
  std::string knob = "a", range, mode = "fixed_P";
  sweep->add_option("--knob", knob, "a (cost concavity) or c (tax convexity)");
  sweep->add_option("--range", range, "lo:hi:steps");
  sweep->add_option("--mode", mode, "fixed_P or two_stage");

  auto* validate = app.add_subcommand("validate", "Monte Carlo cross-check");
  add_common(validate, opts);
  std::string bias_spec;
  validate->add_option("--bias", bias_spec,
                       "NAME:VALUE shift of one closed form (negative control)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opts);
    if (value->parsed()) return cmd_value(opts, B_list, v_max, points);
    if (two_stage->parsed()) return cmd_two_stage(opts, p_max, p_step);
    if (sweep->parsed()) return cmd_sweep(opts, knob, range, mode);
    if (validate->parsed()) return cmd_validate(opts, bias_spec);
  } catch (const levcap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const levcap::NoSignChangeError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const levcap::ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
