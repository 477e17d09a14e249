#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "levcap/valuation.hpp"

namespace levcap {

class NoSignChangeError : public std::runtime_error {
 public:
  NoSignChangeError(double lo, double hi, double f_lo, double f_hi);
  double lo, hi, f_lo, f_hi;
};

// Expanding-bracket bisection for an increasing function.  Starts from
// [lo0, hi0], expands geometrically up to [-50, 50], then bisects until the
// bracket width is below width_tol.  Throws NoSignChangeError if no sign
// change is found.
double find_root_increasing(const std::function<double(double)>& f, double lo0,
                            double hi0, double width_tol = 1e-12);

enum class Optimality { OPTIMAL, CANDIDATE };

struct SolveResult {
  double B_star = 0.0;
  double bankruptcy_asset_level = 0.0;  // e^{B*}
  double K1_residual = 0.0;
  bool K1_monotone_on_grid = false;
  bool K2_nonneg_above_root = false;
  Optimality flag = Optimality::CANDIDATE;
  // Populated when an evaluation point x was requested.
  std::optional<double> x;
  std::optional<double> equity_at_x;
  std::optional<double> debt_at_x;
  std::optional<double> firm_at_x;
};

// Root of K1 plus the Theorem-3.1-style condition report (K1 monotone on
// [B*-5, B*+5], K2 >= 0 on [B*, B*+10]).
SolveResult solve_bankruptcy_level(const ModelInstance& inst,
                                   std::optional<double> x = std::nullopt);

struct LimitedLiabilityReport {
  double B = 0.0;
  bool feasible = true;          // E(x; B) >= -1e-9 on the whole grid
  double min_equity = 0.0;
  double argmin_x = 0.0;
  std::vector<double> violations;  // x values with E < -1e-9
};

LimitedLiabilityReport verify_limited_liability(
    const ModelInstance& inst, double B, const std::vector<double>& x_grid);

// Parameter bundle from which per-P instances are rebuilt (p = m P).
struct ModelSpec {
  LevyParams levy;
  MarketParams market;
  double m = 0.0;
  CostTaxSpec costs;

  ModelInstance instantiate(double P) const;
};

struct TwoStageSample {
  double P = 0.0;
  std::optional<double> B_star;  // absent at P = 0 (no stopping problem)
  double firm_value = 0.0;
};

struct TwoStageResult {
  double P_star = 0.0;
  double B_star_at_P_star = 0.0;  // NaN when P_star == 0
  double firm_value = 0.0;
  std::vector<TwoStageSample> sweep;
};

// Two-stage problem: max_P V(x; B*(P), P) on a coarse grid followed by
// golden-section refinement of the bracketing interval to dP < 0.05.
TwoStageResult solve_two_stage(const ModelSpec& spec, double x,
                               const std::vector<double>& P_grid);

enum class SweepKnob { a, c_tax };
enum class SweepMode { fixed_P, two_stage };

struct SweepRow {
  double knob = 0.0;
  double B_star = 0.0;
  double bankruptcy_asset_level = 0.0;
  double equity = 0.0;
  double debt = 0.0;
  double firm = 0.0;
  double debt_equity_ratio = 0.0;
  std::optional<double> P_star;  // two_stage mode only
  bool ok = true;                 // false when the point failed and was skipped
  std::string error;
};

std::vector<SweepRow> sweep_scale_effects(const ModelSpec& spec, double x,
                                          SweepKnob knob, double lo, double hi,
                                          int steps, SweepMode mode,
                                          double P_fixed);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace levcap
