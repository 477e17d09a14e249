#include "levcap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace levcap {

namespace {

// Firm value at the equity holders' optimal response; continuous limit
// e^x - eta(x) when the bankruptcy level reaches x from below.
double firm_at_optimum(const ModelInstance& inst, double x, double B_star) {
  if (B_star >= x) return std::exp(x) - inst.costs.eta(x);
  return firm(inst, x, B_star);
}

}  // namespace

NoSignChangeError::NoSignChangeError(double lo_, double hi_, double f_lo_,
                                     double f_hi_)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "no sign change on [" << lo_ << ", " << hi_ << "]: f(lo)=" << f_lo_
           << ", f(hi)=" << f_hi_;
        return os.str();
      }()),
      lo(lo_),
      hi(hi_),
      f_lo(f_lo_),
      f_hi(f_hi_) {}

double find_root_increasing(const std::function<double(double)>& f, double lo0,
                            double hi0, double width_tol) {
  constexpr double kLoLimit = -50.0;
  constexpr double kHiLimit = 50.0;
  double lo = lo0, hi = hi0;
  double flo = f(lo), fhi = f(hi);
  // geometric expansion until the endpoints straddle zero
  double step = std::max(1.0, hi - lo);
  while (flo > 0.0 && lo > kLoLimit) {
    lo = std::max(kLoLimit, lo - step);
    step *= 2.0;
    flo = f(lo);
  }
  step = std::max(1.0, hi0 - lo0);
  while (fhi < 0.0 && hi < kHiLimit) {
    hi = std::min(kHiLimit, hi + step);
    step *= 2.0;
    fhi = f(hi);
  }
  if (!(flo <= 0.0 && fhi >= 0.0)) throw NoSignChangeError(lo, hi, flo, fhi);
  while (hi - lo > width_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

SolveResult solve_bankruptcy_level(const ModelInstance& inst,
                                   std::optional<double> x) {
  const double B_star = find_root_increasing(
      [&](double B) { return K1(inst, B); }, 0.0, 10.0, 1e-12);

  SolveResult res;
  res.B_star = B_star;
  res.bankruptcy_asset_level = std::exp(B_star);
  res.K1_residual = K1(inst, B_star);

  // condition report: K1 monotone around the root, K2 nonnegative above it
  res.K1_monotone_on_grid = true;
  {
    double prev = K1(inst, B_star - 5.0);
    for (int i = 1; i < 400; ++i) {
      const double B = B_star - 5.0 + 10.0 * i / 399.0;
      const double v = K1(inst, B);
      if (v < prev - 1e-12 * std::max(1.0, std::abs(prev)))
        res.K1_monotone_on_grid = false;
      prev = v;
    }
  }
  res.K2_nonneg_above_root = true;
  for (int i = 0; i < 200; ++i) {
    const double B = B_star + 10.0 * i / 199.0;
    if (K2(inst, B) < -1e-12) res.K2_nonneg_above_root = false;
  }
  res.flag = (res.K1_monotone_on_grid && res.K2_nonneg_above_root)
                 ? Optimality::OPTIMAL
                 : Optimality::CANDIDATE;

  if (x) {
    res.x = *x;
    if (*x > B_star) {
      res.equity_at_x = equity(inst, *x, B_star);
      res.debt_at_x = debt(inst, *x, B_star);
      res.firm_at_x = firm(inst, *x, B_star);
    }
  }
  return res;
}

LimitedLiabilityReport verify_limited_liability(
    const ModelInstance& inst, double B, const std::vector<double>& x_grid) {
  LimitedLiabilityReport rep;
  rep.B = B;
  rep.min_equity = std::numeric_limits<double>::infinity();
  for (double x : x_grid) {
    if (!(x > B)) continue;
    const double e = equity(inst, x, B);
    if (e < rep.min_equity) {
      rep.min_equity = e;
      rep.argmin_x = x;
    }
    if (e < -1e-9) {
      rep.feasible = false;
      rep.violations.push_back(x);
    }
  }
  return rep;
}

ModelInstance ModelSpec::instantiate(double P) const {
  return ModelInstance::make(levy, market, DebtSpec{P, m}, costs);
}

TwoStageResult solve_two_stage(const ModelSpec& spec, double x,
                               const std::vector<double>& P_grid) {
  if (P_grid.size() < 2)
    throw std::invalid_argument("solve_two_stage: need at least 2 grid points");

  auto value_at = [&](double P, std::optional<double>* B_out) -> double {
    if (P <= 0.0) {
      if (B_out) B_out->reset();
      return std::exp(x);  // unlevered firm, no stopping problem
    }
    const ModelInstance inst = spec.instantiate(P);
    const SolveResult sr = solve_bankruptcy_level(inst);
    if (B_out) *B_out = sr.B_star;
    return firm_at_optimum(inst, x, sr.B_star);
  };

  TwoStageResult res;
  res.sweep.reserve(P_grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < P_grid.size(); ++i) {
    TwoStageSample s;
    s.P = P_grid[i];
    try {
      s.firm_value = value_at(s.P, &s.B_star);
    } catch (const std::exception&) {
      // skip-and-report: record as a hole in the sweep
      s.firm_value = std::numeric_limits<double>::quiet_NaN();
    }
    res.sweep.push_back(s);
    if (!std::isnan(s.firm_value) &&
        (std::isnan(res.sweep[best].firm_value) ||
         s.firm_value > res.sweep[best].firm_value + 1e-9))
      best = i;
  }

  // golden-section refinement on the bracketing interval
  double lo = P_grid[best > 0 ? best - 1 : 0];
  double hi = P_grid[std::min(best + 1, P_grid.size() - 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double p1 = hi - invphi * (hi - lo);
  double p2 = lo + invphi * (hi - lo);
  double f1v = value_at(p1, nullptr);
  double f2v = value_at(p2, nullptr);
  while (hi - lo > 0.05) {
    if (f1v >= f2v) {
      hi = p2;
      p2 = p1;
      f2v = f1v;
      p1 = hi - invphi * (hi - lo);
      f1v = value_at(p1, nullptr);
    } else {
      lo = p1;
      p1 = p2;
      f1v = f2v;
      p2 = lo + invphi * (hi - lo);
      f2v = value_at(p2, nullptr);
    }
  }
  // smallest P among within-tolerance maxima
  const double P_mid = 0.5 * (lo + hi);
  std::optional<double> B_at;
  double v_mid = value_at(P_mid, &B_at);
  double P_star = P_mid;
  double v_star = v_mid;
  if (std::exp(x) >= v_star - 1e-9) {  // P = 0 ties or wins
    P_star = 0.0;
    v_star = std::exp(x);
    B_at.reset();
  }
  res.P_star = P_star;
  res.firm_value = v_star;
  res.B_star_at_P_star =
      B_at ? *B_at : std::numeric_limits<double>::quiet_NaN();
  return res;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i)
    v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return v;
}

std::vector<SweepRow> sweep_scale_effects(const ModelSpec& spec, double x,
                                          SweepKnob knob, double lo, double hi,
                                          int steps, SweepMode mode,
                                          double P_fixed) {
  if (knob == SweepKnob::a && (lo < 0.0 || hi > 1.0))
    throw std::invalid_argument("sweep: a range must lie in [0,1]");
  std::vector<SweepRow> rows;
  for (double k : linspace(lo, hi, steps)) {
    SweepRow row;
    row.knob = k;
    try {
      ModelSpec s = spec;
      if (knob == SweepKnob::a)
        s.costs.a = k;
      else
        s.costs.c_tax = k;
      double P = P_fixed;
      if (mode == SweepMode::two_stage) {
        std::vector<double> grid;
        for (double p = 0.0; p <= 100.0 + 1e-9; p += 1.0) grid.push_back(p);
        const TwoStageResult ts = solve_two_stage(s, x, grid);
        row.P_star = ts.P_star;
        P = ts.P_star;
      }
      if (P <= 0.0) {
        row.B_star = -std::numeric_limits<double>::infinity();
        row.bankruptcy_asset_level = 0.0;
        row.equity = std::exp(x);
        row.debt = 0.0;
        row.firm = std::exp(x);
        row.debt_equity_ratio = 0.0;
      } else {
        const ModelInstance inst = s.instantiate(P);
        const SolveResult sr = solve_bankruptcy_level(inst, x);
        row.B_star = sr.B_star;
        row.bankruptcy_asset_level = sr.bankruptcy_asset_level;
        row.equity = sr.equity_at_x.value_or(0.0);
        row.debt = sr.debt_at_x.value_or(0.0);
        row.firm = sr.firm_at_x.value_or(firm_at_optimum(inst, x, sr.B_star));
        row.debt_equity_ratio =
            row.equity != 0.0 ? row.debt / row.equity : 0.0;
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace levcap
