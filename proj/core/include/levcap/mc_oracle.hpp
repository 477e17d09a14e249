#pragma once

#include <cstdint>

#include "levcap/valuation.hpp"

namespace levcap {

// Monte Carlo first-passage oracle.  Jump-adapted scheme: exact exponential
// jump times overlaid on a fixed diffusion grid, with an optional
// Brownian-bridge crossing correction on each diffusion sub-interval.
// One independent seeded stream per path, so results are bit-identical for a
// given config under any degree of parallelism.
struct McConfig {
  std::int64_t n_paths = 0;
  double dt = 1e-3;
  double horizon = 185.0;  // choose so e^{-r*horizon} < 1e-6
  std::uint64_t seed = 0;
  bool bridge_correction = true;
  int threads = 0;  // 0 = hardware concurrency

  void validate(double r) const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
};

struct McFunctionals {
  McEstimate lambda_r;     // E[e^{-r tau} eta(X_tau)]
  McEstimate lambda_rm;    // E[e^{-(r+m) tau} eta(X_tau)]
  McEstimate m1_rm;        // E[int_0^tau e^{-(r+m)t} f1 dt]
  McEstimate m2_r;         // E[int_0^tau e^{-rt} f2(X_t) dt]
  McEstimate gamma_term;   // E[e^{-(r+m) tau + X_tau}]
  McEstimate equity;
  McEstimate debt;
  McEstimate firm;
};

McFunctionals simulate_functionals(const ModelInstance& inst, double x,
                                   double B, const McConfig& config);

// E[e^{-(r-delta) T} V_T] by exact simulation (no grid); equals V_0 = e^x
// under the martingale calibration.
McEstimate simulate_discounted_terminal_asset(const LevyParams& levy,
                                              const MarketParams& market,
                                              double x, double T,
                                              const McConfig& config);

}  // namespace levcap
