#pragma once

#include <stdexcept>

namespace levcap {

// Spectrally negative Levy process: linear Brownian motion minus a compound
// Poisson process with exponentially distributed (rate beta) downward jumps.
//
//   kappa(s) = mu*s + sigma^2 s^2 / 2 + lambda * (beta/(beta+s) - 1)
//
// Restricted to sigma > 0 (unbounded variation) and beta > 1.
struct LevyParams {
  double mu;      // linear drift, per unit time
  double sigma;   // diffusion volatility, per sqrt(time)
  double lambda;  // jump intensity, per unit time
  double beta;    // exponential jump-size rate, per unit log-asset

  void validate() const;
};

struct MarketParams {
  double r;          // risk-free rate, > 0
  double delta;      // payout rate, 0 < delta < r
  double gamma_hat;  // corporate tax rate, in [0,1]
  double rho_hat;    // coupon rate per unit face value, > 0

  void validate() const;
};

// Laplace exponent kappa(s); requires s > -beta.
double laplace_exponent(const LevyParams& params, double s);

// d/ds kappa(s)
double laplace_exponent_derivative(const LevyParams& params, double s);

// Drift mu such that kappa(1) = r - delta (risk-neutral martingale condition
// for the exponential asset value e^X).
LevyParams calibrate_drift(const MarketParams& market, double sigma,
                           double lambda, double beta);

// Largest positive root of kappa(s) = q, q > 0.
double phi(const LevyParams& params, double q);

// All three real roots of kappa(s) = q for the exponential-jump diffusion:
// phi_q > 0 and the two negative roots -xi1 in (-beta, 0), -xi2 < -beta.
// xi1, xi2 are returned as positive numbers.
struct KappaRoots {
  double phi_q;
  double xi1;
  double xi2;
};

KappaRoots kappa_roots(const LevyParams& params, double q);

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levcap
