#include "levcap/levy_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace levcap {

namespace {

// (beta+s)*(kappa(s)-q), a cubic with the same roots as kappa(s)=q plus no
// spurious ones (kappa has a pole at -beta where the cubic is lambda*beta > 0).
//   p(s) = (sigma^2/2) s^3 + (mu + sigma^2 beta / 2) s^2
//        + (mu beta - lambda - q) s - q beta
double cubic(const LevyParams& lp, double q, double s) {
  const double a3 = 0.5 * lp.sigma * lp.sigma;
  const double a2 = lp.mu + 0.5 * lp.sigma * lp.sigma * lp.beta;
  const double a1 = lp.mu * lp.beta - lp.lambda - q;
  const double a0 = -q * lp.beta;
  return ((a3 * s + a2) * s + a1) * s + a0;
}

// Bisection on [lo, hi] with f(lo)*f(hi) < 0, to near machine resolution.
template <typename F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw ConvergenceError("bisect: endpoints do not bracket a root");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void LevyParams::validate() const {
  if (!(sigma > 0.0))
    throw std::invalid_argument("LevyParams: sigma must be > 0");
  if (!(lambda >= 0.0))
    throw std::invalid_argument("LevyParams: lambda must be >= 0");
  if (!(beta > 1.0))
    throw std::invalid_argument("LevyParams: beta must be > 1");
}

void MarketParams::validate() const {
  if (!(r > 0.0)) throw std::invalid_argument("MarketParams: r must be > 0");
  if (!(delta > 0.0 && delta < r))
    throw std::invalid_argument("MarketParams: require 0 < delta < r");
  if (!(gamma_hat >= 0.0 && gamma_hat <= 1.0))
    throw std::invalid_argument("MarketParams: gamma_hat must be in [0,1]");
  if (!(rho_hat > 0.0))
    throw std::invalid_argument("MarketParams: rho_hat must be > 0");
}

double laplace_exponent(const LevyParams& params, double s) {
  if (!(s > -params.beta))
    throw std::domain_error("laplace_exponent: s <= -beta");
  return params.mu * s + 0.5 * params.sigma * params.sigma * s * s +
         params.lambda * (params.beta / (params.beta + s) - 1.0);
}

double laplace_exponent_derivative(const LevyParams& params, double s) {
  const double bs = params.beta + s;
  return params.mu + params.sigma * params.sigma * s -
         params.lambda * params.beta / (bs * bs);
}

LevyParams calibrate_drift(const MarketParams& market, double sigma,
                           double lambda, double beta) {
  market.validate();
  const double mu = (market.r - market.delta) - 0.5 * sigma * sigma -
                    lambda * (beta / (beta + 1.0) - 1.0);
  LevyParams params{mu, sigma, lambda, beta};
  params.validate();
  return params;
}

double phi(const LevyParams& params, double q) {
  params.validate();
  if (!(q > 0.0)) throw std::domain_error("phi: q must be > 0");
  // kappa(0) = 0 < q and kappa -> +infinity, so a positive root exists;
  // strict convexity makes the largest one the only one with kappa' > 0.
  double hi = 1.0;
  while (laplace_exponent(params, hi) < q) {
    hi *= 2.0;
    if (hi > 1e12) throw ConvergenceError("phi: bracket expansion failed");
  }
  const double root = bisect(
      [&](double s) { return cubic(params, q, s); }, 0.0, hi);
  const double resid = laplace_exponent(params, root) - q;
  if (std::abs(resid) > 1e-9 * std::max(1.0, q))
    throw ConvergenceError("phi: residual check failed");
  return root;
}

KappaRoots kappa_roots(const LevyParams& params, double q) {
  params.validate();
  if (!(q > 0.0)) throw std::domain_error("kappa_roots: q must be > 0");
  if (!(params.lambda > 0.0))
    throw std::domain_error("kappa_roots: requires lambda > 0");

  const double b = params.beta;
  auto p = [&](double s) { return cubic(params, q, s); };

  // p(0) = -q*beta < 0, p(-beta) = lambda*beta > 0, p(-inf) = -inf,
  // p(+inf) = +inf: one root per interval.
  const double phi_q = phi(params, q);

  const double root_mid = bisect(p, -b * (1.0 - 1e-14), 0.0);

  double lo = -2.0 * b;
  while (p(lo) > 0.0) {
    lo *= 2.0;
    if (lo < -1e12)
      throw ConvergenceError("kappa_roots: left bracket expansion failed");
  }
  const double root_left = bisect(p, lo, -b * (1.0 + 1e-14));

  KappaRoots roots{phi_q, -root_mid, -root_left};

  // rational continuation of kappa across the pole at -beta, for residuals
  auto kappa_ext = [&](double s) {
    return params.mu * s + 0.5 * params.sigma * params.sigma * s * s +
           params.lambda * (params.beta / (params.beta + s) - 1.0);
  };
  for (double s : {roots.phi_q, -roots.xi1, -roots.xi2}) {
    const double resid = kappa_ext(s) - q;
    if (std::abs(resid) > 1e-9 * std::max(1.0, std::abs(q)))
      throw ConvergenceError("kappa_roots: residual check failed");
  }
  if (std::abs(roots.xi1 - roots.xi2) < 1e-12 * (roots.xi1 + roots.xi2))
    throw ConvergenceError("kappa_roots: degenerate (near-multiple) roots");
  return roots;
}

}  // namespace levcap
