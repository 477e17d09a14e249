#include "levcap/scale_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace levcap {

ScaleEvaluator::ScaleEvaluator(const LevyParams& params, double q)
    : params_(params), q_(q) {
  params_.validate();
  if (!(q > 0.0)) throw std::domain_error("ScaleEvaluator: q must be > 0");

  if (params.lambda > 0.0) {
    const KappaRoots roots = kappa_roots(params, q);
    phi_ = roots.phi_q;
    xi_[0] = roots.xi1;
    xi_[1] = roots.xi2;
    c_[0] = -1.0 / laplace_exponent_derivative(params, -xi_[0]);
    c_[1] = -1.0 / laplace_exponent_derivative(params, -xi_[1]);
  } else {
    // Pure diffusion: kappa is quadratic, only one negative root.
    phi_ = levcap::phi(params, q);
    const double s2 = params.sigma * params.sigma;
    // roots of (s2/2) s^2 + mu s - q
    const double disc = std::sqrt(params.mu * params.mu + 2.0 * s2 * q);
    xi_[0] = (params.mu + disc) / s2;
    xi_[1] = xi_[0] + params.beta + 1.0;  // unused, C=0
    c_[0] = -1.0 / laplace_exponent_derivative(params, -xi_[0]);
    c_[1] = 0.0;
  }
  kp_phi_ = laplace_exponent_derivative(params, phi_);
  kappa1_ = laplace_exponent(params, 1.0);
  x_cap_ = 60.0 / phi_;

  // Sum of residues of (beta+s)/p(s) vanishes, so C_1 + C_2 = 1/kappa'(Phi)
  // and W'(0+) = sum C_i (Phi + xi_i) = 2/sigma^2 must hold.
  if (!(c_[0] > 0.0) || c_[1] < 0.0)
    throw ConvergenceError("ScaleEvaluator: nonpositive coefficient");
  const double wp0 = c_[0] * (phi_ + xi_[0]) + c_[1] * (phi_ + xi_[1]);
  const double expect = 2.0 / (params.sigma * params.sigma);
  if (std::abs(wp0 - expect) > 1e-8 * expect)
    throw ConvergenceError("ScaleEvaluator: W'(0+) != 2/sigma^2");
}

void ScaleEvaluator::check_range(double x) const {
  if (x > x_cap_)
    throw std::domain_error("ScaleEvaluator: x beyond overflow cap 60/Phi(q)");
}

double ScaleEvaluator::W(double x) const {
  if (x < 0.0) return 0.0;
  check_range(x);
  const double ep = std::exp(phi_ * x);
  return c_[0] * (ep - std::exp(-xi_[0] * x)) +
         c_[1] * (ep - std::exp(-xi_[1] * x));
}

double ScaleEvaluator::Z(double x) const {
  if (x <= 0.0) return 1.0;
  check_range(x);
  const double ep = (std::exp(phi_ * x) - 1.0) / phi_;
  double acc = 0.0;
  for (int i = 0; i < 2; ++i)
    acc += c_[i] * (ep + (std::exp(-xi_[i] * x) - 1.0) / xi_[i]);
  return 1.0 + q_ * acc;
}

double ScaleEvaluator::W_prime(double x) const {
  if (!(x > 0.0)) throw std::domain_error("W_prime: x must be > 0");
  check_range(x);
  const double ep = phi_ * std::exp(phi_ * x);
  return c_[0] * (ep + xi_[0] * std::exp(-xi_[0] * x)) +
         c_[1] * (ep + xi_[1] * std::exp(-xi_[1] * x));
}

double ScaleEvaluator::theta(double x) const {
  if (!(x > 0.0)) throw std::domain_error("theta: x must be > 0");
  return c_[0] * (phi_ + xi_[0]) * std::exp(-xi_[0] * x) +
         c_[1] * (phi_ + xi_[1]) * std::exp(-xi_[1] * x);
}

double ScaleEvaluator::int_exp_W(double y) const {
  if (y <= 0.0) return 0.0;
  check_range(y);
  // int_0^y e^{-z} sum_i C_i (e^{Phi z} - e^{-xi_i z}) dz; Phi > 1 here.
  const double ep = (std::exp((phi_ - 1.0) * y) - 1.0) / (phi_ - 1.0);
  double acc = 0.0;
  for (int i = 0; i < 2; ++i)
    acc += c_[i] * (ep + (std::exp(-(xi_[i] + 1.0) * y) - 1.0) / (xi_[i] + 1.0));
  return acc;
}

double ScaleEvaluator::gamma_fn(double y) const {
  if (y < 0.0) throw std::domain_error("gamma_fn: y must be >= 0");
  if (std::abs(1.0 - phi_) < 1e-10)
    throw std::domain_error("gamma_fn: Phi(q) == 1 singularity");
  const double k1q = kappa1_ - q_;
  return k1q / (1.0 - phi_) * W(y) + k1q * std::exp(y) * int_exp_W(y);
}

}  // namespace levcap
