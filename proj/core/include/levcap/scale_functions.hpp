#pragma once

#include "levcap/levy_model.hpp"

namespace levcap {

// q-scale function machinery for the exponential-jump diffusion.  All
// evaluations are closed-form sums of exponentials,
//
//   W^{(q)}(x) = sum_i C_i [ e^{Phi(q) x} - e^{-xi_i x} ],  x >= 0,
//
// with C_i = -1/kappa'(-xi_i) the (negated) partial-fraction residues of
// 1/(kappa(s)-q) at the negative roots.  Immutable after construction.
class ScaleEvaluator {
 public:
  ScaleEvaluator(const LevyParams& params, double q);

  double q() const { return q_; }
  double phi() const { return phi_; }
  double xi(int i) const { return xi_[i]; }        // i in {0,1}
  double coeff(int i) const { return c_[i]; }      // C_{i+1,q} > 0
  double kappa_prime_phi() const { return kp_phi_; }
  const LevyParams& params() const { return params_; }

  // W^{(q)}(x): 0 for x < 0, increasing exponential sum for x >= 0.
  double W(double x) const;

  // Z^{(q)}(x) = 1 + q * int_0^x W^{(q)}
  double Z(double x) const;

  // Analytic derivative of W; requires x > 0.
  double W_prime(double x) const;

  // Theta^{(q)}(x) = W^{(q)'}(x) - Phi(q) W^{(q)}(x)
  //                = sum_i C_i (Phi(q)+xi_i) e^{-xi_i x},  always positive.
  double theta(double x) const;

  // Gamma^{(q)}(y) of the down-crossing identity
  //   E_y[e^{-q tau_0^- + X(tau_0^-)}] = e^y - Gamma^{(q)}(y).
  double gamma_fn(double y) const;

  // int_0^y e^{-z} W^{(q)}(z) dz, closed form.
  double int_exp_W(double y) const;

 private:
  void check_range(double x) const;

  LevyParams params_;
  double q_;
  double phi_;
  double xi_[2];
  double c_[2];
  double kp_phi_;
  double kappa1_;  // kappa(1)
  double x_cap_;   // overflow guard: evaluation limited to x <= 60/Phi(q)
};

}  // namespace levcap
