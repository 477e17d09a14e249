#pragma once

#include "levcap/levy_model.hpp"
#include "levcap/scale_functions.hpp"

namespace levcap {

// Bankruptcy-cost / tax-benefit specification.
//
// scaled variant (the asset-value-dependent family):
//   eta_bar(x) = eta0 * (1 ^ e^{-a(x-b)})          loss fraction, decreasing
//   eta(x)     = eta0 * (e^x ^ e^{(1-a)x + ab})    loss amount, increasing
//   f2(x)      = P gamma rho * (e^{x-c} ^ 1)       tax rebate rate
// constant_eta variant: eta(x) = eta_const, eta_bar(x) = eta_const e^{-x};
// f2 keeps the same parametric form.
struct CostTaxSpec {
  enum class Variant { scaled, constant_eta };

  Variant variant = Variant::scaled;
  double eta0 = 0.0;       // loss scale, in [0,1]
  double a = 0.0;          // degree of bankruptcy cost concavity, in [0,1]
  double b = 0.0;          // concavity kink location (log-asset)
  double c_tax = 0.0;      // degree of tax convexity (log-asset)
  double eta_const = 0.0;  // constant loss amount (constant_eta only)

  void validate() const;

  double eta_bar(double x) const;
  double eta(double x) const;
  // Right derivative is used at the kink x = b.
  double eta_prime(double x) const;
};

struct DebtSpec {
  double P = 0.0;  // total face value, >= 0
  double m = 0.0;  // maturity profile rate, > 0

  double p() const { return m * P; }  // issuance rate
  void validate() const;
};

// Immutable model instance: parameters plus the two cached scale evaluators
// at q = r and q = r + m.
struct ModelInstance {
  LevyParams levy;
  MarketParams market;
  DebtSpec debt;
  CostTaxSpec costs;
  ScaleEvaluator ev_r;
  ScaleEvaluator ev_rm;
  double kappa1;  // kappa(1) = r - delta after calibration

  static ModelInstance make(const LevyParams& levy, const MarketParams& market,
                            const DebtSpec& debt, const CostTaxSpec& costs);
};

// f_1 = P rho + p = P (rho + m), constant coupon flow.
double f1(const DebtSpec& debt, const MarketParams& market);
double f2(const CostTaxSpec& costs, const DebtSpec& debt,
          const MarketParams& market, double x);

// G_i^{(q)}(B) = int_0^inf e^{-Phi(q) y} f_i(y+B) dy.  G1 is evaluated at
// q = r+m (B-independent); G2 at q = r.
double G1(const ModelInstance& inst);
double G2(const ModelInstance& inst, double B);
double G2_at(const ModelInstance& inst, const ScaleEvaluator& ev, double B);

// Q(B; zeta, l) = int_0^inf Pi(du) int_0^{u^l} e^{-(zeta-1)z - u}
//                 eta_bar(B-u+z) dz.  l may be +infinity (then requires
//                 zeta + beta > 0).
double Q_kernel(const ModelInstance& inst, double B, double zeta, double l);

// H^{(q)}(B) = int Pi(du) int_0^u e^{-Phi(q) z}[eta(B) - eta(B-u+z)] dz
//            = lambda eta(B)/(Phi(q)+beta) - e^B Q(B; Phi(q), inf)
double H_kernel(const ModelInstance& inst, const ScaleEvaluator& ev, double B);

// J^{(r,m)}(B), primary definition via H kernels.
double J_kernel(const ModelInstance& inst, double B);
// Equivalent representation via sigma^2 and the Pi double integral.
double J_kernel_alt(const ModelInstance& inst, double B);

// j^{(r,m)} constant, evaluated from its sigma^2/Pi representation.  Equals
// (kappa(1)-(r+m))/(1-Phi(r+m)) - (kappa(1)-r)/(1-Phi(r)).
double small_j(const ModelInstance& inst);

// l(B) >= 0 helper from the monotonicity analysis of K1.
double l_fn(const ModelInstance& inst, double B);

double K1(const ModelInstance& inst, double B);
double K2(const ModelInstance& inst, double B);

// Lambda^{(q)}(x;B) = E_x[e^{-q tau} eta(X_tau)]; requires x > B.
double lambda_fn(const ModelInstance& inst, const ScaleEvaluator& ev, double x,
                 double B);
// M_i^{(q)}(x;B) = E_x[int_0^tau e^{-qt} f_i(X_t) dt]; i in {1,2}, x > B.
double M_fn(const ModelInstance& inst, const ScaleEvaluator& ev, int i,
            double x, double B);

// int_B^x W^{(q)}(x-y) f_i(y) dy, closed form (exposed for verification).
double int_W_f(const ModelInstance& inst, const ScaleEvaluator& ev, int i,
               double x, double B);
// int Pi(du) int_0^{u^(x-B)} W^{(q)}(x-z-B) dz
double pi_conv_W(const ModelInstance& inst, const ScaleEvaluator& ev, double x,
                 double B);
// int Pi(du) int_0^{u^(x-B)} W^{(q)}(x-z-B) eta(z+B-u) dz
double pi_conv_W_eta(const ModelInstance& inst, const ScaleEvaluator& ev,
                     double x, double B);

// Equity/debt/firm values; require x > B.
double equity(const ModelInstance& inst, double x, double B);
double debt(const ModelInstance& inst, double x, double B);
double firm(const ModelInstance& inst, double x, double B);

// dE/dB = -[Theta_rm(x-B) K1(B) + (Theta_r(x-B) - Theta_rm(x-B)) K2(B)]
double equity_dB(const ModelInstance& inst, double x, double B);

}  // namespace levcap
