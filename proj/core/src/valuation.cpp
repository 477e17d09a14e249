#include "levcap/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace levcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (1 - e^{-c l}) / c, continuous in c (returns l at c = 0); for l = inf
// requires c > 0.
double em1_ratio(double c, double l) {
  if (std::isinf(l)) {
    if (!(c > 0.0))
      throw std::domain_error("Q_kernel: l=inf requires zeta + beta > 0");
    return 1.0 / c;
  }
  if (c == 0.0) return l;
  return -std::expm1(-c * l) / c;
}

// (e^{a1 y} - e^{a2 y}) / (a1 - a2), with the removable limit at a1 = a2.
double exp_diff_ratio(double a1, double a2, double y) {
  const double d = a1 - a2;
  if (std::abs(d) * std::max(1.0, std::abs(y)) < 1e-9) {
    return y * std::exp(0.5 * (a1 + a2) * y);
  }
  return (std::exp(a1 * y) - std::exp(a2 * y)) / d;
}

void require_x_above_B(double x, double B, const char* who) {
  if (!(x > B)) throw std::domain_error(std::string(who) + ": requires x > B");
}

}  // namespace

void CostTaxSpec::validate() const {
  if (variant == Variant::scaled) {
    if (!(eta0 >= 0.0 && eta0 <= 1.0))
      throw std::invalid_argument("CostTaxSpec: eta0 must be in [0,1]");
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("CostTaxSpec: a must be in [0,1]");
  } else {
    if (!(eta_const > 0.0))
      throw std::invalid_argument("CostTaxSpec: eta_const must be > 0");
  }
}

double CostTaxSpec::eta_bar(double x) const {
  if (variant == Variant::constant_eta) return eta_const * std::exp(-x);
  return eta0 * std::min(1.0, std::exp(-a * (x - b)));
}

double CostTaxSpec::eta(double x) const {
  if (variant == Variant::constant_eta) return eta_const;
  return eta0 * std::exp(std::min(x, (1.0 - a) * x + a * b));
}

double CostTaxSpec::eta_prime(double x) const {
  if (variant == Variant::constant_eta) return 0.0;
  if (x < b) return eta0 * std::exp(x);
  return eta0 * (1.0 - a) * std::exp((1.0 - a) * x + a * b);
}

void DebtSpec::validate() const {
  if (!(P >= 0.0)) throw std::invalid_argument("DebtSpec: P must be >= 0");
  if (!(m > 0.0)) throw std::invalid_argument("DebtSpec: m must be > 0");
}

ModelInstance ModelInstance::make(const LevyParams& levy,
                                  const MarketParams& market,
                                  const DebtSpec& debt,
                                  const CostTaxSpec& costs) {
  levy.validate();
  market.validate();
  debt.validate();
  costs.validate();
  return ModelInstance{levy,
                       market,
                       debt,
                       costs,
                       ScaleEvaluator(levy, market.r),
                       ScaleEvaluator(levy, market.r + debt.m),
                       laplace_exponent(levy, 1.0)};
}

double f1(const DebtSpec& debt, const MarketParams& market) {
  return debt.P * market.rho_hat + debt.p();
}

double f2(const CostTaxSpec& costs, const DebtSpec& debt,
          const MarketParams& market, double x) {
  const double cap = debt.P * market.gamma_hat * market.rho_hat;
  return cap * std::min(std::exp(x - costs.c_tax), 1.0);
}

double G1(const ModelInstance& inst) {
  return f1(inst.debt, inst.market) / inst.ev_rm.phi();
}

double G2_at(const ModelInstance& inst, const ScaleEvaluator& ev, double B) {
  const double ph = ev.phi();
  if (std::abs(ph - 1.0) < 1e-10)
    throw std::domain_error("G2: Phi(q) == 1 singularity");
  const double cap = inst.debt.P * inst.market.gamma_hat * inst.market.rho_hat;
  const double d = std::max(inst.costs.c_tax - B, 0.0);  // (c - B) v 0
  return cap * (std::exp(B - inst.costs.c_tax) * em1_ratio(ph - 1.0, d) +
                std::exp(-ph * d) / ph);
}

double G2(const ModelInstance& inst, double B) {
  return G2_at(inst, inst.ev_r, B);
}

double Q_kernel(const ModelInstance& inst, double B, double zeta, double l) {
  if (!(l >= 0.0)) throw std::domain_error("Q_kernel: l must be >= 0");
  if (l == 0.0) return 0.0;
  const double lam = inst.levy.lambda;
  const double beta = inst.levy.beta;
  if (lam == 0.0) return 0.0;

  // With t = u - z the double integral factorizes:
  //   Q = lam*beta * int_0^l e^{-(zeta+beta) z} dz
  //               * int_0^inf e^{-(1+beta) t} eta_bar(B - t) dt  ... (scaled)
  const double A = em1_ratio(zeta + beta, l);

  if (inst.costs.variant == CostTaxSpec::Variant::scaled) {
    const double a = inst.costs.a;
    const double bt = std::max(B - inst.costs.b, 0.0);  // (B - b) v 0
    const double g =
        (std::exp(-a * bt) - std::exp(-(1.0 + beta) * bt)) / (1.0 + beta - a) +
        std::exp(-(1.0 + beta) * bt) / (1.0 + beta);
    return inst.costs.eta0 * lam * beta * A * g;
  }

  // constant_eta: eta_bar(y) = eta_const e^{-y}; the u-integral no longer
  // factorizes through (B - b) v 0 but is still elementary.
  const double ec = inst.costs.eta_const * std::exp(-B);
  if (std::isinf(l)) {
    if (!(zeta + beta > 0.0))
      throw std::domain_error("Q_kernel: l=inf requires zeta + beta > 0");
    return ec * lam / (beta + zeta);
  }
  const double inner =
      (em1_ratio(beta, l) - em1_ratio(beta + zeta, l)) / zeta +
      std::exp(-beta * l) * em1_ratio(zeta, l) / beta;
  return ec * lam * beta * inner;
}

double H_kernel(const ModelInstance& inst, const ScaleEvaluator& ev, double B) {
  const double lam = inst.levy.lambda;
  if (lam == 0.0) return 0.0;
  const double ph = ev.phi();
  return lam * inst.costs.eta(B) / (ph + inst.levy.beta) -
         std::exp(B) * Q_kernel(inst, B, ph, kInf);
}

double J_kernel(const ModelInstance& inst, double B) {
  const double r = inst.market.r;
  const double rm = r + inst.debt.m;
  return (rm / inst.ev_rm.phi() - r / inst.ev_r.phi()) * inst.costs.eta(B) -
         (H_kernel(inst, inst.ev_r, B) - H_kernel(inst, inst.ev_rm, B));
}

double J_kernel_alt(const ModelInstance& inst, double B) {
  const double s2 = inst.levy.sigma * inst.levy.sigma;
  const double dphi = inst.ev_rm.phi() - inst.ev_r.phi();
  return 0.5 * s2 * dphi * inst.costs.eta(B) +
         std::exp(B) * (Q_kernel(inst, B, inst.ev_r.phi(), kInf) -
                        Q_kernel(inst, B, inst.ev_rm.phi(), kInf));
}

double small_j(const ModelInstance& inst) {
  const double s2 = inst.levy.sigma * inst.levy.sigma;
  const double phr = inst.ev_r.phi();
  const double phrm = inst.ev_rm.phi();
  const double beta = inst.levy.beta;
  // int Pi(du) e^{-u} (1-e^{-(Phi-1)u})/(Phi-1) = lam*beta/(Phi-1)
  //   * (1/(beta+1) - 1/(beta+Phi)) for the exponential Levy measure.
  auto piece = [&](double ph) {
    return inst.levy.lambda * beta / (ph - 1.0) *
           (1.0 / (beta + 1.0) - 1.0 / (beta + ph));
  };
  return 0.5 * s2 * (phrm - phr) + piece(phr) - piece(phrm);
}

double l_fn(const ModelInstance& inst, double B) {
  const double rm = inst.market.r + inst.debt.m;
  const double s2 = inst.levy.sigma * inst.levy.sigma;
  return (inst.kappa1 - rm) / (1.0 - inst.ev_rm.phi()) -
         0.5 * s2 * (inst.ev_rm.phi() - inst.ev_r.phi()) *
             inst.costs.eta_bar(B) -
         (Q_kernel(inst, B, inst.ev_r.phi(), kInf) -
          Q_kernel(inst, B, inst.ev_rm.phi(), kInf));
}

double K1(const ModelInstance& inst, double B) {
  const double rm = inst.market.r + inst.debt.m;
  return (inst.kappa1 - rm) / (1.0 - inst.ev_rm.phi()) * std::exp(B) -
         G1(inst) + G2(inst, B) - J_kernel(inst, B);
}

double K2(const ModelInstance& inst, double B) {
  const double r = inst.market.r;
  const double s2 = inst.levy.sigma * inst.levy.sigma;
  return G2(inst, B) + r / inst.ev_r.phi() * inst.costs.eta(B) +
         H_kernel(inst, inst.ev_r, B) + 0.5 * s2 * inst.costs.eta_prime(B);
}

double int_W_f(const ModelInstance& inst, const ScaleEvaluator& ev, int i,
               double x, double B) {
  require_x_above_B(x, B, "int_W_f");
  const double ph = ev.phi();
  const double y = x - B;
  if (i == 1) {
    const double flow = f1(inst.debt, inst.market);
    double acc = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double xi = ev.xi(k);
      acc += ev.coeff(k) * ((std::exp(ph * y) - 1.0) / ph -
                            (1.0 - std::exp(-xi * y)) / xi);
    }
    return flow * acc;
  }
  if (i != 2) throw std::invalid_argument("int_W_f: i must be 1 or 2");

  const double cap = inst.debt.P * inst.market.gamma_hat * inst.market.rho_hat;
  const double c = inst.costs.c_tax;
  const double ys = std::max(std::min(x, c), B);  // x ^ c v B
  double acc = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double xi = ev.xi(k);
    // region [B, ys]: f2 = cap * e^{y-c}; exponents combined to stay in range
    const double low =
        (std::exp(ph * (x - B) + B - c) - std::exp(ph * (x - ys) + ys - c)) /
            (ph - 1.0) -
        (std::exp(-xi * (x - ys) + ys - c) - std::exp(-xi * (x - B) + B - c)) /
            (xi + 1.0);
    // region [ys, x]: f2 = cap
    const double high = (std::exp(ph * (x - ys)) - 1.0) / ph -
                        (1.0 - std::exp(-xi * (x - ys))) / xi;
    acc += ev.coeff(k) * (low + high);
  }
  return cap * acc;
}

double pi_conv_W(const ModelInstance& inst, const ScaleEvaluator& ev, double x,
                 double B) {
  require_x_above_B(x, B, "pi_conv_W");
  const double lam = inst.levy.lambda;
  if (lam == 0.0) return 0.0;
  const double beta = inst.levy.beta;
  const double ph = ev.phi();
  const double y = x - B;
  double acc = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double xi = ev.xi(k);
    acc += ev.coeff(k) * (exp_diff_ratio(ph, -beta, y) -
                          exp_diff_ratio(-xi, -beta, y));
  }
  return lam * acc;
}

double pi_conv_W_eta(const ModelInstance& inst, const ScaleEvaluator& ev,
                     double x, double B) {
  require_x_above_B(x, B, "pi_conv_W_eta");
  if (inst.levy.lambda == 0.0) return 0.0;
  const double ph = ev.phi();
  const double y = x - B;
  double acc = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double xi = ev.xi(k);
    acc += ev.coeff(k) * (std::exp(ph * y + B) * Q_kernel(inst, B, ph, y) -
                          std::exp(-xi * y + B) * Q_kernel(inst, B, -xi, y));
  }
  return acc;
}

double lambda_fn(const ModelInstance& inst, const ScaleEvaluator& ev, double x,
                 double B) {
  require_x_above_B(x, B, "lambda_fn");
  const double y = x - B;
  const double etaB = inst.costs.eta(B);
  const double Wy = ev.W(y);
  return etaB * (ev.Z(y) - ev.q() / ev.phi() * Wy) -
         Wy * H_kernel(inst, ev, B) + etaB * pi_conv_W(inst, ev, x, B) -
         pi_conv_W_eta(inst, ev, x, B);
}

double M_fn(const ModelInstance& inst, const ScaleEvaluator& ev, int i,
            double x, double B) {
  require_x_above_B(x, B, "M_fn");
  const double Gi = (i == 1) ? f1(inst.debt, inst.market) / ev.phi()
                             : G2_at(inst, ev, B);
  return ev.W(x - B) * Gi - int_W_f(inst, ev, i, x, B);
}

double equity(const ModelInstance& inst, double x, double B) {
  require_x_above_B(x, B, "equity");
  const double y = x - B;
  return std::exp(B) * inst.ev_rm.gamma_fn(y) +
         (M_fn(inst, inst.ev_r, 2, x, B) -
          lambda_fn(inst, inst.ev_r, x, B)) -
         (M_fn(inst, inst.ev_rm, 1, x, B) -
          lambda_fn(inst, inst.ev_rm, x, B));
}

double debt(const ModelInstance& inst, double x, double B) {
  require_x_above_B(x, B, "debt");
  const double y = x - B;
  return std::exp(x) - std::exp(B) * inst.ev_rm.gamma_fn(y) +
         M_fn(inst, inst.ev_rm, 1, x, B) - lambda_fn(inst, inst.ev_rm, x, B);
}

double firm(const ModelInstance& inst, double x, double B) {
  require_x_above_B(x, B, "firm");
  return std::exp(x) + M_fn(inst, inst.ev_r, 2, x, B) -
         lambda_fn(inst, inst.ev_r, x, B);
}

double equity_dB(const ModelInstance& inst, double x, double B) {
  require_x_above_B(x, B, "equity_dB");
  const double y = x - B;
  const double th_r = inst.ev_r.theta(y);
  const double th_rm = inst.ev_rm.theta(y);
  return -(th_rm * K1(inst, B) + (th_r - th_rm) * K2(inst, B));
}

}  // namespace levcap
