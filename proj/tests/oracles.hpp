// Quadrature oracles for the closed-form kernels: every semi-explicit
// expression is re-evaluated from its defining integral with adaptive
// Gauss-Kronrod quadrature.  Infinite integrals are truncated where the
// exponential tail falls below ~1e-15 of the integrand scale.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levcap/valuation.hpp"

namespace oracles {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr double kTol = 1e-12;

inline levcap::MarketParams market() { return {0.075, 0.07, 0.35, 0.08162}; }

inline levcap::CostTaxSpec case1_costs() {
  return {levcap::CostTaxSpec::Variant::scaled, 0.9, 0.5, 0.0, 5.0, 0.0};
}

inline levcap::CostTaxSpec case2_costs() {
  return {levcap::CostTaxSpec::Variant::scaled, 0.5, 0.01, 5.0, 0.0, 0.0};
}

inline levcap::ModelInstance make_case(const levcap::CostTaxSpec& costs,
                                       double P = 50.0) {
  const auto mkt = market();
  const auto lp = levcap::calibrate_drift(mkt, 0.2, 0.5, 9.0);
  return levcap::ModelInstance::make(lp, mkt, levcap::DebtSpec{P, 0.2}, costs);
}

inline levcap::ModelInstance case1(double P = 50.0) {
  return make_case(case1_costs(), P);
}
inline levcap::ModelInstance case2(double P = 50.0) {
  return make_case(case2_costs(), P);
}

// int_0^inf e^{-Phi(q) y} f_i(y + B) dy
inline double quad_G(const levcap::ModelInstance& inst,
                     const levcap::ScaleEvaluator& ev, int i, double B) {
  const double phi = ev.phi();
  auto f = [&](double y) {
    const double fv = i == 1 ? levcap::f1(inst.debt, inst.market)
                             : levcap::f2(inst.costs, inst.debt, inst.market,
                                          y + B);
    return std::exp(-phi * y) * fv;
  };
  return GK::integrate(f, 0.0, 45.0 / phi, 12, kTol);
}

// Q(B; zeta, l) = int Pi(du) int_0^{u^l} e^{-(zeta-1)z - u} eta_bar(B-u+z) dz
inline double quad_Q(const levcap::ModelInstance& inst, double B, double zeta,
                     double l) {
  const double lam = inst.levy.lambda;
  const double beta = inst.levy.beta;
  const bool inf_l = std::isinf(l);
  // tail of the outer integrand: e^{-(beta+zeta)u} when l = inf (requires
  // zeta + beta > 0 there), else e^{-(beta+1)u} beyond u = l
  const double u_max = inf_l ? 50.0 / std::min(beta + 1.0, beta + zeta)
                             : l + 50.0 / (beta + 1.0);
  auto outer = [&](double u) {
    const double zu = inf_l ? u : std::min(u, l);
    if (zu <= 0.0) return 0.0;
    auto inner = [&](double z) {
      return std::exp(-(zeta - 1.0) * z - u) * inst.costs.eta_bar(B - u + z);
    };
    return lam * beta * std::exp(-beta * u) *
           GK::integrate(inner, 0.0, zu, 12, kTol);
  };
  return GK::integrate(outer, 0.0, u_max, 12, kTol);
}

// H^{(q)}(B) = int Pi(du) int_0^u e^{-Phi(q) z}[eta(B) - eta(B-u+z)] dz
inline double quad_H(const levcap::ModelInstance& inst,
                     const levcap::ScaleEvaluator& ev, double B) {
  const double lam = inst.levy.lambda;
  const double beta = inst.levy.beta;
  const double phi = ev.phi();
  auto outer = [&](double u) {
    auto inner = [&](double z) {
      return std::exp(-phi * z) *
             (inst.costs.eta(B) - inst.costs.eta(B - u + z));
    };
    return lam * beta * std::exp(-beta * u) *
           GK::integrate(inner, 0.0, u, 12, kTol);
  };
  return GK::integrate(outer, 0.0, 50.0 / beta, 12, kTol);
}

// int_B^x W^{(q)}(x - y) f_i(y) dy
inline double quad_int_W_f(const levcap::ModelInstance& inst,
                           const levcap::ScaleEvaluator& ev, int i, double x,
                           double B) {
  auto f = [&](double y) {
    const double fv = i == 1 ? levcap::f1(inst.debt, inst.market)
                             : levcap::f2(inst.costs, inst.debt, inst.market, y);
    return ev.W(x - y) * fv;
  };
  return GK::integrate(f, B, x, 12, kTol);
}

// int Pi(du) int_0^{u^(x-B)} W^{(q)}(x - z - B) dz
inline double quad_pi_conv_W(const levcap::ModelInstance& inst,
                             const levcap::ScaleEvaluator& ev, double x,
                             double B) {
  const double lam = inst.levy.lambda;
  const double beta = inst.levy.beta;
  const double y = x - B;
  auto outer = [&](double u) {
    const double zu = std::min(u, y);
    if (zu <= 0.0) return 0.0;
    auto inner = [&](double z) { return ev.W(x - z - B); };
    return lam * beta * std::exp(-beta * u) *
           GK::integrate(inner, 0.0, zu, 12, kTol);
  };
  return GK::integrate(outer, 0.0, y + 50.0 / beta, 12, kTol);
}

// int Pi(du) int_0^{u^(x-B)} W^{(q)}(x - z - B) eta(z + B - u) dz
inline double quad_pi_conv_W_eta(const levcap::ModelInstance& inst,
                                 const levcap::ScaleEvaluator& ev, double x,
                                 double B) {
  const double lam = inst.levy.lambda;
  const double beta = inst.levy.beta;
  const double y = x - B;
  auto outer = [&](double u) {
    const double zu = std::min(u, y);
    if (zu <= 0.0) return 0.0;
    auto inner = [&](double z) {
      return ev.W(x - z - B) * inst.costs.eta(z + B - u);
    };
    return lam * beta * std::exp(-beta * u) *
           GK::integrate(inner, 0.0, zu, 12, kTol);
  };
  return GK::integrate(outer, 0.0, y + 50.0 / beta, 12, kTol);
}

// int_0^inf e^{-s x} W^{(q)}(x) dx; valid for s comfortably above Phi(q).
inline double quad_laplace_W(const levcap::ScaleEvaluator& ev, double s) {
  const double upper = std::min(34.0 / (s - ev.phi()), 59.0 / ev.phi());
  auto f = [&](double x) { return std::exp(-s * x) * ev.W(x); };
  return GK::integrate(f, 0.0, upper, 12, kTol);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-12, std::abs(want));
}

}  // namespace oracles
