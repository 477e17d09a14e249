#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "oracles.hpp"

using namespace levcap;

namespace {

ScaleEvaluator make_ev(double q, double lambda = 0.5) {
  const LevyParams lp = calibrate_drift(oracles::market(), 0.2, lambda, 9.0);
  return ScaleEvaluator(lp, q);
}

}  // namespace

TEST_CASE("W vanishes on the negative half line and at zero") {
  const auto ev = make_ev(0.075);
  CHECK(ev.W(-1.0) == 0.0);
  CHECK(ev.W(-1e-12) == 0.0);
  CHECK(ev.W(0.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("Laplace transform of W equals 1/(kappa(s)-q)") {
  for (double q : {0.075, 0.275}) {
    const auto ev = make_ev(q);
    const LevyParams& lp = ev.params();
    for (double s : {ev.phi() + 1.5, ev.phi() + 2.5, ev.phi() + 4.0}) {
      const double numeric = oracles::quad_laplace_W(ev, s);
      const double exact = 1.0 / (laplace_exponent(lp, s) - q);
      CHECK(oracles::rel_err(numeric, exact) < 1e-6);
    }
  }
}

TEST_CASE("W is increasing and W' matches finite differences") {
  const auto ev = make_ev(0.275);
  const double h = 1e-7;
  double prev = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.5, 5.0}) {
    CHECK(ev.W(x) > prev);
    prev = ev.W(x);
    const double fd = (ev.W(x + h) - ev.W(x - h)) / (2 * h);
    CHECK(ev.W_prime(x) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("W'(0+) equals 2/sigma^2 for the diffusion-present case") {
  for (double q : {0.075, 0.275, 1.0}) {
    const auto ev = make_ev(q);
    CHECK(ev.W_prime(1e-9) ==
          doctest::Approx(2.0 / (0.2 * 0.2)).epsilon(1e-6));
  }
}

TEST_CASE("Z is one below zero and satisfies dZ/dx = q W") {
  const auto ev = make_ev(0.075);
  CHECK(ev.Z(-3.0) == 1.0);
  CHECK(ev.Z(0.0) == 1.0);
  const double h = 1e-6;
  for (double x : {0.2, 1.0, 3.0, 6.0}) {
    const double fd = (ev.Z(x + h) - ev.Z(x - h)) / (2 * h);
    CHECK(oracles::rel_err(fd, ev.q() * ev.W(x)) < 1e-6);
  }
}

TEST_CASE("theta equals W' - Phi W and decays") {
  const auto ev = make_ev(0.275);
  // the direct difference cancels like e^{-(Phi+xi1)x}, so compare only where
  // it still has digits; theta itself uses the decaying exponentials
  for (double x : {0.1, 0.7, 2.0, 3.0}) {
    const double direct = ev.W_prime(x) - ev.phi() * ev.W(x);
    CHECK(oracles::rel_err(ev.theta(x), direct) < 1e-7);
  }
  CHECK(ev.theta(1.0) > ev.theta(2.0));
  CHECK(ev.theta(20.0) > 0.0);
}

TEST_CASE("int_exp_W matches quadrature") {
  const auto ev = make_ev(0.075);
  using GK = oracles::GK;
  for (double y : {0.3, 1.0, 4.0}) {
    auto f = [&](double z) { return std::exp(-z) * ev.W(z); };
    const double numeric = GK::integrate(f, 0.0, y, 12, 1e-12);
    CHECK(oracles::rel_err(ev.int_exp_W(y), numeric) < 1e-9);
  }
  CHECK(ev.int_exp_W(0.0) == 0.0);
}

TEST_CASE("gamma_fn reproduces the down-crossing expectation form") {
  const auto ev = make_ev(0.275);
  const double k1q = laplace_exponent(ev.params(), 1.0) - ev.q();
  for (double y : {0.2, 1.5, 3.0}) {
    const double want = k1q / (1.0 - ev.phi()) * ev.W(y) +
                        k1q * std::exp(y) * ev.int_exp_W(y);
    CHECK(oracles::rel_err(ev.gamma_fn(y), want) < 1e-12);
  }
  // e^y - Gamma(y) is a discounted expectation of e^{X} at passage below 0,
  // so it must lie in (0, 1] for y > 0 (overshoot goes below zero)
  for (double y : {0.1, 1.0, 2.0, 4.0}) {
    const double v = std::exp(y) - ev.gamma_fn(y);
    CHECK(v > 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("pure-diffusion limit drops the second root") {
  const auto ev = make_ev(0.075, 0.0);
  CHECK(ev.coeff(1) == 0.0);
  // quadratic kappa: Phi and -xi1 are the two roots
  const LevyParams& lp = ev.params();
  CHECK(laplace_exponent(lp, ev.phi()) == doctest::Approx(0.075).epsilon(1e-10));
  CHECK(laplace_exponent(lp, -ev.xi(0)) ==
        doctest::Approx(0.075).epsilon(1e-10));
  CHECK(ev.W_prime(1e-9) == doctest::Approx(2.0 / 0.04).epsilon(1e-6));
}

TEST_CASE("evaluation beyond the overflow cap is rejected") {
  const auto ev = make_ev(0.075);
  CHECK_THROWS_AS(ev.W(61.0 / ev.phi()), std::domain_error);
  CHECK_THROWS_AS(ev.Z(61.0 / ev.phi()), std::domain_error);
  CHECK_THROWS_AS(ScaleEvaluator(LevyParams{0.035, 0.2, 0.5, 9.0}, 0.0),
                  std::domain_error);
}
