#include "levcap/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace levcap {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& section,
                      const std::string& key) {
  if (!j.contains(key))
    throw ConfigError(section + "." + key + ": missing required field");
  if (!j.at(key).is_number())
    throw ConfigError(section + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

}  // namespace

LevyParams RunConfig::levy() const {
  if (mu) {
    LevyParams lp{*mu, sigma, lambda, beta};
    lp.validate();
    const double resid =
        laplace_exponent(lp, 1.0) - (market.r - market.delta);
    if (std::abs(resid) > 1e-10)
      throw ConfigError(
          "levy.mu: explicit drift violates the martingale condition "
          "kappa(1) = r - delta (residual " +
          std::to_string(resid) + ")");
    return lp;
  }
  return calibrate_drift(market, sigma, lambda, beta);
}

ModelSpec RunConfig::model_spec() const {
  return ModelSpec{levy(), market, debt.m, costs};
}

ModelInstance RunConfig::instance() const {
  return ModelInstance::make(levy(), market, debt, costs);
}

double RunConfig::x() const {
  if (!(V0 > 0.0)) throw ConfigError("V0: must be > 0");
  return std::log(V0);
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  try {
    if (!j.contains("market")) throw ConfigError("market: missing section");
    const json& mk = j.at("market");
    cfg.market.r = require_number(mk, "market", "r");
    cfg.market.delta = require_number(mk, "market", "delta");
    cfg.market.gamma_hat = require_number(mk, "market", "gamma_hat");
    cfg.market.rho_hat = require_number(mk, "market", "rho_hat");
    cfg.market.validate();

    if (!j.contains("levy")) throw ConfigError("levy: missing section");
    const json& lv = j.at("levy");
    cfg.sigma = require_number(lv, "levy", "sigma");
    cfg.lambda = require_number(lv, "levy", "lambda");
    cfg.beta = require_number(lv, "levy", "beta");
    if (lv.contains("mu")) cfg.mu = lv.at("mu").get<double>();

    if (!j.contains("debt")) throw ConfigError("debt: missing section");
    const json& db = j.at("debt");
    cfg.debt.P = require_number(db, "debt", "P");
    cfg.debt.m = require_number(db, "debt", "m");
    cfg.debt.validate();

    if (!j.contains("costs")) throw ConfigError("costs: missing section");
    const json& cs = j.at("costs");
    const std::string variant = cs.value("variant", "scaled");
    if (variant == "scaled") {
      cfg.costs.variant = CostTaxSpec::Variant::scaled;
      cfg.costs.eta0 = require_number(cs, "costs", "eta0");
      cfg.costs.a = require_number(cs, "costs", "a");
      cfg.costs.b = require_number(cs, "costs", "b");
    } else if (variant == "constant_eta") {
      cfg.costs.variant = CostTaxSpec::Variant::constant_eta;
      cfg.costs.eta_const = require_number(cs, "costs", "eta_const");
    } else {
      throw ConfigError("costs.variant: must be 'scaled' or 'constant_eta'");
    }
    cfg.costs.c_tax = require_number(cs, "costs", "c_tax");
    cfg.costs.validate();

    cfg.V0 = number_or(j, "V0", 100.0);
    if (!(cfg.V0 > 0.0)) throw ConfigError("V0: must be > 0");

    if (j.contains("mc")) {
      const json& mc = j.at("mc");
      cfg.mc.n_paths =
          static_cast<std::int64_t>(number_or(mc, "n_paths", 200000));
      cfg.mc.dt = number_or(mc, "dt", 1e-3);
      cfg.mc.horizon = number_or(mc, "horizon", 185.0);
      cfg.mc.seed = static_cast<std::uint64_t>(number_or(mc, "seed", 42));
      cfg.mc.bridge_correction = mc.value("bridge_correction", true);
    } else {
      cfg.mc.n_paths = 200000;
      cfg.mc.seed = 42;
    }

    // validate martingale condition and parameter invariants eagerly
    cfg.levy();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace levcap
