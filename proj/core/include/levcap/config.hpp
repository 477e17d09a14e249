#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "levcap/mc_oracle.hpp"
#include "levcap/solver.hpp"

namespace levcap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed run configuration.  All rates are decimals (0.075, not 7.5);
// asset values are given on the linear scale as V0 and converted to
// x = log(V0) internally.
struct RunConfig {
  MarketParams market{};
  double sigma = 0.0;
  double lambda = 0.0;
  double beta = 0.0;
  std::optional<double> mu;  // explicit drift override; must satisfy kappa(1)=r-delta
  DebtSpec debt{};
  CostTaxSpec costs{};
  double V0 = 100.0;
  McConfig mc{};

  LevyParams levy() const;
  ModelSpec model_spec() const;
  ModelInstance instance() const;
  double x() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

}  // namespace levcap
