#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "eocp/core_model.hpp"
#include "eocp/policies.hpp"

namespace eocp {

// Invalid configuration; field() names the offending key ("horizon",
// "policy.eocp.delta_lb", "bounds.c", ...).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Declarative experiment description. Run-only fields may be absent
// (zero) when the file only drives the bounds table.
struct ExperimentConfig {
  RewardFamily family = RewardFamily::GaussianUnitVariance;
  std::vector<double> means;
  std::uint64_t horizon = 0;
  std::uint64_t iterations = 0;
  std::uint64_t master_seed = 1;
  std::size_t checkpoint_count = 100;
  bool paired_streams = true;
  std::vector<PolicySpec> policies;

  // [bounds] table
  std::vector<double> bound_horizons;
  double violation_exponent = 0.5;

  BanditInstance instance() const;
  // Throw ConfigError naming the first offending field.
  void validate_run() const;
  void validate_bounds() const;
};

// Text format:
//
//   # comment
//   family = gaussian            # or bernoulli
//   means = 0.7, 0.2
//   horizon = 1e6
//   iterations = 100000
//   seed = 1
//   checkpoints = 100
//   paired_streams = true
//
//   [policy eocp]                # table name becomes the output label
//   algorithm = eocp
//   delta_lb = 0.5
//   l = ln                       # optional: 'ln' or a positive number
//
//   [bounds]
//   horizons = 1e4, 1e5, 1e6
//   c = 0.5
ExperimentConfig parse_config(std::string_view text);

nlohmann::ordered_json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Reads a text config, or a meta.json written by `run` (its "config" object).
// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace eocp
