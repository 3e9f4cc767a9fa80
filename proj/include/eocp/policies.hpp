#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eocp/confidence.hpp"
#include "eocp/core_model.hpp"
#include "eocp/rng.hpp"

namespace eocp {

enum class Algorithm { Eocp, EocpUg, KlEocp, Ucb, KlUcb, Ts, UniformEtc };

// Tags: eocp, eocp-ug, kl-eocp, ucb, kl-ucb, ts, uniform-etc.
std::string_view to_string(Algorithm algorithm) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view tag) noexcept;
// True for the explore-then-commit algorithms.
bool is_committing(Algorithm algorithm) noexcept;

// Replacement for the default exploration rate ln T + 4 sqrt(2 ln T).
struct RateOverride {
  enum class Kind { Constant, LogHorizon };
  Kind kind = Kind::Constant;
  double value = 0.0;  // used by Constant

  double evaluate(double horizon) const;
  std::string describe() const;
  // "ln" or "log" selects ln T; anything else must parse as a positive number.
  static RateOverride parse(std::string_view text);
};

// Invalid PolicySpec parameter; parameter() is the config key ("delta_lb").
class PolicyParameterError : public std::invalid_argument {
 public:
  PolicyParameterError(std::string parameter, const std::string& message)
      : std::invalid_argument(message), parameter_(std::move(parameter)) {}
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

struct PolicySpec {
  Algorithm algorithm = Algorithm::Eocp;
  std::string label;                      // output name; defaults to the tag
  std::optional<double> delta_lb;         // eocp
  std::optional<double> kl_lb;            // kl-eocp
  double alpha = 1.0;                     // ucb inflation
  std::optional<std::uint64_t> explore_budget;  // uniform-etc
  std::optional<RateOverride> rate;

  std::string name() const;
  // Throws std::invalid_argument naming the offending parameter.
  void validate() const;
  // Exploration rate l used for horizon T (override or the default).
  double exploration_rate_for(std::uint64_t horizon) const;
};

// ceil(8 A l / delta_lb^2) + A.
std::uint64_t eocp_stop_time(std::size_t arms, double l, double delta_lb);
// ceil(4 A l / kl_lb) + A.
std::uint64_t kl_eocp_stop_time(std::size_t arms, double l, double kl_lb);

// Arm a with N(a) > l * max_{a' != a} N(a') + 1, if any. For l >= 1 at most
// one arm qualifies; for smaller l the lowest qualifying index is returned.
std::optional<std::size_t> ug_stop_check(std::span<const std::uint64_t> counts, double l);

enum class ConfidenceShape { Hoeffding, KullbackLeibler };

// Arm with the largest lower confidence bound; lowest index on ties.
std::size_t pessimistic_arm(RewardFamily family, std::span<const ArmStat> stats, double l,
                            ConfidenceShape shape);

struct Commitment {
  std::size_t arm = 0;
  std::uint64_t round = 0;  // T_c: last exploration round
};

// One algorithm driven as a state machine: select_action() then observe()
// for every round t = 1, 2, ..., T.
class Policy {
 public:
  Policy(PolicySpec spec, RewardFamily family, std::size_t arms, std::uint64_t horizon);

  std::size_t select_action(RngStream& rng);
  // Must follow select_action() for the same arm; runs the commitment checks.
  void observe(std::size_t arm, double reward);
  // Pessimistic commitment at the current round. Throws std::logic_error if
  // a commitment already exists.
  void commit();

  const PolicySpec& spec() const noexcept { return spec_; }
  std::size_t arms() const noexcept { return stats_.size(); }
  std::uint64_t horizon() const noexcept { return horizon_; }
  // Round about to be played (1-based).
  std::uint64_t round() const noexcept { return round_; }
  std::span<const ArmStat> stats() const noexcept { return stats_; }
  std::span<const std::uint64_t> pull_counts() const noexcept { return counts_; }
  double exploration_rate() const noexcept { return l_; }
  // Fixed exploration length for eocp, kl-eocp and uniform-etc.
  std::optional<std::uint64_t> planned_stop() const noexcept { return planned_stop_; }
  const std::optional<Commitment>& commitment() const noexcept { return commitment_; }

 private:
  std::size_t argmax_index(double round_rate);
  std::size_t kl_argmax_bernoulli(double round_rate);
  std::size_t thompson_draw(RngStream& rng);

  PolicySpec spec_;
  RewardFamily family_;
  std::uint64_t horizon_;
  double l_;
  std::optional<std::uint64_t> planned_stop_;
  std::vector<ArmStat> stats_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t round_ = 1;
  std::optional<std::size_t> pending_;
  std::optional<Commitment> commitment_;
};

}  // namespace eocp
