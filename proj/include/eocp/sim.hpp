#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eocp/core_model.hpp"
#include "eocp/policies.hpp"
#include "eocp/rng.hpp"

namespace eocp {

// Tag of the child stream that feeds a policy's own randomness (Thompson
// draws). Arm a's rewards come from child(a).
inline constexpr std::uint64_t kPolicyNoiseTag = 0xA5A5'0000'0000'0001ull;

struct TrajectoryRecord {
  std::string policy;
  Algorithm algorithm = Algorithm::Eocp;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> regret;              // pseudo-regret sum_{s<=t} D_{A_s}
  std::uint64_t commit_round = 0;          // T_c, or the horizon without commitment
  std::optional<std::size_t> committed_arm;
  bool miscommit = false;
};

// Drives `spec` for `horizon` rounds. The k-th reward of arm a (k from 0) is a
// pure function of stream.child(a) at position k, so every policy run on the
// same stream sees the same reward for the same (arm, pull index). After
// commitment the remaining rounds are accounted without sampling.
// If `actions` is non-null it receives all `horizon` actions.
TrajectoryRecord run_trajectory(const PolicySpec& spec, const BanditInstance& instance,
                                std::uint64_t horizon,
                                std::span<const std::uint64_t> checkpoints,
                                const RngStream& stream,
                                std::vector<std::size_t>* actions = nullptr);

// `count` logarithmically spaced rounds from A to T, rounded and deduplicated;
// always contains A and T.
std::vector<std::uint64_t> default_checkpoints(std::size_t arms, std::uint64_t horizon,
                                               std::size_t count = 100);

struct CheckpointSummary {
  std::uint64_t round = 0;
  double mean_regret = 0.0;
  double std_error = 0.0;  // sample stddev / sqrt(iterations)
  std::uint64_t iterations = 0;
};

struct CommitSummary {
  double mean_tc = 0.0;
  double median_tc = 0.0;
  double p95_tc = 0.0;  // nearest-rank
  double miscommit_rate = 0.0;
  double miscommit_std_error = 0.0;
};

struct PolicyAggregate {
  std::string policy;
  Algorithm algorithm = Algorithm::Eocp;
  std::uint64_t iterations = 0;
  std::vector<CheckpointSummary> checkpoints;
  std::optional<CommitSummary> commit;  // committing algorithms only
};

struct AggregateStats {
  std::vector<PolicyAggregate> policies;

  // Throws std::out_of_range for an unknown policy name.
  const PolicyAggregate& at(std::string_view policy) const;
};

// Groups records by policy name in first-appearance order. All records must
// share the same checkpoints.
AggregateStats aggregate(std::span<const TrajectoryRecord> records);

struct BatchOptions {
  unsigned threads = 1;  // 0 selects hardware concurrency
  bool paired_streams = true;
};

// Stream used by policy `policy_index` in `iteration`. Paired streams share
// one stream per iteration across policies.
RngStream iteration_stream(std::uint64_t master_seed, std::uint64_t iteration,
                           std::size_t policy_index, bool paired) noexcept;

// iterations x specs trajectories, aggregated by a fold over fixed-size
// iteration blocks in index order: identical for any thread count.
AggregateStats run_batch(std::span<const PolicySpec> specs, const BanditInstance& instance,
                         std::uint64_t horizon, std::uint64_t iterations,
                         std::span<const std::uint64_t> checkpoints, std::uint64_t master_seed,
                         const BatchOptions& options = {});

enum class ConcentrationLemma { L3a, L3b, L3c, L5 };

std::string_view to_string(ConcentrationLemma lemma) noexcept;
std::optional<ConcentrationLemma> parse_lemma(std::string_view tag) noexcept;

struct ConcentrationParams {
  double l = 0.0;
  std::uint64_t t1 = 1;
  std::uint64_t t2 = 1;
  double delta = 0.0;
  // Mean of the sampled distribution for lemma 5, and the centring mean of
  // Bernoulli noise for lemma 3. Gaussian lemma-3 noise is standard normal.
  double mean = 0.5;
};

struct ConcentrationResult {
  double empirical = 0.0;  // event frequency (3a, 3b, 5) or mean count (3c)
  double std_error = 0.0;
  double analytic = 0.0;
  std::uint64_t trials = 0;

  bool dominated() const noexcept { return empirical <= analytic + 3.0 * std_error; }
};

// Monte Carlo estimate of a concentration-lemma event next to its analytic
// right-hand side. Trial i draws from RngStream(master_seed, i).
ConcentrationResult mc_concentration(ConcentrationLemma lemma, const ConcentrationParams& params,
                                     RewardFamily family, std::uint64_t trials,
                                     std::uint64_t master_seed);

}  // namespace eocp
