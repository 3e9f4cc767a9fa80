#include "eocp/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "eocp/bounds.hpp"

namespace eocp {
namespace {

constexpr std::uint64_t kBlockSize = 64;
constexpr std::uint64_t kIndependentPolicyTag = 0x5EED'0000'0000'0000ull;

// Welford moments with Chan's merge; merge order fixes the rounding.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& other) noexcept {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double total = na + nb;
    const double d = other.mean - mean;
    mean += d * nb / total;
    m2 += other.m2 + d * d * na * nb / total;
    n += other.n;
  }

  double std_error() const noexcept {
    if (n < 2) return 0.0;
    const double nd = static_cast<double>(n);
    return std::sqrt(std::max(m2, 0.0) / (nd - 1.0) / nd);
  }
};

void check_checkpoints(std::span<const std::uint64_t> checkpoints, std::uint64_t horizon) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > horizon) {
      throw std::invalid_argument("checkpoint outside [1, T]");
    }
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw std::invalid_argument("checkpoints must be strictly increasing");
    }
  }
}

CommitSummary summarize_commitments(std::vector<std::uint64_t> rounds,
                                    const std::vector<char>& miscommits) {
  CommitSummary s;
  const std::size_t n = rounds.size();
  if (n == 0) return s;
  double total = 0.0;
  for (std::uint64_t r : rounds) total += static_cast<double>(r);
  s.mean_tc = total / static_cast<double>(n);
  std::sort(rounds.begin(), rounds.end());
  s.median_tc = n % 2 == 1 ? static_cast<double>(rounds[n / 2])
                           : 0.5 * (static_cast<double>(rounds[n / 2 - 1]) +
                                    static_cast<double>(rounds[n / 2]));
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95_tc = static_cast<double>(rounds[std::max<std::size_t>(rank, 1) - 1]);
  const auto wrong = static_cast<double>(std::count(miscommits.begin(), miscommits.end(), 1));
  s.miscommit_rate = wrong / static_cast<double>(n);
  s.miscommit_std_error =
      std::sqrt(s.miscommit_rate * (1.0 - s.miscommit_rate) / static_cast<double>(n));
  return s;
}

PolicyAggregate finish_policy(std::string name, Algorithm algorithm,
                              std::span<const std::uint64_t> checkpoints,
                              std::span<const Moments> moments, std::uint64_t iterations,
                              std::vector<std::uint64_t> rounds, const std::vector<char>& miss) {
  PolicyAggregate agg{std::move(name), algorithm, iterations, {}, std::nullopt};
  agg.checkpoints.reserve(checkpoints.size());
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    agg.checkpoints.push_back({checkpoints[k], moments[k].mean, moments[k].std_error(), moments[k].n});
  }
  if (is_committing(algorithm)) agg.commit = summarize_commitments(std::move(rounds), miss);
  return agg;
}

}  // namespace

TrajectoryRecord run_trajectory(const PolicySpec& spec, const BanditInstance& instance,
                                std::uint64_t horizon,
                                std::span<const std::uint64_t> checkpoints,
                                const RngStream& stream, std::vector<std::size_t>* actions) {
  const std::size_t arms = instance.arms();
  if (horizon < arms) throw std::invalid_argument("horizon T must be at least the arm count");
  check_checkpoints(checkpoints, horizon);

  Policy policy(spec, instance.family(), arms, horizon);
  std::vector<RngStream> reward_streams;
  reward_streams.reserve(arms);
  for (std::size_t a = 0; a < arms; ++a) reward_streams.push_back(stream.child(a));
  RngStream noise = stream.child(kPolicyNoiseTag);
  const std::span<const double> means = instance.means();
  const std::span<const double> gaps = instance.gaps();

  TrajectoryRecord rec;
  rec.policy = spec.name();
  rec.algorithm = spec.algorithm;
  rec.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  rec.regret.reserve(checkpoints.size());
  if (actions) {
    actions->clear();
    actions->reserve(horizon);
  }

  double regret = 0.0;
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    if (const auto& c = policy.commitment()) {
      const double gap = gaps[c->arm];
      for (; next < checkpoints.size(); ++next) {
        rec.regret.push_back(regret + static_cast<double>(checkpoints[next] - t + 1) * gap);
      }
      if (actions) actions->resize(horizon, c->arm);
      break;
    }
    const std::size_t arm = policy.select_action(noise);
    const std::uint64_t pull = policy.pull_counts()[arm];
    policy.observe(arm, sample_at(instance.family(), means[arm], reward_streams[arm], pull));
    regret += gaps[arm];
    if (actions) actions->push_back(arm);
    while (next < checkpoints.size() && checkpoints[next] == t) {
      rec.regret.push_back(regret);
      ++next;
    }
  }

  if (const auto& c = policy.commitment()) {
    rec.commit_round = c->round;
    rec.committed_arm = c->arm;
    rec.miscommit = c->arm != instance.best_arm();
  } else {
    rec.commit_round = horizon;
  }
  return rec;
}

std::vector<std::uint64_t> default_checkpoints(std::size_t arms, std::uint64_t horizon,
                                               std::size_t count) {
  if (arms == 0 || horizon < arms) throw std::invalid_argument("need 1 <= A <= T for checkpoints");
  std::vector<std::uint64_t> out;
  if (count == 0) return out;
  const double lo = std::log(static_cast<double>(arms));
  const double hi = std::log(static_cast<double>(horizon));
  out.push_back(arms);
  for (std::size_t i = 1; i < count; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    auto r = static_cast<std::uint64_t>(std::llround(std::exp(x)));
    r = std::clamp<std::uint64_t>(r, arms, horizon);
    if (r > out.back()) out.push_back(r);
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

const PolicyAggregate& AggregateStats::at(std::string_view policy) const {
  for (const auto& p : policies) {
    if (p.policy == policy) return p;
  }
  throw std::out_of_range("no aggregate for policy '" + std::string(policy) + "'");
}

AggregateStats aggregate(std::span<const TrajectoryRecord> records) {
  AggregateStats out;
  if (records.empty()) return out;
  const auto& reference = records.front().checkpoints;
  std::vector<std::string> names;
  for (const auto& r : records) {
    if (r.checkpoints != reference || r.regret.size() != reference.size()) {
      throw std::invalid_argument("records have mismatched checkpoints");
    }
    if (std::find(names.begin(), names.end(), r.policy) == names.end()) names.push_back(r.policy);
  }
  for (const auto& name : names) {
    std::vector<Moments> moments(reference.size());
    std::vector<std::uint64_t> rounds;
    std::vector<char> miss;
    Algorithm algorithm = Algorithm::Eocp;
    for (const auto& r : records) {
      if (r.policy != name) continue;
      algorithm = r.algorithm;
      for (std::size_t k = 0; k < reference.size(); ++k) moments[k].add(r.regret[k]);
      rounds.push_back(r.commit_round);
      miss.push_back(r.miscommit ? 1 : 0);
    }
    const std::uint64_t n = rounds.size();
    out.policies.push_back(
        finish_policy(name, algorithm, reference, moments, n, std::move(rounds), miss));
  }
  return out;
}

RngStream iteration_stream(std::uint64_t master_seed, std::uint64_t iteration,
                           std::size_t policy_index, bool paired) noexcept {
  RngStream base(master_seed, iteration);
  return paired ? base : base.child(kIndependentPolicyTag + policy_index);
}

AggregateStats run_batch(std::span<const PolicySpec> specs, const BanditInstance& instance,
                         std::uint64_t horizon, std::uint64_t iterations,
                         std::span<const std::uint64_t> checkpoints, std::uint64_t master_seed,
                         const BatchOptions& options) {
  if (iterations == 0) throw std::invalid_argument("iterations must be at least 1");
  if (specs.empty()) throw std::invalid_argument("run_batch needs at least one policy");
  for (const auto& s : specs) s.validate();
  check_checkpoints(checkpoints, horizon);

  const std::size_t policies = specs.size();
  const std::size_t cps = checkpoints.size();
  const std::uint64_t blocks = (iterations + kBlockSize - 1) / kBlockSize;
  // partial[b][p * cps + k]
  std::vector<std::vector<Moments>> partial(blocks, std::vector<Moments>(policies * cps));
  std::vector<std::vector<std::uint64_t>> rounds(policies, std::vector<std::uint64_t>(iterations));
  std::vector<std::vector<char>> miss(policies, std::vector<char>(iterations));

  std::atomic<std::uint64_t> next_block{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t b = next_block++; b < blocks; b = next_block++) {
        auto& acc = partial[b];
        const std::uint64_t end = std::min(iterations, (b + 1) * kBlockSize);
        for (std::uint64_t it = b * kBlockSize; it < end; ++it) {
          for (std::size_t p = 0; p < policies; ++p) {
            const auto rec =
                run_trajectory(specs[p], instance, horizon, checkpoints,
                               iteration_stream(master_seed, it, p, options.paired_streams));
            for (std::size_t k = 0; k < cps; ++k) acc[p * cps + k].add(rec.regret[k]);
            rounds[p][it] = rec.commit_round;
            miss[p][it] = rec.miscommit ? 1 : 0;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_block = blocks;
    }
  };

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, blocks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  AggregateStats out;
  for (std::size_t p = 0; p < policies; ++p) {
    std::vector<Moments> moments(cps);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      for (std::size_t k = 0; k < cps; ++k) moments[k].merge(partial[b][p * cps + k]);
    }
    out.policies.push_back(finish_policy(specs[p].name(), specs[p].algorithm, checkpoints, moments,
                                         iterations, std::move(rounds[p]), miss[p]));
  }
  return out;
}

std::string_view to_string(ConcentrationLemma lemma) noexcept {
  switch (lemma) {
    case ConcentrationLemma::L3a: return "3a";
    case ConcentrationLemma::L3b: return "3b";
    case ConcentrationLemma::L3c: return "3c";
    case ConcentrationLemma::L5: return "5";
  }
  return "?";
}

std::optional<ConcentrationLemma> parse_lemma(std::string_view tag) noexcept {
  for (auto lemma : {ConcentrationLemma::L3a, ConcentrationLemma::L3b, ConcentrationLemma::L3c,
                     ConcentrationLemma::L5}) {
    if (to_string(lemma) == tag) return lemma;
  }
  return std::nullopt;
}

ConcentrationResult mc_concentration(ConcentrationLemma lemma, const ConcentrationParams& params,
                                     RewardFamily family, std::uint64_t trials,
                                     std::uint64_t master_seed) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  const auto t1 = static_cast<double>(params.t1);
  const auto t2 = static_cast<double>(params.t2);
  const bool bernoulli = family == RewardFamily::Bernoulli;
  if (bernoulli && !(params.mean > 0.0 && params.mean < 1.0)) {
    throw std::invalid_argument("Bernoulli mean must lie in (0, 1)");
  }

  ConcentrationResult res;
  res.trials = trials;
  switch (lemma) {
    case ConcentrationLemma::L3a: res.analytic = lemma3_rhs(Lemma3Part::A, params.l, t1, t2, params.delta); break;
    case ConcentrationLemma::L3b: res.analytic = lemma3_rhs(Lemma3Part::B, params.l, t1, t2, params.delta); break;
    case ConcentrationLemma::L3c: res.analytic = lemma3_rhs(Lemma3Part::C, params.l, t1, t2, params.delta); break;
    case ConcentrationLemma::L5: res.analytic = lemma5_rhs(params.l, t1, t2); break;
  }

  const double l = params.l;
  const double mu = params.mean;
  Moments counts;
  std::uint64_t hits = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    RngStream rng(master_seed, trial);
    double sum = 0.0;
    bool hit = false;
    std::uint64_t count = 0;
    for (std::uint64_t s = 1; s <= params.t2 && !hit; ++s) {
      const double x = bernoulli ? (rng.uniform() < mu ? 1.0 : 0.0)
                                 : (lemma == ConcentrationLemma::L5 ? mu : 0.0) + rng.normal();
      const auto sd = static_cast<double>(s);
      if (lemma == ConcentrationLemma::L5) {
        sum += x;
        if (s < params.t1) continue;
        const double avg = sum / sd;
        hit = avg <= mu && sd * kl_div(family, avg, mu) >= l;
        continue;
      }
      sum += bernoulli ? x - mu : x;
      const double index = sum / sd + std::sqrt(2.0 * l / sd);
      switch (lemma) {
        case ConcentrationLemma::L3a: hit = s > params.t1 && index <= 0.0; break;
        case ConcentrationLemma::L3b: hit = s >= params.t1 && index + params.delta <= 0.0; break;
        default: if (s > params.t1 && index >= params.delta) ++count; break;
      }
    }
    if (lemma == ConcentrationLemma::L3c) {
      counts.add(static_cast<double>(count));
    } else if (hit) {
      ++hits;
    }
  }

  if (lemma == ConcentrationLemma::L3c) {
    res.empirical = counts.mean;
    res.std_error = counts.std_error();
  } else {
    const double n = static_cast<double>(trials);
    res.empirical = static_cast<double>(hits) / n;
    res.std_error = std::sqrt(res.empirical * (1.0 - res.empirical) / n);
  }
  return res;
}

}  // namespace eocp
