#pragma once

#include <cstdint>

#include "eocp/core_model.hpp"

namespace eocp {

// Bracket width and iteration cap for every bisection in the library.
inline constexpr double kBisectionTolerance = 1e-9;
inline constexpr int kBisectionMaxSteps = 200;

// Pull count and empirical mean of one arm. The mean is meaningless until
// pulls >= 1.
struct ArmStat {
  std::uint64_t pulls = 0;
  double mean = 0.0;

  void record(double reward) noexcept {
    ++pulls;
    mean += (reward - mean) / static_cast<double>(pulls);
  }
};

// l = ln T + 4 sqrt(2 ln T). Requires T >= 2.
double exploration_rate(double horizon);

// sqrt(2 l / N). Throws std::invalid_argument when pulls == 0 or l <= 0.
double hoeffding_bonus(const ArmStat& stat, double l);
inline double hoeffding_ucb(const ArmStat& stat, double l) {
  return stat.mean + hoeffding_bonus(stat, l);
}
inline double hoeffding_lcb(const ArmStat& stat, double l) {
  return stat.mean - hoeffding_bonus(stat, l);
}

// Largest mu >= mean with pulls * KL(mean, mu) <= l. Gaussian uses the closed
// form mean + hoeffding_bonus; Bernoulli bisects on [mean, 1].
double kl_upper(RewardFamily family, const ArmStat& stat, double l);
// Smallest mu <= mean with pulls * KL(mean, mu) <= l; mirror of kl_upper.
double kl_lower(RewardFamily family, const ArmStat& stat, double l);

// min over sub-optimal a of min{KL(mu_a, mu_*), 4 KL(mu'_a, mu_a)} where mu'_a
// in (mu_a, mu_*) solves 4 KL(mu'_a, mu_*) = KL(mu_a, mu_*). Needs >= 2 arms.
double kl_min(const BanditInstance& instance);

// Root of a function that is positive at lo and non-positive at hi, to within
// kBisectionTolerance. Returns the midpoint of the final bracket.
template <class F>
double bisect_sign_change(F&& f, double lo, double hi) {
  for (int step = 0; step < kBisectionMaxSteps && hi - lo > kBisectionTolerance; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace eocp
