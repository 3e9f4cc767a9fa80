#include "eocp/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eocp {
namespace {

void require_pulls(const ArmStat& stat) {
  if (stat.pulls == 0) throw std::invalid_argument("confidence bound needs pulls >= 1");
}

void require_rate(double l) {
  if (!(l > 0.0)) throw std::invalid_argument("exploration rate l must be positive");
}

void require_bernoulli_mean(double mean) {
  if (!(mean >= 0.0 && mean <= 1.0)) {
    throw std::invalid_argument("Bernoulli empirical mean must lie in [0, 1]");
  }
}

}  // namespace

double exploration_rate(double horizon) {
  if (!(horizon >= 2.0)) throw std::invalid_argument("exploration_rate needs T >= 2");
  const double log_t = std::log(horizon);
  return log_t + 4.0 * std::sqrt(2.0 * log_t);
}

double hoeffding_bonus(const ArmStat& stat, double l) {
  require_pulls(stat);
  require_rate(l);
  return std::sqrt(2.0 * l / static_cast<double>(stat.pulls));
}

double kl_upper(RewardFamily family, const ArmStat& stat, double l) {
  if (family == RewardFamily::GaussianUnitVariance) return hoeffding_ucb(stat, l);
  require_pulls(stat);
  require_rate(l);
  require_bernoulli_mean(stat.mean);
  if (stat.mean >= 1.0) return 1.0;
  const double n = static_cast<double>(stat.pulls);
  // Keep the feasible end of the bracket so the returned bound never
  // violates n * KL <= l.
  const double pinsker = std::sqrt(l / (2.0 * n));
  double lo = stat.mean;
  double hi = std::min(1.0, stat.mean + pinsker);
  for (int step = 0; step < kBisectionMaxSteps && hi - lo > kBisectionTolerance; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (n * kl_div(family, stat.mean, mid) <= l) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double kl_lower(RewardFamily family, const ArmStat& stat, double l) {
  if (family == RewardFamily::GaussianUnitVariance) return hoeffding_lcb(stat, l);
  require_pulls(stat);
  require_rate(l);
  require_bernoulli_mean(stat.mean);
  if (stat.mean <= 0.0) return 0.0;
  const double n = static_cast<double>(stat.pulls);
  double lo = std::max(0.0, stat.mean - std::sqrt(l / (2.0 * n)));
  double hi = stat.mean;
  for (int step = 0; step < kBisectionMaxSteps && hi - lo > kBisectionTolerance; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (n * kl_div(family, stat.mean, mid) <= l) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double kl_min(const BanditInstance& instance) {
  if (instance.arms() < 2) throw std::invalid_argument("kl_min needs at least two arms");
  const RewardFamily family = instance.family();
  const double best = instance.best_mean();
  if (family == RewardFamily::Bernoulli && best >= 1.0) {
    throw std::invalid_argument("kl_min is undefined when the optimal Bernoulli mean is 1");
  }
  double result = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < instance.arms(); ++a) {
    if (a == instance.best_arm()) continue;
    const double mu = instance.mean(a);
    const double separation = kl_div(family, mu, best);
    // mu -> KL(mu, best) decreases strictly on [mu_a, best].
    const double mu_prime = bisect_sign_change(
        [&](double x) { return 4.0 * kl_div(family, x, best) - separation; }, mu, best);
    result = std::min({result, separation, 4.0 * kl_div(family, mu_prime, mu)});
  }
  return result;
}

}  // namespace eocp
