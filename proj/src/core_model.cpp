#include "eocp/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace eocp {

std::string_view to_string(RewardFamily family) noexcept {
  return family == RewardFamily::Bernoulli ? "bernoulli" : "gaussian";
}

RewardFamily parse_family(std::string_view name) {
  if (name == "gaussian") return RewardFamily::GaussianUnitVariance;
  if (name == "bernoulli") return RewardFamily::Bernoulli;
  throw std::invalid_argument("unknown reward family '" + std::string(name) +
                              "' (expected gaussian or bernoulli)");
}

BanditInstance::BanditInstance(RewardFamily family, std::vector<double> means)
    : family_(family), means_(std::move(means)) {
  if (means_.empty()) throw std::invalid_argument("bandit instance needs at least one arm");
  for (std::size_t a = 0; a < means_.size(); ++a) {
    const double m = means_[a];
    if (!(m >= 0.0 && m <= 1.0)) {
      throw std::invalid_argument("mean of arm " + std::to_string(a) + " must lie in [0, 1]");
    }
  }
  best_ = static_cast<std::size_t>(std::max_element(means_.begin(), means_.end()) - means_.begin());
  if (std::count(means_.begin(), means_.end(), means_[best_]) > 1) {
    throw std::invalid_argument("optimal arm is not unique");
  }
  gaps_.reserve(means_.size());
  for (double m : means_) gaps_.push_back(means_[best_] - m);
}

std::vector<double> BanditInstance::suboptimal_gaps() const {
  std::vector<double> out;
  for (std::size_t a = 0; a < gaps_.size(); ++a) {
    if (a != best_) out.push_back(gaps_[a]);
  }
  return out;
}

double BanditInstance::min_gap() const noexcept {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < gaps_.size(); ++a) {
    if (a != best_) g = std::min(g, gaps_[a]);
  }
  return g;
}

double sample(const BanditInstance& instance, std::size_t arm, RngStream& rng) {
  if (arm >= instance.arms()) {
    throw std::invalid_argument("arm index " + std::to_string(arm) + " out of range");
  }
  const double r = sample_at(instance.family(), instance.means()[arm], rng, rng.position());
  rng.seek(rng.position() + 1);
  return r;
}

double kl_div(RewardFamily family, double mu1, double mu2) {
  if (family == RewardFamily::GaussianUnitVariance) {
    const double d = mu1 - mu2;
    return 0.5 * d * d;
  }
  if (!(mu1 >= 0.0 && mu1 <= 1.0) || !(mu2 >= 0.0 && mu2 <= 1.0)) {
    throw std::invalid_argument("Bernoulli means must lie in [0, 1]");
  }
  if (mu1 == mu2) return 0.0;
  if (mu2 == 0.0 || mu2 == 1.0) return std::numeric_limits<double>::infinity();
  double kl = 0.0;
  if (mu1 > 0.0) kl += mu1 * std::log(mu1 / mu2);
  if (mu1 < 1.0) kl += (1.0 - mu1) * std::log((1.0 - mu1) / (1.0 - mu2));
  return std::max(kl, 0.0);
}

double asymptotic_lb_rate(const BanditInstance& instance) {
  double rate = 0.0;
  for (std::size_t a = 0; a < instance.arms(); ++a) {
    if (a == instance.best_arm()) continue;
    rate += instance.gap(a) / kl_div(instance.family(), instance.mean(a), instance.best_mean());
  }
  return rate;
}

}  // namespace eocp
