#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "eocp/rng.hpp"

namespace eocp {

// Gaussian arms have unit variance; Bernoulli arms take values in {0, 1}.
enum class RewardFamily { GaussianUnitVariance, Bernoulli };

std::string_view to_string(RewardFamily family) noexcept;
// Accepts "gaussian" and "bernoulli"; throws std::invalid_argument otherwise.
RewardFamily parse_family(std::string_view name);

// Environment ground truth: a reward family and one mean per arm.
//
// Means lie in [0, 1] for both families. With two or more arms the optimal
// arm must be unique; ties at the maximum are rejected at construction.
class BanditInstance {
 public:
  BanditInstance(RewardFamily family, std::vector<double> means);

  RewardFamily family() const noexcept { return family_; }
  std::size_t arms() const noexcept { return means_.size(); }
  std::span<const double> means() const noexcept { return means_; }
  double mean(std::size_t arm) const { return means_.at(arm); }
  std::size_t best_arm() const noexcept { return best_; }
  double best_mean() const noexcept { return means_[best_]; }

  // Delta_a = mu_* - mu_a; zero for the optimal arm.
  double gap(std::size_t arm) const { return best_mean() - means_.at(arm); }
  std::span<const double> gaps() const noexcept { return gaps_; }
  // Gaps of the sub-optimal arms in arm order.
  std::vector<double> suboptimal_gaps() const;
  // Smallest positive gap; +inf for a single-arm instance.
  double min_gap() const noexcept;

 private:
  RewardFamily family_;
  std::vector<double> means_;
  std::vector<double> gaps_;
  std::size_t best_ = 0;
};

// Next reward of `arm` drawn from `rng`. Gaussian rewards are not clipped.
double sample(const BanditInstance& instance, std::size_t arm, RngStream& rng);

// Draw a reward of the given family from the stream position directly.
inline double sample_at(RewardFamily family, double mean, const RngStream& rng,
                        std::uint64_t position) noexcept {
  if (family == RewardFamily::GaussianUnitVariance) return mean + rng.normal_at(position);
  return rng.uniform_at(position) < mean ? 1.0 : 0.0;
}

// KL divergence between two members of the family, in nats.
//
// Gaussian: (mu1 - mu2)^2 / 2 for any real arguments. Bernoulli: arguments in
// [0, 1] with the 0 ln 0 = 0 convention; returns +inf when mu2 is 0 or 1 and
// differs from mu1.
double kl_div(RewardFamily family, double mu1, double mu2);

// Sum over sub-optimal arms of Delta_a / KL(mu_a, mu_*): the constant in front
// of ln T in the asymptotic regret lower bound. Zero for one arm.
double asymptotic_lb_rate(const BanditInstance& instance);

}  // namespace eocp
