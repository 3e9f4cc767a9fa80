#include "eocp/policies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>

namespace eocp {
namespace {

constexpr std::string_view kTags[] = {"eocp", "eocp-ug", "kl-eocp", "ucb",
                                      "kl-ucb", "ts", "uniform-etc"};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::uint64_t stop_time(std::size_t arms, double ratio) {
  // ratio = c A l / lower-bound, already finite and positive.
  return static_cast<std::uint64_t>(std::ceil(ratio)) + arms;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
  return kTags[static_cast<std::size_t>(algorithm)];
}

std::optional<Algorithm> parse_algorithm(std::string_view tag) noexcept {
  for (std::size_t i = 0; i < std::size(kTags); ++i) {
    if (kTags[i] == tag) return static_cast<Algorithm>(i);
  }
  return std::nullopt;
}

bool is_committing(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::Eocp:
    case Algorithm::EocpUg:
    case Algorithm::KlEocp:
    case Algorithm::UniformEtc:
      return true;
    default:
      return false;
  }
}

double RateOverride::evaluate(double horizon) const {
  if (kind == Kind::LogHorizon) {
    require(horizon > 1.0, "ln T exploration rate needs T > 1");
    return std::log(horizon);
  }
  return value;
}

std::string RateOverride::describe() const {
  if (kind == Kind::LogHorizon) return "ln";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

RateOverride RateOverride::parse(std::string_view text) {
  if (text == "ln" || text == "log") return {Kind::LogHorizon, 0.0};
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc{} && res.ptr == text.data() + text.size(),
          "exploration rate override must be 'ln' or a number");
  require(v > 0.0 && std::isfinite(v), "exploration rate override must be positive");
  return {Kind::Constant, v};
}

std::string PolicySpec::name() const {
  return label.empty() ? std::string(to_string(algorithm)) : label;
}

void PolicySpec::validate() const {
  const std::string who = "policy '" + name() + "': ";
  auto check = [&](bool ok, const char* parameter, const std::string& what) {
    if (!ok) throw PolicyParameterError(parameter, who + what);
  };
  switch (algorithm) {
    case Algorithm::Eocp:
      check(delta_lb.has_value(), "delta_lb", "delta_lb is required for eocp");
      check(*delta_lb > 0.0 && *delta_lb <= 1.0, "delta_lb", "delta_lb must lie in (0, 1]");
      break;
    case Algorithm::KlEocp:
      check(kl_lb.has_value(), "kl_lb", "kl_lb is required for kl-eocp");
      check(*kl_lb > 0.0 && std::isfinite(*kl_lb), "kl_lb", "kl_lb must be positive");
      break;
    case Algorithm::Ucb:
      check(alpha > 0.0 && std::isfinite(alpha), "alpha", "alpha must be positive");
      break;
    case Algorithm::UniformEtc:
      check(explore_budget.has_value(), "explore_budget", "explore_budget is required for uniform-etc");
      check(*explore_budget > 0, "explore_budget", "explore_budget must be positive");
      break;
    default:
      break;
  }
  if (rate && rate->kind == RateOverride::Kind::Constant) {
    check(rate->value > 0.0 && std::isfinite(rate->value), "l", "l must be positive");
  }
}

double PolicySpec::exploration_rate_for(std::uint64_t horizon) const {
  const auto t = static_cast<double>(horizon);
  return rate ? rate->evaluate(t) : eocp::exploration_rate(t);
}

std::uint64_t eocp_stop_time(std::size_t arms, double l, double delta_lb) {
  require(arms >= 2, "eocp_stop_time needs at least two arms");
  require(l > 0.0 && std::isfinite(l), "eocp_stop_time needs l > 0");
  require(delta_lb > 0.0 && delta_lb <= 1.0, "delta_lb must lie in (0, 1]");
  return stop_time(arms, 8.0 * static_cast<double>(arms) * l / (delta_lb * delta_lb));
}

std::uint64_t kl_eocp_stop_time(std::size_t arms, double l, double kl_lb) {
  require(arms >= 2, "kl_eocp_stop_time needs at least two arms");
  require(l > 0.0 && std::isfinite(l), "kl_eocp_stop_time needs l > 0");
  require(kl_lb > 0.0 && std::isfinite(kl_lb), "kl_lb must be positive");
  return stop_time(arms, 4.0 * static_cast<double>(arms) * l / kl_lb);
}

std::optional<std::size_t> ug_stop_check(std::span<const std::uint64_t> counts, double l) {
  require(counts.size() >= 2, "ug_stop_check needs at least two arms");
  std::size_t top = 0;
  for (std::size_t a = 1; a < counts.size(); ++a) {
    if (counts[a] > counts[top]) top = a;
  }
  std::uint64_t runner_up = 0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (a != top) runner_up = std::max(runner_up, counts[a]);
  }
  for (std::size_t a = 0; a < counts.size(); ++a) {
    const double others = static_cast<double>(a == top ? runner_up : counts[top]);
    if (static_cast<double>(counts[a]) > l * others + 1.0) return a;
  }
  return std::nullopt;
}

std::size_t pessimistic_arm(RewardFamily family, std::span<const ArmStat> stats, double l,
                            ConfidenceShape shape) {
  require(!stats.empty(), "pessimistic_arm needs at least one arm");
  std::size_t best = 0;
  double best_lcb = 0.0;
  for (std::size_t a = 0; a < stats.size(); ++a) {
    const double lcb = shape == ConfidenceShape::KullbackLeibler ? kl_lower(family, stats[a], l)
                                                                  : hoeffding_lcb(stats[a], l);
    if (a == 0 || lcb > best_lcb) {
      best = a;
      best_lcb = lcb;
    }
  }
  return best;
}

Policy::Policy(PolicySpec spec, RewardFamily family, std::size_t arms, std::uint64_t horizon)
    : spec_(std::move(spec)), family_(family), horizon_(horizon), stats_(arms), counts_(arms) {
  spec_.validate();
  require(arms >= 1, "policy needs at least one arm");
  require(horizon >= 2, "policy needs a horizon of at least 2 rounds");
  l_ = spec_.exploration_rate_for(horizon);
  switch (spec_.algorithm) {
    case Algorithm::Eocp:
      planned_stop_ = arms >= 2 ? eocp_stop_time(arms, l_, *spec_.delta_lb)
                                : stop_time(arms, 8.0 * l_ / (*spec_.delta_lb * *spec_.delta_lb));
      break;
    case Algorithm::KlEocp:
      planned_stop_ = arms >= 2 ? kl_eocp_stop_time(arms, l_, *spec_.kl_lb)
                                : stop_time(arms, 4.0 * l_ / *spec_.kl_lb);
      break;
    case Algorithm::UniformEtc:
      planned_stop_ = std::max<std::uint64_t>(*spec_.explore_budget, arms);
      break;
    default:
      break;
  }
}

std::size_t Policy::select_action(RngStream& rng) {
  if (round_ > horizon_) throw std::logic_error("select_action called past the horizon");
  if (pending_) throw std::logic_error("select_action called twice without observe");
  std::size_t arm = 0;
  const std::size_t arms = stats_.size();
  if (commitment_) {
    arm = commitment_->arm;
  } else if (round_ <= arms) {
    arm = static_cast<std::size_t>((round_ - 1) % arms);
  } else {
    switch (spec_.algorithm) {
      case Algorithm::UniformEtc:
        arm = static_cast<std::size_t>((round_ - 1) % arms);
        break;
      case Algorithm::Ts:
        arm = thompson_draw(rng);
        break;
      case Algorithm::KlUcb: {
        const double log_t = std::log(static_cast<double>(round_));
        arm = argmax_index(log_t + 3.0 * std::log(std::max(log_t, 1.0)));
        break;
      }
      case Algorithm::Ucb:
        arm = argmax_index(std::log(static_cast<double>(round_)));
        break;
      default:
        arm = argmax_index(l_);
        break;
    }
  }
  pending_ = arm;
  return arm;
}

std::size_t Policy::argmax_index(double rate) {
  const bool kl_index = spec_.algorithm == Algorithm::KlEocp || spec_.algorithm == Algorithm::KlUcb;
  if (kl_index && family_ == RewardFamily::Bernoulli) return kl_argmax_bernoulli(rate);
  std::size_t best = 0;
  double best_index = 0.0;
  for (std::size_t a = 0; a < stats_.size(); ++a) {
    const ArmStat& s = stats_[a];
    double index = 0.0;
    switch (spec_.algorithm) {
      case Algorithm::Ucb:
        index = s.mean + spec_.alpha * std::sqrt(2.0 * rate / static_cast<double>(s.pulls));
        break;
      case Algorithm::KlEocp:
      case Algorithm::KlUcb:
        index = kl_upper(family_, s, rate);
        break;
      default:
        index = hoeffding_ucb(s, rate);
        break;
    }
    if (a == 0 || index > best_index) {
      best = a;
      best_index = index;
    }
  }
  return best;
}

// Pinsker caps each KL index at mean + sqrt(rate / 2N); arms whose cap falls
// strictly below the leading arm's exact index cannot be the argmax.
std::size_t Policy::kl_argmax_bernoulli(double rate) {
  const std::size_t arms = stats_.size();
  std::size_t lead = 0;
  for (std::size_t a = 1; a < arms; ++a) {
    if (stats_[a].mean > stats_[lead].mean) lead = a;
  }
  const double floor = kl_upper(family_, stats_[lead], rate);
  std::size_t best = 0;
  double best_index = -1.0;
  for (std::size_t a = 0; a < arms; ++a) {
    double index = floor;
    if (a != lead) {
      const ArmStat& s = stats_[a];
      const double cap = s.mean + std::sqrt(rate / (2.0 * static_cast<double>(s.pulls)));
      if (cap < floor) continue;
      index = kl_upper(family_, s, rate);
    }
    if (index > best_index) {
      best = a;
      best_index = index;
    }
  }
  return best;
}

std::size_t Policy::thompson_draw(RngStream& rng) {
  std::size_t best = 0;
  double best_draw = 0.0;
  for (std::size_t a = 0; a < stats_.size(); ++a) {
    const ArmStat& s = stats_[a];
    const double n = static_cast<double>(s.pulls);
    double draw = 0.0;
    if (family_ == RewardFamily::GaussianUnitVariance) {
      draw = s.mean + rng.normal() / std::sqrt(n);
    } else {
      const double successes = std::round(s.mean * n);
      std::gamma_distribution<double> wins(successes + 1.0);
      std::gamma_distribution<double> losses(n - successes + 1.0);
      const double x = wins(rng);
      const double y = losses(rng);
      draw = x / (x + y);
    }
    if (a == 0 || draw > best_draw) {
      best = a;
      best_draw = draw;
    }
  }
  return best;
}

void Policy::observe(std::size_t arm, double reward) {
  if (!pending_ || *pending_ != arm) {
    throw std::logic_error("observe called for an arm that was not selected this round");
  }
  pending_.reset();
  stats_[arm].record(reward);
  ++counts_[arm];
  const std::uint64_t completed = round_++;
  if (commitment_) return;
  switch (spec_.algorithm) {
    case Algorithm::Eocp:
    case Algorithm::KlEocp:
    case Algorithm::UniformEtc:
      if (completed == *planned_stop_) commit();
      break;
    case Algorithm::EocpUg:
      if (completed >= stats_.size()) {
        if (stats_.size() == 1 || ug_stop_check(counts_, l_)) commit();
      }
      break;
    default:
      break;
  }
}

void Policy::commit() {
  if (commitment_) throw std::logic_error("policy has already committed");
  std::size_t arm = 0;
  switch (spec_.algorithm) {
    case Algorithm::UniformEtc:
      for (std::size_t a = 1; a < stats_.size(); ++a) {
        if (stats_[a].mean > stats_[arm].mean) arm = a;
      }
      break;
    case Algorithm::KlEocp:
      arm = pessimistic_arm(family_, stats_, l_, ConfidenceShape::KullbackLeibler);
      break;
    default:
      arm = pessimistic_arm(family_, stats_, l_, ConfidenceShape::Hoeffding);
      break;
  }
  commitment_ = Commitment{arm, round_ - 1};
}

}  // namespace eocp
