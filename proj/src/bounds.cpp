#include "eocp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eocp/confidence.hpp"

namespace eocp {
namespace {

using std::numbers::e;
using std::numbers::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double checked_log(double horizon, double min_horizon, const char* who) {
  require(horizon >= min_horizon,
          std::string(who) + " needs T >= " + std::to_string(static_cast<int>(min_horizon)));
  return std::log(horizon);
}

void check_gaps(std::span<const double> gaps) {
  for (double g : gaps) require(g > 0.0 && std::isfinite(g), "every gap must be positive");
}

bool gaussian_bound_applies(double horizon, std::span<const double> gaps, std::size_t arms) {
  if (gaps.empty()) return horizon >= 16.0;
  const double l = exploration_rate(horizon);
  const double dmin = *std::min_element(gaps.begin(), gaps.end());
  return horizon >= std::max({16.0, static_cast<double>(arms), 16.0 * l / (dmin * dmin)});
}

BoundReport gaussian_report(std::string name, double horizon, std::span<const double> gaps) {
  BoundReport r{std::move(name), {{"T", horizon}}, 0.0, true, {}};
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    r.params.emplace_back("gap" + std::to_string(i + 1), gaps[i]);
  }
  return r;
}

}  // namespace

BoundReport eocp_regret_bound(double horizon, std::span<const double> gaps) {
  check_gaps(gaps);
  const double log_t = checked_log(horizon, 2.0, "eocp_regret_bound");
  const double c = 8.0 + std::sqrt(20.0 * pi);
  BoundReport r = gaussian_report("eocp_regret_bound", horizon, gaps);
  for (double d : gaps) {
    r.value += 2.0 * log_t / d + c * std::sqrt(log_t) / d + 2.0 / d + d;
  }
  r.valid = gaussian_bound_applies(horizon, gaps, gaps.size() + 1);
  r.note = "o(1) omitted";
  return r;
}

BoundReport eocpug_regret_bound(double horizon, std::span<const double> gaps) {
  check_gaps(gaps);
  const double log_t = checked_log(horizon, 2.0, "eocpug_regret_bound");
  const double c = 8.0 + std::sqrt(20.0 * pi);
  BoundReport r = gaussian_report("eocpug_regret_bound", horizon, gaps);
  for (double d : gaps) r.value += 2.0 * log_t / d + c * std::sqrt(log_t) / d;
  r.valid = gaussian_bound_applies(horizon, gaps, gaps.size() + 1);
  r.note = "leading terms only; O(1) omitted";
  return r;
}

BoundReport kl_eocp_regret_bound(double horizon, const BanditInstance& instance) {
  const double log_t = checked_log(horizon, 2.0, "kl_eocp_regret_bound");
  BoundReport r{"kl_eocp_regret_bound", {{"T", horizon}}, 0.0, true, "o(1) omitted"};
  for (std::size_t a = 0; a < instance.arms(); ++a) r.params.emplace_back("mu" + std::to_string(a + 1), instance.mean(a));
  if (instance.arms() < 2) {
    r.valid = horizon >= 16.0;
    return r;
  }
  const double scaled = std::pow(log_t, 0.75);
  for (std::size_t a = 0; a < instance.arms(); ++a) {
    if (a == instance.best_arm()) continue;
    const double d = instance.gap(a);
    const double kl = kl_div(instance.family(), instance.mean(a), instance.best_mean());
    r.value += d * log_t / kl + 10.0 * d * scaled / kl;
  }
  const double kl_lb = kl_min(instance);
  const double l = exploration_rate(horizon);
  r.valid = horizon >= std::max({16.0, static_cast<double>(instance.arms()), 8.0 * l / (kl_lb * kl_lb)});
  return r;
}

double scc_ug_bound_from_log(double log_horizon, std::span<const double> gaps, std::size_t arms) {
  check_gaps(gaps);
  require(log_horizon > 0.0, "scc_ug_bound needs ln T > 0");
  const double l2 = log_horizon * log_horizon;
  const double l15 = log_horizon * std::sqrt(log_horizon);
  double value = 0.0;
  for (double d : gaps) value += (8.0 * l2 + 80.0 * l15 + 200.0 * log_horizon) / (d * d);
  const double a = static_cast<double>(arms);
  return value + 6.0 * a * log_horizon + 10.0 * e * a / l2;
}

BoundReport scc_ug_bound(double horizon, std::span<const double> gaps, std::size_t arms) {
  const double log_t = checked_log(horizon, 2.0, "scc_ug_bound");
  require(arms >= gaps.size() + 1, "scc_ug_bound: arm count smaller than gaps + 1");
  BoundReport r = gaussian_report("scc_ug_bound", horizon, gaps);
  r.params.emplace_back("A", static_cast<double>(arms));
  r.value = scc_ug_bound_from_log(log_t, gaps, arms);
  r.valid = gaussian_bound_applies(horizon, gaps, arms);
  return r;
}

BoundReport scc_lower_bound(double horizon, double gap, double c, StoppingMode mode) {
  require(c > 0.0 && c < 1.0, "violation exponent c must lie in (0, 1)");
  require(gap > 0.0 && gap <= 1.0, "gap must lie in (0, 1]");
  const double log_t = checked_log(horizon, 3.0, "scc_lower_bound");
  const bool adaptive = mode == StoppingMode::Adaptive;
  BoundReport r{adaptive ? "scc_lower_bound_adaptive" : "scc_lower_bound_predetermined",
                {{"T", horizon}, {"gap", gap}, {"c", c}},
                0.0,
                true,
                "rate; Omega constant fixed to 1"};
  r.value = (adaptive ? std::pow(log_t, 2.0 - c) : log_t) / (gap * gap);
  return r;
}

double lemma3_rhs(Lemma3Part part, double l, double t1, double t2, double delta) {
  require(t1 > 0.0 && t1 <= t2, "lemma 3 needs 0 < T1 <= T2");
  switch (part) {
    case Lemma3Part::A:
      require(l >= 2.0, "lemma 3(a) needs l >= 2");
      return std::min(t2 - t1, e * l * (std::log(t2) - std::log(t1)) + e) / std::exp(l);
    case Lemma3Part::B: {
      require(delta > 0.0 && delta <= std::sqrt(3.0), "lemma 3(b) needs delta in (0, sqrt(3)]");
      require(l >= 0.0, "lemma 3(b) needs l >= 0");
      const double root = std::sqrt(l) + delta * std::sqrt(t1 / 2.0);
      return 4.0 / (delta * delta * std::exp(root * root));
    }
    case Lemma3Part::C:
      require(delta > 0.0, "lemma 3(c) needs delta > 0");
      require(l >= t1 * delta * delta / 2.0, "lemma 3(c) needs l >= T1 delta^2 / 2");
      return (2.0 * l + std::sqrt(4.0 * pi * l) + 2.0) / (delta * delta) + 1.0 - t1;
  }
  throw std::invalid_argument("unknown lemma 3 part");
}

double lemma5_rhs(double l, double t1, double t2) {
  require(l > 2.0, "lemma 5 needs l > 2");
  require(t1 > 0.0 && t1 <= t2, "lemma 5 needs 0 < T1 <= T2");
  const double counting = t2 - t1 + 1.0;
  const double peeling = e * l * (std::log(t2) - std::log(t1)) + e;
  return std::min(counting, peeling) / std::exp(l);
}

Lemma6Terms lemma6_rhs(RewardFamily family, double mu, double mu_prime, double l, double eps,
                       double horizon) {
  require(mu < mu_prime, "lemma 6 needs mu < mu'");
  require(eps > 0.0, "lemma 6 needs eps > 0");
  require(l > 0.0, "lemma 6 needs l > 0");
  require(horizon >= 1.0, "lemma 6 needs T >= 1");
  const double separation = kl_div(family, mu, mu_prime);
  require(std::isfinite(separation), "lemma 6 needs a finite KL(mu, mu')");
  Lemma6Terms t;
  const double target = separation / (1.0 + eps);
  t.r = bisect_sign_change([&](double x) { return kl_div(family, x, mu_prime) - target; }, mu,
                           mu_prime);
  const double kl_r = kl_div(family, t.r, mu);
  t.beta1 = (1.0 + eps) * kl_r / separation;
  t.beta2 = -1.0 / std::expm1(-kl_r);
  t.leading = (1.0 + eps) * l / separation;
  t.value = t.leading + t.beta2 / std::pow(horizon, t.beta1);
  return t;
}

}  // namespace eocp
