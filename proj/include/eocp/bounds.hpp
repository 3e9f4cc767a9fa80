#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eocp/core_model.hpp"

namespace eocp {

// One evaluated bound. `valid` says whether the bound's preconditions hold
// for the inputs; `note` records omitted residual terms or the rate label.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  double value = 0.0;
  bool valid = true;
  std::string note;
};

// Finite-time EOCP regret (o(1) omitted):
//   sum_a 2 ln T / D + (8 + sqrt(20 pi)) sqrt(ln T) / D + 2 / D + D.
// Valid when T >= max{16, A, 16 l / D_min^2} with l the default rate and
// A = gaps.size() + 1.
BoundReport eocp_regret_bound(double horizon, std::span<const double> gaps);

// Leading two terms of the EOCP-UG regret bound; the O(1) remainder is not
// included.
BoundReport eocpug_regret_bound(double horizon, std::span<const double> gaps);

// sum_a D_a ln T / KL(mu_a, mu_*) + 10 D_a ln^{3/4} T / KL(mu_a, mu_*).
// Validity uses KL_min as the lower bound KL_lb: T >= max{16, A, 8 l / KL_lb^2}.
BoundReport kl_eocp_regret_bound(double horizon, const BanditInstance& instance);

// Explicit finite bound on the expected EOCP-UG commitment time:
//   sum_a (8 ln^2 T + 80 ln^{3/2} T + 200 ln T) / D_a^2 + 6 A ln T + 10 e A / ln^2 T.
BoundReport scc_ug_bound(double horizon, std::span<const double> gaps, std::size_t arms);
// Same expression parameterised by ln T, for limits beyond double range of T.
double scc_ug_bound_from_log(double log_horizon, std::span<const double> gaps, std::size_t arms);

enum class StoppingMode { PreDetermined, Adaptive };

// Commitment-time lower-bound rates with the Omega constant set to 1:
// ln T / D^2 (pre-determined) or ln^{2-c} T / D^2 (adaptive).
BoundReport scc_lower_bound(double horizon, double gap, double c, StoppingMode mode);

enum class Lemma3Part { A, B, C };

// Right-hand sides of the sub-Gaussian anytime concentration lemma:
//   (a) min{T2 - T1, e l (ln T2 - ln T1) + e} / e^l             (l >= 2)
//   (b) 4 / (delta^2 exp((sqrt(l) + delta sqrt(T1 / 2))^2))      (0 < delta <= sqrt 3)
//   (c) (2 l + sqrt(4 pi l) + 2) / delta^2 + 1 - T1              (l >= T1 delta^2 / 2)
// Probability bounds are returned uncapped.
double lemma3_rhs(Lemma3Part part, double l, double t1, double t2, double delta);

// min{(T2 - T1 + 1) / e^l, (e l (ln T2 - ln T1) + e) / e^l}, l > 2.
double lemma5_rhs(double l, double t1, double t2);

struct Lemma6Terms {
  double r = 0.0;       // r(eps) in (mu, mu') with KL(r, mu') = KL(mu, mu') / (1 + eps)
  double beta1 = 0.0;   // (1 + eps) KL(r, mu) / KL(mu, mu')
  double beta2 = 0.0;   // 1 / (1 - exp(-KL(r, mu)))
  double leading = 0.0; // (1 + eps) l / KL(mu, mu')
  double value = 0.0;   // leading + beta2 / T^beta1
};

// Bound on the expected number of KL-UCB index exceedances of mu'.
Lemma6Terms lemma6_rhs(RewardFamily family, double mu, double mu_prime, double l, double eps,
                       double horizon);

}  // namespace eocp
