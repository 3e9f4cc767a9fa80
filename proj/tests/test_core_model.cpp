#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "eocp/core_model.hpp"

using namespace eocp;

namespace {
constexpr auto kGauss = RewardFamily::GaussianUnitVariance;
constexpr auto kBern = RewardFamily::Bernoulli;
}  // namespace

TEST_CASE("instance construction") {
  const BanditInstance inst(kGauss, {0.2, 0.7, 0.5});
  CHECK(inst.arms() == 3);
  CHECK(inst.best_arm() == 1);
  CHECK(inst.best_mean() == 0.7);
  CHECK(inst.gap(1) == 0.0);
  CHECK(inst.gap(0) == doctest::Approx(0.5));
  CHECK(inst.min_gap() == doctest::Approx(0.2));
  CHECK(inst.suboptimal_gaps().size() == 2);
  CHECK(BanditInstance(kGauss, {0.3}).min_gap() == std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(BanditInstance(kGauss, {}), std::invalid_argument);
  CHECK_THROWS_AS(BanditInstance(kGauss, {0.7, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(BanditInstance(kBern, {1.2, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(BanditInstance(kGauss, {-0.1, 0.1}), std::invalid_argument);
  CHECK_NOTHROW(BanditInstance(kGauss, {0.7, 0.7, 0.9}));
}

TEST_CASE("family names") {
  CHECK(parse_family("gaussian") == kGauss);
  CHECK(parse_family("bernoulli") == kBern);
  CHECK(to_string(kBern) == "bernoulli");
  CHECK_THROWS_AS(parse_family("poisson"), std::invalid_argument);
}

TEST_CASE("degenerate Bernoulli arms") {
  const BanditInstance inst(kBern, {1.0, 0.0});
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample(inst, 0, rng) == 1.0);
    CHECK(sample(inst, 1, rng) == 0.0);
  }
  CHECK_THROWS_AS(sample(inst, 2, rng), std::invalid_argument);
}

TEST_CASE("Gaussian sample mean concentrates") {
  const BanditInstance inst(kGauss, {0.7, 0.2});
  RngStream rng(1, 0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += sample(inst, 0, rng);
  CHECK(std::abs(sum / n - 0.7) <= 0.004);
}

TEST_CASE("Bernoulli sample frequency concentrates") {
  const BanditInstance inst(kBern, {0.7, 0.2});
  RngStream rng(2, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += sample(inst, 1, rng);
  CHECK(std::abs(sum / n - 0.2) <= 4.0 * std::sqrt(0.16 / n));
}

TEST_CASE("sampling replays") {
  const BanditInstance inst(kGauss, {0.7, 0.2});
  RngStream a(9, 3), b(9, 3);
  for (int i = 0; i < 50; ++i) CHECK(sample(inst, i % 2, a) == sample(inst, i % 2, b));
}

TEST_CASE("kl_div examples") {
  CHECK(kl_div(kGauss, 0.7, 0.2) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(kl_div(kGauss, 0.4, 0.4) == 0.0);
  CHECK(kl_div(kBern, 0.4, 0.4) == 0.0);
  CHECK(std::abs(kl_div(kBern, 0.7, 0.2) - 0.5826853) <= 1e-6);
  CHECK(std::abs(kl_div(kBern, 0.2, 0.7) - 0.5341108) <= 1e-6);
}

TEST_CASE("Bernoulli kl_div boundary conventions") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(kl_div(kBern, 0.0, 0.3) == doctest::Approx(std::log(1.0 / 0.7)));
  CHECK(kl_div(kBern, 1.0, 0.3) == doctest::Approx(std::log(1.0 / 0.3)));
  CHECK(kl_div(kBern, 0.3, 0.0) == inf);
  CHECK(kl_div(kBern, 0.3, 1.0) == inf);
  CHECK(kl_div(kBern, 1.0, 1.0) == 0.0);
  CHECK(kl_div(kBern, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(kl_div(kBern, 1.5, 0.3), std::invalid_argument);
}

TEST_CASE("kl_div is non-negative and vanishes only on the diagonal") {
  for (int i = 0; i <= 50; ++i) {
    for (int j = 0; j <= 50; ++j) {
      const double x = i / 50.0, y = j / 50.0;
      const double g = kl_div(kGauss, x, y);
      const double b = kl_div(kBern, x, y);
      CHECK(g >= 0.0);
      CHECK(b >= 0.0);
      if (i == j) {
        CHECK(g == 0.0);
        CHECK(b == 0.0);
      } else {
        CHECK(g > 0.0);
        CHECK(b > 0.0);
      }
    }
  }
}

TEST_CASE("Pinsker inequality on a 100 x 100 grid") {
  int checked = 0;
  for (int i = 1; i <= 100; ++i) {
    for (int j = 1; j <= 100; ++j) {
      const double x = i / 101.0, y = j / 101.0;
      CHECK(kl_div(kBern, x, y) >= 2.0 * (x - y) * (x - y) - 1e-15);
      ++checked;
    }
  }
  CHECK(checked == 10000);
}

TEST_CASE("Gaussian kl_div is symmetric, Bernoulli is not") {
  CHECK(kl_div(kGauss, 0.1, 0.8) == kl_div(kGauss, 0.8, 0.1));
  CHECK(kl_div(kBern, 0.7, 0.2) != doctest::Approx(kl_div(kBern, 0.2, 0.7)));
  CHECK(kl_div(kBern, 0.1, 0.8) != doctest::Approx(kl_div(kBern, 0.8, 0.1)));
}

TEST_CASE("asymptotic lower-bound rate") {
  CHECK(asymptotic_lb_rate(BanditInstance(kGauss, {0.7, 0.2})) == doctest::Approx(4.0));
  CHECK(std::abs(asymptotic_lb_rate(BanditInstance(kBern, {0.7, 0.2})) - 0.9361353) <= 1e-5);
  CHECK(asymptotic_lb_rate(BanditInstance(kBern, {0.4})) == 0.0);
  CHECK(asymptotic_lb_rate(BanditInstance(kGauss, {0.7, 0.2, 0.2, 0.2})) == doctest::Approx(12.0));
}
