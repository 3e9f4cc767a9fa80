#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "eocp/confidence.hpp"
#include "eocp/rng.hpp"
#include "oracles.hpp"

using namespace eocp;

namespace {
constexpr auto kGauss = RewardFamily::GaussianUnitVariance;
constexpr auto kBern = RewardFamily::Bernoulli;

ArmStat stat(std::uint64_t pulls, double mean) {
  ArmStat s;
  s.pulls = pulls;
  s.mean = mean;
  return s;
}
}  // namespace

TEST_CASE("exploration rate") {
  CHECK(exploration_rate(std::numbers::e) == doctest::Approx(1.0 + 4.0 * std::sqrt(2.0)));
  CHECK(std::abs(exploration_rate(1e6) - 34.8415976) <= 1e-6);
  CHECK(std::abs(exploration_rate(1e5) - 30.7070291) <= 1e-6);
  CHECK_THROWS_AS(exploration_rate(1.5), std::invalid_argument);
}

TEST_CASE("Hoeffding bonus") {
  CHECK(hoeffding_bonus(stat(4, 0.0), 8.0) == 2.0);
  CHECK(hoeffding_bonus(stat(1, 0.0), 2.0) == 2.0);
  CHECK(std::abs(hoeffding_bonus(stat(2232, 0.0), 34.8416) - 0.17669) <= 1e-4);
  CHECK(hoeffding_ucb(stat(4, 0.5), 8.0) == 2.5);
  CHECK(hoeffding_lcb(stat(4, 0.5), 8.0) == -1.5);
  CHECK_THROWS_AS(hoeffding_bonus(stat(0, 0.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_bonus(stat(3, 0.0), 0.0), std::invalid_argument);
}

TEST_CASE("running mean update") {
  ArmStat s = stat(1, 0.4);
  s.record(0.6);
  CHECK(s.pulls == 2);
  CHECK(s.mean == doctest::Approx(0.5));
  ArmStat fresh;
  fresh.record(-3.25);
  CHECK(fresh.pulls == 1);
  CHECK(fresh.mean == -3.25);

  RngStream rng(1, 0);
  ArmStat run;
  std::vector<double> xs;
  for (int i = 0; i < 10000; ++i) {
    xs.push_back(rng.normal());
    run.record(xs.back());
  }
  double batch = 0.0;
  for (double x : xs) batch += x;
  batch /= static_cast<double>(xs.size());
  CHECK(std::abs(run.mean - batch) <= 1e-12);
}

TEST_CASE("kl_upper and kl_lower examples") {
  CHECK(kl_upper(kGauss, stat(2, 0.0), 1.0) == doctest::Approx(1.0));
  CHECK(kl_lower(kGauss, stat(2, 0.0), 1.0) == doctest::Approx(-1.0));
  CHECK(kl_upper(kBern, stat(5, 1.0), 2.0) == 1.0);
  CHECK(kl_lower(kBern, stat(5, 0.0), 2.0) == 0.0);
  CHECK(std::abs(kl_upper(kBern, stat(10, 0.5), std::log(10.0)) - 0.8037444) <= 1e-6);
  CHECK(std::abs(kl_lower(kBern, stat(10, 0.5), std::log(10.0)) - 0.1962556) <= 1e-6);
  CHECK_THROWS_AS(kl_upper(kBern, stat(0, 0.5), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kl_lower(kGauss, stat(0, 0.5), 1.0), std::invalid_argument);
}

TEST_CASE("Bernoulli KL bounds match a fine grid scan") {
  RngStream rng(11, 0);
  for (int i = 0; i < 25; ++i) {
    const std::uint64_t n = 1 + static_cast<std::uint64_t>(rng.uniform() * 500);
    const double mean = std::round(rng.uniform() * static_cast<double>(n)) / static_cast<double>(n);
    const double l = 0.1 + rng.uniform() * 20.0;
    const ArmStat s = stat(n, mean);
    CHECK(std::abs(kl_upper(kBern, s, l) - oracle::grid_kl_upper(mean, n, l)) <= 1e-6);
    CHECK(std::abs(kl_lower(kBern, s, l) - oracle::grid_kl_lower(mean, n, l)) <= 1e-6);
  }
}

TEST_CASE("KL bounds bracket the mean") {
  RngStream rng(12, 0);
  for (int i = 0; i < 2000; ++i) {
    const ArmStat s = stat(1 + static_cast<std::uint64_t>(rng.uniform() * 1000), rng.uniform());
    const double l = 1e-3 + rng.uniform() * 40.0;
    for (auto fam : {kGauss, kBern}) {
      CHECK(kl_lower(fam, s, l) <= s.mean);
      CHECK(kl_upper(fam, s, l) >= s.mean);
    }
  }
}

TEST_CASE("kl_upper is monotone in l and in pulls") {
  RngStream rng(13, 0);
  for (int i = 0; i < 500; ++i) {
    const double mean = rng.uniform();
    const std::uint64_t n = 1 + static_cast<std::uint64_t>(rng.uniform() * 300);
    const double l = 0.01 + rng.uniform() * 20.0;
    const double up = kl_upper(kBern, stat(n, mean), l);
    CHECK(kl_upper(kBern, stat(n, mean), l * 1.5) >= up - kBisectionTolerance);
    CHECK(kl_upper(kBern, stat(n + 7, mean), l) <= up + kBisectionTolerance);
    CHECK(kl_lower(kBern, stat(n + 7, mean), l) >= kl_lower(kBern, stat(n, mean), l) - kBisectionTolerance);
  }
}

TEST_CASE("Gaussian KL bounds coincide with the Hoeffding bounds") {
  RngStream rng(14, 0);
  for (int i = 0; i < 1000; ++i) {
    const ArmStat s = stat(1 + static_cast<std::uint64_t>(rng.uniform() * 1000), rng.normal());
    const double l = 0.01 + rng.uniform() * 40.0;
    CHECK(std::abs(kl_upper(kGauss, s, l) - hoeffding_ucb(s, l)) <= kBisectionTolerance);
    CHECK(std::abs(kl_lower(kGauss, s, l) - hoeffding_lcb(s, l)) <= kBisectionTolerance);
  }
}

TEST_CASE("interior Bernoulli bound sits on the constraint") {
  RngStream rng(15, 0);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = 1 + static_cast<std::uint64_t>(rng.uniform() * 1000);
    const double mean = 0.01 + 0.98 * rng.uniform();
    const double l = 0.01 + rng.uniform() * 10.0;
    const double up = kl_upper(kBern, stat(n, mean), l);
    if (up >= 1.0) continue;
    const double lhs = static_cast<double>(n) * kl_div(kBern, mean, up);
    CHECK(lhs <= l);
    // KL slope is below 1/(up(1-up)); the bracket width bounds the gap.
    const double slack = static_cast<double>(n) * kBisectionTolerance / (up * (1.0 - up)) + 1e-12;
    CHECK(lhs >= l - slack);
  }
}

TEST_CASE("kl_min") {
  CHECK(kl_min(BanditInstance(kGauss, {0.7, 0.2})) == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(kl_min(BanditInstance(kGauss, {0.9, 0.3})) ==
        doctest::Approx(kl_div(kGauss, 0.3, 0.9)).epsilon(1e-9));
  const double bern = kl_min(BanditInstance(kBern, {0.7, 0.2}));
  CHECK(std::abs(bern - 0.5341108) <= 1e-6);
  CHECK(std::abs(bern - oracle::grid_kl_min_bernoulli(0.7, 0.2)) <= 1e-6);
  CHECK_THROWS_AS(kl_min(BanditInstance(kGauss, {0.7})), std::invalid_argument);
}

TEST_CASE("bisection helper") {
  const double root = bisect_sign_change([](double x) { return 2.0 - x * x; }, 0.0, 2.0);
  CHECK(std::abs(root - std::sqrt(2.0)) <= kBisectionTolerance);
}
