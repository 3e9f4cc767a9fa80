#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "eocp/rng.hpp"

using eocp::philox4x32;
using eocp::RngStream;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using Block = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream output is a pure function of seed, index and position") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  std::vector<double> first;
  for (int i = 0; i < 100; ++i) first.push_back(a.normal());
  for (int i = 0; i < 100; ++i) CHECK(b.normal_at(i) == first[i]);
  a.seek(37);
  CHECK(a.normal() == first[37]);
  CHECK(a.position() == 38);
}

TEST_CASE("distinct seeds, indices and child tags give distinct streams") {
  std::set<std::uint64_t> heads;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
      RngStream s(seed, idx);
      heads.insert(s.bits_at(0));
      for (std::uint64_t tag = 0; tag < 4; ++tag) heads.insert(s.child(tag).bits_at(0));
    }
  }
  CHECK(heads.size() == 4 * 4 * 5);
}

TEST_CASE("child streams are deterministic and start at position zero") {
  RngStream parent(3, 9);
  parent.seek(1000);
  const RngStream c1 = parent.child(5);
  const RngStream c2 = RngStream(3, 9).child(5);
  CHECK(c1.position() == 0);
  CHECK(c1.bits_at(12) == c2.bits_at(12));
}

TEST_CASE("uniform draws lie in [0, 1) with the right moments") {
  RngStream s(1, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sq / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal draws have zero mean and unit variance") {
  RngStream s(1, 1);
  const int n = 400000;
  double sum = 0.0, sq = 0.0;
  int beyond_two = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
    if (std::abs(z) > 2.0) ++beyond_two;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(static_cast<double>(beyond_two) / n == doctest::Approx(0.0455).epsilon(0.05));
}

TEST_CASE("independent streams are uncorrelated") {
  RngStream a(1, 0), b(1, 1);
  const int n = 200000;
  double cross = 0.0;
  for (int i = 0; i < n; ++i) cross += a.normal() * b.normal();
  CHECK(std::abs(cross / n) < 4.0 / std::sqrt(n));
}

TEST_CASE("satisfies UniformRandomBitGenerator") {
  static_assert(std::uniform_random_bit_generator<RngStream>);
  RngStream s(5, 5);
  std::uniform_int_distribution<int> dist(1, 6);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 60000; ++i) ++counts[dist(s)];
  for (int face = 1; face <= 6; ++face) CHECK(counts[face] == doctest::Approx(10000).epsilon(0.05));
}
