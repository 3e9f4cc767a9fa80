#include "eocp/rng.hpp"

#include <cmath>
#include <numbers>

namespace eocp {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) noexcept {
  const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept {
  philox_round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    philox_round(counter, key);
  }
  return counter;
}

RngStream RngStream::child(std::uint64_t tag) const noexcept {
  const std::uint64_t idx = mix64(stream_index_ ^ mix64(tag + 0x9E3779B97F4A7C15ull));
  return RngStream(master_seed_, idx);
}

std::array<std::uint32_t, 4> RngStream::block(std::uint64_t position) const noexcept {
  return philox4x32(
      {static_cast<std::uint32_t>(position), static_cast<std::uint32_t>(position >> 32),
       static_cast<std::uint32_t>(stream_index_),
       static_cast<std::uint32_t>(stream_index_ >> 32)},
      {static_cast<std::uint32_t>(master_seed_),
       static_cast<std::uint32_t>(master_seed_ >> 32)});
}

std::uint64_t RngStream::bits_at(std::uint64_t position) const noexcept {
  const auto b = block(position);
  return (std::uint64_t{b[1]} << 32) | b[0];
}

double RngStream::uniform_at(std::uint64_t position) const noexcept {
  return to_unit(bits_at(position));
}

double RngStream::normal_at(std::uint64_t position) const noexcept {
  const auto b = block(position);
  const std::uint64_t w1 = (std::uint64_t{b[1]} << 32) | b[0];
  const std::uint64_t w2 = (std::uint64_t{b[3]} << 32) | b[2];
  // u1 in (0, 1] keeps the log finite.
  const double u1 = static_cast<double>((w1 >> 11) + 1) * 0x1.0p-53;
  const double u2 = to_unit(w2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace eocp
