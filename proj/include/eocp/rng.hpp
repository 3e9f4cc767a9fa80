#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace eocp {

// Philox4x32-10 block: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Counter-based random stream keyed by (master_seed, stream_index).
//
// Every draw is a pure function of (master_seed, stream_index, position): the
// key is the master seed and the counter is (position, stream_index). Each
// draw consumes exactly one 128-bit block, so a stream can be replayed from
// any position with seek(). Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
      : master_seed_(master_seed), stream_index_(stream_index) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  std::uint64_t position() const noexcept { return position_; }
  void seek(std::uint64_t position) noexcept { position_ = position; }

  // Derived stream with a hashed index; starts at position 0.
  RngStream child(std::uint64_t tag) const noexcept;

  std::array<std::uint32_t, 4> block(std::uint64_t position) const noexcept;

  std::uint64_t bits_at(std::uint64_t position) const noexcept;
  // Uniform on [0, 1).
  double uniform_at(std::uint64_t position) const noexcept;
  // Standard normal via Box-Muller over the two halves of one block.
  double normal_at(std::uint64_t position) const noexcept;

  result_type operator()() noexcept { return bits_at(position_++); }
  double uniform() noexcept { return uniform_at(position_++); }
  double normal() noexcept { return normal_at(position_++); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t position_ = 0;
};

}  // namespace eocp
