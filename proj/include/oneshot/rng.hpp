#pragma once

#include <array>
#include <cstdint>

namespace oneshot {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3",
// SC'11). Pure function of (counter, key); no internal state.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr int kRounds = 10;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int r = 0; r < kRounds; ++r) {
      if (r > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

// Stream of uniforms addressed by (seed, stream index). The seed is the
// Philox key; the counter is (draw block, 0, stream lo, stream hi). Each
// block yields two doubles with 53 random bits each.
//
// Two streams with different indices never share a counter, so trajectory k
// of a Monte Carlo run draws the same numbers regardless of which thread
// evaluates it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  // Uniform on [0, 1).
  double uniform() noexcept {
    if (cached_ == 0) refill();
    return buffer_[2 - cached_--];
  }

  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept {
    const Philox4x32::Counter ctr{block_, 0u, static_cast<std::uint32_t>(stream_),
                                  static_cast<std::uint32_t>(stream_ >> 32)};
    ++block_;
    const auto out = Philox4x32::generate(ctr, key_);
    const auto to_double = [](std::uint32_t hi, std::uint32_t lo) {
      const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
      return static_cast<double>(bits) * 0x1.0p-53;
    };
    buffer_[0] = to_double(out[0], out[1]);
    buffer_[1] = to_double(out[2], out[3]);
    cached_ = 2;
  }

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint32_t block_ = 0;
  int cached_ = 0;
  std::array<double, 2> buffer_{};
};

}  // namespace oneshot
