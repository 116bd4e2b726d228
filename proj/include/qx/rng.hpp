#pragma once

#include <array>
#include <cstdint>

namespace qx {

// Philox4x64-10 counter-based generator. A stream is addressed by
// (seed, replica, substream); draws within a stream consume blocks of
// four 64-bit words. Streams never overlap, and a stream can be rebuilt
// from its address alone, which is what the proposal replay logic in the
// sampler relies on.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t substream)
      : key_{seed, kKeyTag}, ctr_{0, substream, replica, 0}, pos_(4) {}

  std::uint64_t bits() {
    if (pos_ == 4) {
      buf_ = block(ctr_, key_);
      ++ctr_[0];
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  // Uniform on the open interval (0,1).
  double unit() { return (static_cast<double>(bits() >> 11) + 0.5) * 0x1p-53; }

  // Uniform integer in [0, n), Lemire multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(bits()) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t cut = (0 - n) % n;
      while (lo < cut) {
        m = static_cast<__uint128_t>(bits()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                            std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t hi0 = mulhi(kM0, ctr[0]), lo0 = kM0 * ctr[0];
      const std::uint64_t hi1 = mulhi(kM1, ctr[2]), lo1 = kM1 * ctr[2];
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;
  static constexpr std::uint64_t kKeyTag = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mulhi(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) >> 64);
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
  std::array<std::uint64_t, 4> buf_{};
  int pos_;
};

}  // namespace qx
