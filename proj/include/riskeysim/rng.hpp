#pragma once

#include <complex>
#include <cstdint>

namespace riskeysim {

// Counter-based random streams (Philox4x32-10, Salmon et al. SC'11).
//
// Every Monte Carlo consumer derives its own stream from
// (seed, stream tag, index), so per-round draws are identical no matter
// how rounds are partitioned across threads. The generator key is a
// mix of seed and stream tag; the round index sits in the high counter
// words and the in-stream draw counter in the low words.
class Rng {
 public:
  Rng(std::uint64_t key, std::uint64_t counter_hi);

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (pairs cached).
  double normal();

  // Circularly symmetric complex Gaussian with E|z|^2 = total_variance.
  std::complex<double> cnormal(double total_variance);

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t counter_hi_[2];
  std::uint64_t block_ = 0;
  std::uint32_t out_[4];
  int out_pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer, used to spread seeds and hash small integers.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over bytes; used for config hashes and string-keyed streams.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(std::string_view s);

// Well-known stream tags so independent consumers never collide.
namespace streams {
inline constexpr std::uint64_t kRound = 0x01;
inline constexpr std::uint64_t kEpochAngles = 0x02;
inline constexpr std::uint64_t kOptimizer = 0x03;
inline constexpr std::uint64_t kValidate = 0x07;
inline constexpr std::uint64_t kTest = 0x09;
}  // namespace streams

}  // namespace riskeysim
