#include "riskeysim/rng.hpp"

#include <cmath>
#include <numbers>
#include <string_view>

namespace riskeysim {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

inline void philox_round(std::uint32_t c[4], std::uint32_t k0,
                         std::uint32_t k1) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mulhilo(kPhiloxM0, c[0], lo0, hi0);
  mulhilo(kPhiloxM1, c[2], lo1, hi1);
  const std::uint32_t n0 = hi1 ^ c[1] ^ k0;
  const std::uint32_t n1 = lo1;
  const std::uint32_t n2 = hi0 ^ c[3] ^ k1;
  const std::uint32_t n3 = lo0;
  c[0] = n0;
  c[1] = n1;
  c[2] = n2;
  c[3] = n3;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

Rng::Rng(std::uint64_t key, std::uint64_t counter_hi) {
  key_[0] = static_cast<std::uint32_t>(key);
  key_[1] = static_cast<std::uint32_t>(key >> 32);
  counter_hi_[0] = static_cast<std::uint32_t>(counter_hi);
  counter_hi_[1] = static_cast<std::uint32_t>(counter_hi >> 32);
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t index) {
  return Rng(mix64(seed ^ mix64(stream)), index);
}

void Rng::refill() {
  std::uint32_t c[4] = {static_cast<std::uint32_t>(block_),
                        static_cast<std::uint32_t>(block_ >> 32),
                        counter_hi_[0], counter_hi_[1]};
  std::uint32_t k0 = key_[0];
  std::uint32_t k1 = key_[1];
  for (int r = 0; r < 10; ++r) {
    philox_round(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  out_[0] = c[0];
  out_[1] = c[1];
  out_[2] = c[2];
  out_[3] = c[3];
  out_pos_ = 0;
  ++block_;
}

std::uint32_t Rng::next_u32() {
  if (out_pos_ >= 4) refill();
  return out_[out_pos_++];
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

std::complex<double> Rng::cnormal(double total_variance) {
  const double s = std::sqrt(0.5 * total_variance);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

}  // namespace riskeysim
