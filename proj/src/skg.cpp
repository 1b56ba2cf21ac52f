#include "riskeysim/skg.hpp"

#include <cmath>
#include <stdexcept>

namespace riskeysim {

ProbeRound csi_probe(const DirectChannel& h, std::complex<double> h_e,
                     const ScenarioConfig& cfg, Rng& rng) {
  if (!(cfg.pilot_power_a > 0.0) || !(cfg.pilot_power_b > 0.0))
    throw std::invalid_argument("csi_probe: pilot powers must be positive");
  ProbeRound r;
  const std::complex<double> combined = h.h + h_e;
  r.noise_a = rng.cnormal(2.0 * cfg.noise_var / cfg.pilot_power_b);
  r.noise_b = rng.cnormal(2.0 * cfg.noise_var / cfg.pilot_power_a);
  r.h_a_hat = combined + r.noise_a;
  r.h_b_hat = combined + r.noise_b;
  return r;
}

ProbeRound twoway_probe(const DirectChannel& h, std::complex<double> h_e,
                        const ScenarioConfig& cfg, Rng& rng) {
  if (!(cfg.twoway_power > 0.0))
    throw std::invalid_argument("twoway_probe: twoway_power must be positive");
  ProbeRound r;
  const std::complex<double> combined = h.h + h_e;
  r.q_a = rng.cnormal(cfg.twoway_power);
  r.q_b = rng.cnormal(cfg.twoway_power);
  const std::complex<double> n_a = rng.cnormal(2.0 * cfg.noise_var);
  const std::complex<double> n_b = rng.cnormal(2.0 * cfg.noise_var);
  // v_A = h_A q_B + n_A received at Alice, then multiplied by her own q_A.
  r.noise_a = n_a * r.q_a;
  r.noise_b = n_b * r.q_b;
  r.phi_a_hat = combined * r.q_a * r.q_b + r.noise_a;
  r.phi_b_hat = combined * r.q_a * r.q_b + r.noise_b;
  return r;
}

KeyStream quantize_block(std::span<const double> features, double beta) {
  if (features.size() < 2)
    throw std::invalid_argument("quantize_block: block length must be >= 2");
  if (!(beta >= 0.0 && beta <= 0.5))
    throw std::invalid_argument("quantize_block: beta must be in [0, 0.5]");

  const std::size_t n = features.size();
  double mean = 0.0;
  for (double z : features) mean += z;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double z : features) var += (z - mean) * (z - mean);
  var /= static_cast<double>(n);

  KeyStream ks;
  ks.mean = mean;
  ks.stddev = std::sqrt(var);
  ks.gamma1 = mean + beta * ks.stddev;
  ks.gamma0 = mean - beta * ks.stddev;
  ks.degenerate = !(ks.stddev > 0.0);
  ks.outcomes.resize(n, Bit::Dropped);
  if (ks.degenerate) return ks;
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i] > ks.gamma1)
      ks.outcomes[i] = Bit::One;
    else if (features[i] < ks.gamma0)
      ks.outcomes[i] = Bit::Zero;
  }
  return ks;
}

std::string KeyStream::to_chars() const {
  std::string s;
  s.reserve(outcomes.size());
  for (Bit b : outcomes)
    s.push_back(b == Bit::One ? '1' : (b == Bit::Zero ? '0' : '-'));
  return s;
}

double key_match_rate(const KeyStream& a, const KeyStream& b) {
  if (a.outcomes.size() != b.outcomes.size())
    throw std::invalid_argument("key_match_rate: stream length mismatch");
  if (a.outcomes.empty()) throw std::invalid_argument("key_match_rate: empty streams");
  std::size_t match = 0;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i)
    if (a.outcomes[i] != Bit::Dropped && a.outcomes[i] == b.outcomes[i]) ++match;
  return static_cast<double>(match) / static_cast<double>(a.outcomes.size());
}

double available_key_rate(const KeyStream& a, const KeyStream& b,
                          const KeyStream& e, bool eve_drop_counts_as_mismatch) {
  if (a.outcomes.size() != b.outcomes.size() ||
      a.outcomes.size() != e.outcomes.size())
    throw std::invalid_argument("available_key_rate: stream length mismatch");
  if (a.outcomes.empty())
    throw std::invalid_argument("available_key_rate: empty streams");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (a.outcomes[i] == Bit::Dropped || a.outcomes[i] != b.outcomes[i]) continue;
    const Bit ev = e.outcomes[i];
    if (ev == Bit::Dropped) {
      if (eve_drop_counts_as_mismatch) ++hit;
    } else if (ev != a.outcomes[i]) {
      ++hit;
    }
  }
  return static_cast<double>(hit) / static_cast<double>(a.outcomes.size());
}

}  // namespace riskeysim
