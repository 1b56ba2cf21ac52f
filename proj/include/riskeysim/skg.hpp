#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "riskeysim/channel.hpp"
#include "riskeysim/config.hpp"
#include "riskeysim/rng.hpp"

namespace riskeysim {

// One channel-probing round as seen by Alice and Bob.
struct ProbeRound {
  std::complex<double> h_a_hat{0.0, 0.0};  // CSI scheme
  std::complex<double> h_b_hat{0.0, 0.0};
  std::complex<double> phi_a_hat{0.0, 0.0};  // two-way scheme
  std::complex<double> phi_b_hat{0.0, 0.0};
  std::complex<double> q_a{0.0, 0.0};
  std::complex<double> q_b{0.0, 0.0};
  std::complex<double> noise_a{0.0, 0.0};  // recorded for diagnostics
  std::complex<double> noise_b{0.0, 0.0};
};

// Pilot-based channel estimation: h_hat = (h + h_E) + n_hat, with
// n_hat_A ~ CN(0, 2 sigma_n^2 / ||x_B||^2) and vice versa.
ProbeRound csi_probe(const DirectChannel& h, std::complex<double> h_e,
                     const ScenarioConfig& cfg, Rng& rng);

// Two-way cross multiplication: both sides multiply sent and received
// signals, phi_hat = (h + h_E) q_A q_B + eps_hat.
ProbeRound twoway_probe(const DirectChannel& h, std::complex<double> h_e,
                        const ScenarioConfig& cfg, Rng& rng);

enum class Bit : unsigned char { Zero = 0, One = 1, Dropped = 2 };

// Ternary quantizer outcomes of one feature block, with the thresholds
// gamma_1 = mean + beta * std and gamma_0 = mean - beta * std computed
// from the block itself (population std).
struct KeyStream {
  std::vector<Bit> outcomes;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  bool degenerate = false;  // zero-variance block, everything dropped

  std::string to_chars() const;  // '1' / '0' / '-' per round
};

KeyStream quantize_block(std::span<const double> features, double beta);

// Fraction of rounds where both parties emitted the same bit; a dropped
// round never matches. Joint probability over all rounds.
double key_match_rate(const KeyStream& a, const KeyStream& b);

// Pr{k_A = k_B != k_E}: fraction of rounds where a and b agree on a bit
// and e's outcome differs. By default a dropped Eve round counts as
// differing; eve_drop_counts_as_mismatch=false requires Eve to emit the
// opposite bit.
double available_key_rate(const KeyStream& a, const KeyStream& b,
                          const KeyStream& e,
                          bool eve_drop_counts_as_mismatch = true);

}  // namespace riskeysim
