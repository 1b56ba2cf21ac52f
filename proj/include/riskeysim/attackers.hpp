#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>

#include "riskeysim/channel.hpp"
#include "riskeysim/config.hpp"
#include "riskeysim/rng.hpp"

namespace riskeysim {

// One probing round under a comparison attacker: Alice's and Bob's channel
// estimates and the attacker's own estimate.
struct AttackerRound {
  std::complex<double> psi_a{0.0, 0.0};
  std::complex<double> psi_b{0.0, 0.0};
  std::complex<double> psi_e{0.0, 0.0};
};

// Single-antenna Rician channel toward an attacker node, following the
// same path-loss laws as the RIS links reduced to one element: mean
// sqrt(C0 d^-aL), NLoS variance C0 d^-aN.
std::complex<double> sample_attacker_channel(const ScenarioConfig& cfg,
                                             const Eigen::Vector3d& node,
                                             const Eigen::Vector3d& attacker,
                                             Rng& rng);

// Untrust relay: inserts psi_E = w~ g~_AE g~_BE with |w~|^2 = gain and a
// fresh random transit phase, keeping reciprocity. The exact inserted
// variance is gain * (P_AE^L + P_AE^N)(P_BE^L + P_BE^N).
AttackerRound relay_round(const RelayConfig& cfg, const DirectChannel& h,
                          const ScenarioConfig& scenario, Rng& rng);
double relay_inserted_variance(const RelayConfig& cfg,
                               const ScenarioConfig& scenario);

// Pilot-spoofing attacker: contaminates Alice's probe only, destroying
// reciprocity; psi_A = h + sqrt(spoof_gain) g~_AE + n, psi_B = h + n.
AttackerRound spoof_round(const SpoofingConfig& cfg, const DirectChannel& h,
                          const ScenarioConfig& scenario, Rng& rng);

// Mean of |psi_A - psi_B|^2 over rounds.
double detection_mse(std::span<const std::pair<std::complex<double>,
                                               std::complex<double>>> rounds);

// Largest gain whose MSE stays within detection_snr_db of the benchmark
// floor (MSE_dBW <= benchmark_dBW + SNR_dB); nullopt when no point
// qualifies. The curve is (gain, mse) pairs ordered by gain.
std::optional<double> undetectable_region(
    std::span<const std::pair<double, double>> gain_mse_curve,
    double benchmark_mse, double detection_snr_db);

}  // namespace riskeysim
