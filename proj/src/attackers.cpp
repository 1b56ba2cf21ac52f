#include "riskeysim/attackers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riskeysim/util.hpp"

namespace riskeysim {

std::complex<double> sample_attacker_channel(const ScenarioConfig& cfg,
                                             const Eigen::Vector3d& node,
                                             const Eigen::Vector3d& attacker,
                                             Rng& rng) {
  const double dist = (node - attacker).norm();
  if (!(dist > 0.0))
    throw std::invalid_argument("sample_attacker_channel: coincident nodes");
  const double p_los = cfg.los_power(dist);
  const double p_nlos = cfg.nlos_power(dist);
  return std::sqrt(p_los) + rng.cnormal(p_nlos);
}

AttackerRound relay_round(const RelayConfig& cfg, const DirectChannel& h,
                          const ScenarioConfig& scenario, Rng& rng) {
  cfg.validate();
  const std::complex<double> g_ae =
      sample_attacker_channel(scenario, scenario.pos_alice, cfg.position, rng);
  const std::complex<double> g_be =
      sample_attacker_channel(scenario, scenario.pos_bob, cfg.position, rng);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const std::complex<double> transit = std::polar(std::sqrt(cfg.gain), phase);
  const std::complex<double> psi_e = transit * g_ae * g_be;

  AttackerRound r;
  const std::complex<double> n_a =
      rng.cnormal(2.0 * scenario.noise_var / scenario.pilot_power_b);
  const std::complex<double> n_b =
      rng.cnormal(2.0 * scenario.noise_var / scenario.pilot_power_a);
  const std::complex<double> n_e =
      rng.cnormal(2.0 * scenario.noise_var / scenario.pilot_power_a);
  r.psi_a = h.h + psi_e + n_a;
  r.psi_b = h.h + psi_e + n_b;
  r.psi_e = psi_e + n_e;
  return r;
}

double relay_inserted_variance(const RelayConfig& cfg,
                               const ScenarioConfig& scenario) {
  const double d_ae = (scenario.pos_alice - cfg.position).norm();
  const double d_be = (scenario.pos_bob - cfg.position).norm();
  const double pa = scenario.los_power(d_ae) + scenario.nlos_power(d_ae);
  const double pb = scenario.los_power(d_be) + scenario.nlos_power(d_be);
  return cfg.gain * pa * pb;
}

AttackerRound spoof_round(const SpoofingConfig& cfg, const DirectChannel& h,
                          const ScenarioConfig& scenario, Rng& rng) {
  cfg.validate();
  const std::complex<double> g_ae =
      sample_attacker_channel(scenario, scenario.pos_alice, cfg.position, rng);

  AttackerRound r;
  const std::complex<double> n_a =
      rng.cnormal(2.0 * scenario.noise_var / scenario.pilot_power_b);
  const std::complex<double> n_b =
      rng.cnormal(2.0 * scenario.noise_var / scenario.pilot_power_a);
  const std::complex<double> n_e =
      rng.cnormal(2.0 * scenario.noise_var / scenario.pilot_power_a);
  r.psi_a = h.h + std::sqrt(cfg.spoof_gain) * g_ae + n_a;
  r.psi_b = h.h + n_b;
  r.psi_e = g_ae + n_e;
  return r;
}

double detection_mse(std::span<const std::pair<std::complex<double>,
                                               std::complex<double>>> rounds) {
  if (rounds.empty()) throw std::invalid_argument("detection_mse: empty input");
  double acc = 0.0;
  for (const auto& [a, b] : rounds) acc += std::norm(a - b);
  return acc / static_cast<double>(rounds.size());
}

std::optional<double> undetectable_region(
    std::span<const std::pair<double, double>> gain_mse_curve,
    double benchmark_mse, double detection_snr_db) {
  const double limit = benchmark_mse * db_to_linear(detection_snr_db);
  std::optional<double> threshold;
  for (const auto& [gain, mse] : gain_mse_curve) {
    if (mse <= limit && (!threshold || gain > *threshold)) threshold = gain;
  }
  return threshold;
}

}  // namespace riskeysim
