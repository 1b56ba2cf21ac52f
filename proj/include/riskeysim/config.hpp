#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>

#include "riskeysim/geometry.hpp"

namespace riskeysim {

// Full experiment description. All powers and gains are linear; dB-valued
// JSON inputs carry a "_db" / "_dbw" suffix and are converted at load time.
struct ScenarioConfig {
  Eigen::Vector3d pos_alice{0.0, 0.0, 0.0};
  Eigen::Vector3d pos_bob{0.0, 50.0, 0.0};
  Eigen::Vector3d pos_eve{0.0, 10.0, 5.0};

  double c0 = 1e-3;          // path loss at 1 m reference
  double alpha_los = 2.0;    // LoS path-loss exponent
  double alpha_nlos = 3.0;   // NLoS path-loss exponent
  int iota = 4;              // NLoS Rayleigh path count (LoS is separate)
  double lambda = 0.1;       // carrier wavelength (m)
  int mx = 10;
  int my = 10;
  double elem_spacing = 0.1 / 8.0;  // element pitch d, lambda/8 in presets

  double pilot_power_a = 0.1;  // ||x_A||^2 (W)
  double pilot_power_b = 0.1;  // ||x_B||^2 (W)
  double twoway_power = 1.0;   // variance of q_A, q_B (W)
  double noise_var = 1e-11;    // sigma_n^2 (W); receiver noise is CN(0, 2 sigma_n^2)

  double amp_gain = 1.0;  // A_E (linear)
  double beta = 0.1;      // quantizer threshold parameter, [0, 0.5)
  long trials = 100000;
  std::uint64_t seed = 1;

  int m_elements() const { return mx * my; }
  UpaGeometry geometry() const { return {mx, my, elem_spacing}; }
  double d_ab() const { return (pos_alice - pos_bob).norm(); }
  double d_ae() const { return (pos_alice - pos_eve).norm(); }
  double d_be() const { return (pos_bob - pos_eve).norm(); }

  // Linear path gains of one RIS link.
  double los_power(double dist) const { return c0 * std::pow(dist, -alpha_los); }
  double nlos_power(double dist) const { return c0 * std::pow(dist, -alpha_nlos); }

  void validate() const;  // throws ConfigError

  static ScenarioConfig section_v_preset();
  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RelayConfig {
  double gain = 1e6;  // ||w~||^2, linear
  Eigen::Vector3d position{0.0, 10.0, 5.0};

  void validate() const;
  static RelayConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SpoofingConfig {
  double spoof_gain = 1.0;  // E_s / ||x_B||^2, linear
  Eigen::Vector3d position{0.0, 10.0, 5.0};
  double detection_snr_db = 1.0;

  void validate() const;
  static SpoofingConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Knobs of the Monte Carlo harness itself (rounds, scatterer epochs,
// dictionary resolution, sensors, threading).
struct HarnessConfig {
  long rounds_per_point = 100000;
  int epochs_per_point = 16;      // scatterer epochs; angles fixed within one
  bool per_round_angles = false;  // resample path angles every round
  int dict_grid_el = 64;
  int dict_grid_az = 64;
  int sensors = 20;  // |C|, channel sensors / RF chains
  int threads = 1;
  bool eve_drop_counts_as_mismatch = true;  // convention for Pr{kA=kB!=kE}
  bool snap_angles_to_grid = false;         // on-grid mode for CS diagnostics
  int optimizer_restarts = 8;
  int optimizer_max_iters = 2000;

  void validate() const;
  static HarnessConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Whole config document: a ScenarioConfig at the top level, with optional
// "relay", "spoofing" and "harness" sections.
struct ConfigDocument {
  ScenarioConfig scenario;
  RelayConfig relay;
  SpoofingConfig spoofing;
  HarnessConfig harness;

  static ConfigDocument from_json(const nlohmann::json& j);
  static ConfigDocument load_file(const std::string& path);
  nlohmann::json to_json() const;
  std::uint64_t hash() const;
};

}  // namespace riskeysim
