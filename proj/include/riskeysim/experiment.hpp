#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "riskeysim/config.hpp"

namespace riskeysim {

enum class Attacker { None, EveRis, Relay, Spoof };
enum class PhaseStrategy { Random, Optimized };
enum class SkgScheme { Csi, TwoWay };

struct VariantSpec {
  std::string id;
  Attacker attacker = Attacker::None;
  PhaseStrategy phase = PhaseStrategy::Random;
  SkgScheme scheme = SkgScheme::Csi;
  int mx = 10;  // RIS grid for EveRis variants
  int my = 10;
  // Attacker gain: taken from the sweep value (dB) when gain_from_sweep,
  // otherwise fixed_gain (linear; NaN = fall back to the scenario/attacker
  // config value).
  bool gain_from_sweep = false;
  double fixed_gain = std::numeric_limits<double>::quiet_NaN();
  int dict_grid = 0;  // beamspace grid per side; 0 = harness default
};

struct SweepSpec {
  // One of: "amp_gain_db", "gain_db", "beta", "pos_y", "ratio_db", "none".
  std::string name = "none";
  std::vector<double> values{0.0};
};

struct ExperimentSpec {
  std::string figure_id;
  SweepSpec sweep;
  std::vector<VariantSpec> variants;
  ScenarioConfig base;
  RelayConfig relay;
  SpoofingConfig spoofing;
  HarnessConfig harness;
};

struct ResultRow {
  double sweep_value = 0.0;
  std::string variant;
  double kmr_ae = 0.0;      // Pr{k_A = k_E}
  double kmr_ab = 0.0;      // Pr{k_A = k_B}
  double akr = 0.0;         // Pr{k_A = k_B != k_E}
  double mse_ab_dbw = 0.0;  // detection MSE between the two probes, dBW
  double stderr_kmr_ae = 0.0;
  long rounds = 0;
  std::uint64_t seed = 0;
};

struct FigureResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> metadata;  // per-variant header lines
};

// Builds the preset for one of the paper-scale experiments
// (fig1b, fig2 ... fig8). Scenario, attacker and base harness settings come
// from the document; the preset pins its sweep, variants, round counts,
// scatterer epochs and per-variant dictionary grids.
ExperimentSpec figure_preset(const std::string& figure_id,
                             const ConfigDocument& doc);

// One sweep point: `rounds` coherence rounds of the selected pipeline,
// deterministic in (cfg, variant, rounds, seed) regardless of thread count.
ResultRow run_point(const ScenarioConfig& cfg, const VariantSpec& variant,
                    long rounds, std::uint64_t seed,
                    const HarnessConfig& harness, const RelayConfig& relay = {},
                    const SpoofingConfig& spoofing = {});

FigureResult run_figure(const ExperimentSpec& spec);

// CSV with exactly the columns
//   sweep_value,variant,kmr_ae,kmr_ab,akr,mse_ab_dbw,stderr_kmr_ae,rounds,seed
// preceded by '#' header lines carrying provenance, config hash and
// per-variant metadata. Output is byte-stable for a given (spec, seed).
std::string render_csv(const ExperimentSpec& spec, const FigureResult& result);

}  // namespace riskeysim
