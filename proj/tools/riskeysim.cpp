#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "riskeysim/config.hpp"
#include "riskeysim/experiment.hpp"
#include "riskeysim/theory.hpp"
#include "riskeysim/util.hpp"
#include "riskeysim/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw riskeysim::ConfigError("cannot open output file '" + path + "'");
  out << content;
}

struct RatioRange {
  double lo = -20.0;
  double hi = 30.0;
  double step = 1.0;
};

RatioRange parse_range(const std::string& s) {
  RatioRange r;
  if (s.empty()) return r;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &r.lo, &r.hi, &r.step) != 3 ||
      !(r.step > 0.0) || r.hi < r.lo)
    throw riskeysim::ConfigError("--ratio-db expects min:max:step with step > 0");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for adversarial-RIS attacks on "
               "physical-layer secret key generation"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a figure preset and emit CSV");
  std::string figure, config_path, out_path = "-";
  std::uint64_t seed = 0;
  bool seed_set = false;
  long rounds = 0;
  int threads = 0;
  run->add_option("--figure", figure, "Preset id: fig1b, fig2 ... fig8")->required();
  run->add_option("--config", config_path, "Scenario JSON (defaults built in)");
  run->add_option("--out", out_path, "Output CSV path ('-' = stdout)");
  run->add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--rounds", rounds, "Override Monte Carlo rounds per point");
  run->add_option("--threads", threads, "Worker threads (default: hardware)");

  // theory
  auto* theory = app.add_subcommand(
      "theory", "Emit the theoretical key-match-rate curve as CSV");
  double beta = 0.1;
  std::string ratio_spec;
  std::string theory_out = "-";
  theory->add_option("--beta", beta, "Quantizer threshold parameter")->required();
  theory->add_option("--ratio-db", ratio_spec,
                     "Variance ratio sweep sigma_E^2/sigma_h^2 in dB, min:max:step");
  theory->add_option("--out", theory_out, "Output CSV path ('-' = stdout)");

  // validate
  auto* validate = app.add_subcommand("validate", "Run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      riskeysim::ConfigDocument doc;
      if (!config_path.empty())
        doc = riskeysim::ConfigDocument::load_file(config_path);
      if (seed_set) doc.scenario.seed = seed;
      doc.harness.threads =
          threads > 0 ? threads
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
      riskeysim::ExperimentSpec spec = riskeysim::figure_preset(figure, doc);
      if (rounds > 0) spec.harness.rounds_per_point = rounds;
      const riskeysim::FigureResult result = riskeysim::run_figure(spec);
      write_output(out_path, riskeysim::render_csv(spec, result));
      return kExitOk;
    }
    if (theory->parsed()) {
      if (!(beta >= 0.0 && beta < 0.5))
        throw riskeysim::ConfigError("--beta must be in [0, 0.5)");
      const RatioRange r = parse_range(ratio_spec);
      std::string csv = "ratio_db,kmr\n";
      char line[64];
      for (double v = r.lo; v <= r.hi + 1e-9; v += r.step) {
        const double ratio = riskeysim::db_to_linear(v / 2.0);
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", v,
                      riskeysim::theoretical_kmr({ratio, beta}));
        csv += line;
      }
      write_output(theory_out, csv);
      return kExitOk;
    }
    if (validate->parsed()) {
      return riskeysim::run_validation(std::cout) ? kExitOk : kExitInvariant;
    }
  } catch (const riskeysim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
