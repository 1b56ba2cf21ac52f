#include "riskeysim/validate.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "riskeysim/attackers.hpp"
#include "riskeysim/channel.hpp"
#include "riskeysim/experiment.hpp"
#include "riskeysim/phase_opt.hpp"
#include "riskeysim/ris.hpp"
#include "riskeysim/sensing.hpp"
#include "riskeysim/skg.hpp"
#include "riskeysim/theory.hpp"
#include "riskeysim/util.hpp"

namespace riskeysim {

namespace {

struct Checker {
  std::ostream& os;
  bool ok = true;

  void check(bool pass, const std::string& name) {
    os << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
    ok = ok && pass;
  }
};

}  // namespace

bool run_validation(std::ostream& os) {
  Checker c{os};
  const ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  const UpaGeometry geom = cfg.geometry();

  // Steering vectors: unit modulus and the 2x2 axis case.
  {
    Rng rng = Rng::for_stream(7, streams::kValidate, 0);
    bool unit = true;
    for (int k = 0; k < 16; ++k) {
      const double el = rng.uniform(-1.5, 1.5);
      const double az = rng.uniform(-1.5, 1.5);
      const Eigen::VectorXcd u = steering_vector(geom, el, az, cfg.lambda);
      for (int m = 0; m < u.size(); ++m)
        unit = unit && std::abs(std::abs(u[m]) - 1.0) < 1e-12;
    }
    c.check(unit, "steering vectors are unit-modulus");
  }

  // Direct-channel variance against the path-loss law.
  {
    Rng rng = Rng::for_stream(7, streams::kValidate, 1);
    double acc = 0.0;
    const int n = 20000;
    double var2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const DirectChannel d = sample_direct(cfg, rng);
      acc += std::norm(d.h);
      var2 = d.var2;
    }
    acc /= n;
    c.check(std::abs(acc / var2 - 1.0) < 0.05 && std::abs(var2 - 8e-9) < 1e-12,
            "direct channel variance matches C0 * d^-alpha");
  }

  // Fixed-phase variance w^H G w against Monte Carlo.
  {
    Rng rng = Rng::for_stream(7, streams::kValidate, 2);
    const LinkEpoch la = make_link_epoch(cfg, geom, Endpoint::Alice, std::nullopt, rng);
    const LinkEpoch lb = make_link_epoch(cfg, geom, Endpoint::Bob, std::nullopt, rng);
    const PhaseVector w = PhaseVector::random(geom.size(), 2.0, rng);
    const DeceptionStats st = stats_fixed_phase(w, la, lb);
    const Eigen::VectorXcd wv = w.weights();
    const int n = 20000;
    std::complex<double> mean{0.0, 0.0};
    std::vector<std::complex<double>> he(n);
    for (int i = 0; i < n; ++i) {
      const RisLinkChannel ga = sample_link_epoch(la, rng);
      const RisLinkChannel gb = sample_link_epoch(lb, rng);
      he[i] = deceiving_channel(wv, ga.g, gb.g);
      mean += he[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& v : he) var += std::norm(v - mean);
    var /= n;
    c.check(std::abs(0.5 * var / st.sigma_e2 - 1.0) < 0.08,
            "fixed-w deceiving-channel variance matches w^H G w");
  }

  // Quantizer symmetry and affine invariance.
  {
    Rng rng = Rng::for_stream(7, streams::kValidate, 3);
    std::vector<double> z(512), zneg(512), zaff(512);
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = rng.normal();
      zneg[i] = -z[i];
      zaff[i] = 3.5 * z[i] - 2.0;
    }
    const KeyStream a = quantize_block(z, 0.2);
    const KeyStream n = quantize_block(zneg, 0.2);
    const KeyStream f = quantize_block(zaff, 0.2);
    bool sym = true, aff = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const Bit x = a.outcomes[i];
      const Bit y = n.outcomes[i];
      sym = sym && ((x == Bit::Dropped && y == Bit::Dropped) ||
                    (x == Bit::One && y == Bit::Zero) ||
                    (x == Bit::Zero && y == Bit::One));
      aff = aff && (x == f.outcomes[i]);
    }
    c.check(sym, "quantizer: negation swaps one/zero outcomes");
    c.check(aff, "quantizer: affine-invariant outcomes");
  }

  // Noiseless on-grid sparse recovery; exact recovery needs the aperture
  // large against the beamspace grid, so this runs on an 80x80 RIS.
  {
    Rng rng = Rng::for_stream(7, streams::kValidate, 4);
    UpaGeometry big = geom;
    big.mx = big.my = 80;
    const Dictionary dict = build_dictionary(big, cfg.lambda, 6, 6);
    const SensingMatrix sense = place_sensors(dict, 20);
    const SensingOperator sd = make_sensing_operator(dict, sense);
    bool exact = true;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXcd g = Eigen::VectorXcd::Zero(big.size());
      for (int k = 0; k < 5; ++k)
        g += rng.cnormal(1.0) * dict.atom(static_cast<int>(rng.next_u64() % dict.atoms()));
      const SparseEstimate est = omp_recover(sense.select(g), sd, 5);
      exact = exact && (reconstruct(dict, est) - g).norm() < 1e-8 * g.norm();
    }
    c.check(exact, "OMP: noiseless on-grid recovery is exact");
  }

  // Optimizer feasibility, monotone ascent and dominance over random phases.
  {
    Rng rng = Rng::for_stream(7, streams::kValidate, 5);
    const LinkEpoch la = make_link_epoch(cfg, geom, Endpoint::Alice, std::nullopt, rng);
    const LinkEpoch lb = make_link_epoch(cfg, geom, Endpoint::Bob, std::nullopt, rng);
    const DeceptionOperator g = DeceptionOperator::from_links(la, lb);
    OptimizerConfig ocfg;
    const OptimizeResult res = optimize_phase(g, 1.0, ocfg, rng);
    bool feasible = true;
    const Eigen::VectorXcd wv = res.w.weights();
    for (int m = 0; m < wv.size(); ++m)
      feasible = feasible && std::abs(std::norm(wv[m]) - 1.0) < 1e-12;
    bool monotone = true;
    for (std::size_t i = 1; i < res.trace.size(); ++i)
      monotone = monotone && res.trace[i] >= res.trace[i - 1];
    double best_random = 0.0;
    for (int k = 0; k < 100; ++k) {
      const PhaseVector w = PhaseVector::random(geom.size(), 1.0, rng);
      best_random = std::max(best_random, g.quad(w.weights()));
    }
    c.check(feasible, "optimizer: |w_m|^2 = A_E exactly");
    c.check(monotone, "optimizer: objective non-decreasing");
    c.check(res.objective > best_random, "optimizer: beats 100 random phases");
  }

  // Theory: limits and bounds.
  {
    const double lim = kmr_limit(0.1);
    const double low = theoretical_kmr({0.0, 0.1});
    const double mid = theoretical_kmr({2.0, 0.1});
    c.check(std::abs(lim - 0.920344) < 1e-4, "theory: 2 Phi(-0.1) limit value");
    c.check(std::abs(low - 2.0 * normal_cdf(-0.1) * normal_cdf(-0.1)) < 1e-6,
            "theory: independence floor at ratio 0");
    c.check(low < mid && mid < lim, "theory: value between floor and ceiling");
  }

  // Detection: reciprocity dichotomy at small scale.
  {
    Rng rng = Rng::for_stream(7, streams::kValidate, 6);
    RelayConfig relay;
    relay.position = cfg.pos_eve;
    std::vector<std::pair<std::complex<double>, std::complex<double>>> probes;
    for (int i = 0; i < 5000; ++i) {
      const DirectChannel h = sample_direct(cfg, rng);
      const AttackerRound r = relay_round(relay, h, cfg, rng);
      probes.emplace_back(r.psi_a, r.psi_b);
    }
    const double mse = detection_mse(probes);
    const double bench = 2.0 * cfg.noise_var / cfg.pilot_power_a +
                         2.0 * cfg.noise_var / cfg.pilot_power_b;
    c.check(std::abs(mse / bench - 1.0) < 0.1,
            "relay keeps reciprocity: probe MSE at the noise benchmark");
  }

  // Thread-count independence of a miniature figure run.
  {
    ConfigDocument doc;
    ExperimentSpec spec = figure_preset("fig2", doc);
    spec.harness.rounds_per_point = 400;
    spec.harness.epochs_per_point = 2;
    spec.sweep.values = {0.0, 10.0};
    spec.variants.resize(2);
    spec.harness.threads = 1;
    const std::string csv1 = render_csv(spec, run_figure(spec));
    spec.harness.threads = 4;
    const std::string csv4 = render_csv(spec, run_figure(spec));
    c.check(csv1 == csv4, "harness: 1-thread and 4-thread CSV are identical");
  }

  os << (c.ok ? "validation passed" : "validation FAILED") << "\n";
  return c.ok;
}

}  // namespace riskeysim
