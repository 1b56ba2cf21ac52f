#pragma once

#include <vector>

#include "riskeysim/ris.hpp"
#include "riskeysim/rng.hpp"

namespace riskeysim {

struct OptimizerConfig {
  int max_iters = 2000;
  enum class StepRule { Fixed, Backtracking } step_rule = StepRule::Fixed;
  int restarts = 8;          // 1 eigen-seeded + (restarts - 1) random
  double tolerance = 1e-8;   // relative objective change for convergence

  void validate() const;
};

struct OptimizeResult {
  PhaseVector w;
  double objective = 0.0;
  std::vector<double> trace;  // objective per accepted iterate (best restart)
  bool eig_fallback = false;  // power iteration failed to settle
};

// Phases aligned with the principal eigenvector of G (power iteration);
// used as one restart seed. Falls back to a random phase draw when the
// iteration does not settle, reported via *fallback.
PhaseVector eig_phase_init(const DeceptionOperator& g, double amp_gain,
                           Rng& fallback_rng, bool* fallback = nullptr);

// Maximizes w^H G w over |w_m|^2 = A_E by projected ascent on the
// per-element power boundary: the candidate proj(w + step * 2 G w) with a
// large fixed step is the minorize-maximize update sqrt(A_E) *
// exp(j arg(G w)), whose objective never decreases for PSD G. Best result
// over all restarts is returned; feasibility is exact by construction.
OptimizeResult optimize_phase(const DeceptionOperator& g, double amp_gain,
                              const OptimizerConfig& cfg, Rng& rng);

}  // namespace riskeysim
