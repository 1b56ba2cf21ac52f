#include "riskeysim/phase_opt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riskeysim {

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("optimizer: max_iters >= 1");
  if (restarts < 1) throw std::invalid_argument("optimizer: restarts >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("optimizer: tolerance > 0");
}

namespace {

Eigen::VectorXd arg_of(const Eigen::VectorXcd& v, const Eigen::VectorXd& keep) {
  Eigen::VectorXd phases(v.size());
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    const std::complex<double> z = v[m];
    phases[m] = (std::norm(z) > 0.0) ? std::arg(z) : keep[m];
  }
  return phases;
}

struct AscentOut {
  PhaseVector w;
  double objective;
  std::vector<double> trace;
};

AscentOut ascend(const DeceptionOperator& g, PhaseVector w,
                 const OptimizerConfig& cfg) {
  Eigen::VectorXcd wv = w.weights();
  double obj = g.quad(wv);
  std::vector<double> trace{obj};
  double step = 1.0;
  int flat = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Eigen::VectorXcd grad = g.apply(wv);  // gradient is 2 G w
    PhaseVector cand = w;
    if (cfg.step_rule == OptimizerConfig::StepRule::Fixed) {
      cand.phases = arg_of(grad, w.phases);
    } else {
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt) {
        PhaseVector trial = w;
        trial.phases = arg_of(wv + step * 2.0 * grad, w.phases);
        if (g.quad(trial.weights()) >= obj) {
          cand = trial;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    const Eigen::VectorXcd cand_w = cand.weights();
    const double cand_obj = g.quad(cand_w);
    if (cand_obj < obj) break;  // keep the sequence non-decreasing
    const double rel = (cand_obj - obj) / std::max(cand_obj, 1e-300);
    w = cand;
    wv = cand_w;
    obj = cand_obj;
    trace.push_back(obj);
    flat = (rel < cfg.tolerance) ? flat + 1 : 0;
    if (flat >= 5) break;
  }
  return {std::move(w), obj, std::move(trace)};
}

}  // namespace

PhaseVector eig_phase_init(const DeceptionOperator& g, double amp_gain,
                           Rng& fallback_rng, bool* fallback) {
  const int m = g.size();
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(m, {1.0, 0.0});
  v.normalize();
  double prev = 0.0;
  bool settled = false;
  for (int it = 0; it < 300; ++it) {
    Eigen::VectorXcd next = g.apply(v);
    const double norm = next.norm();
    if (!(norm > 0.0)) break;  // G v = 0; any direction is principal enough
    next /= norm;
    const double change = std::abs(norm - prev);
    prev = norm;
    v = next;
    if (it > 2 && change <= 1e-10 * std::max(norm, 1e-300)) {
      settled = true;
      break;
    }
  }
  if (fallback) *fallback = false;
  PhaseVector w;
  w.amp_gain = amp_gain;
  if (!settled && prev == 0.0) {
    // Zero operator: phases are immaterial.
    w.phases = Eigen::VectorXd::Zero(m);
    return w;
  }
  if (!settled) {
    if (fallback) *fallback = true;
    return PhaseVector::random(m, amp_gain, fallback_rng);
  }
  w.phases = arg_of(v, Eigen::VectorXd::Zero(m));
  return w;
}

OptimizeResult optimize_phase(const DeceptionOperator& g, double amp_gain,
                              const OptimizerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!(amp_gain > 0.0))
    throw std::invalid_argument("optimize_phase: amp_gain must be > 0");
  const int m = g.size();

  OptimizeResult best;
  best.objective = -1.0;
  for (int r = 0; r < cfg.restarts; ++r) {
    PhaseVector init;
    bool fb = false;
    if (r == 0) {
      init = eig_phase_init(g, amp_gain, rng, &fb);
    } else {
      init = PhaseVector::random(m, amp_gain, rng);
    }
    AscentOut out = ascend(g, std::move(init), cfg);
    if (out.objective > best.objective) {
      best.w = std::move(out.w);
      best.objective = out.objective;
      best.trace = std::move(out.trace);
      best.eig_fallback = fb && r == 0;
    }
  }
  return best;
}

}  // namespace riskeysim
