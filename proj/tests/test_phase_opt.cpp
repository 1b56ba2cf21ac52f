#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riskeysim/channel.hpp"
#include "riskeysim/phase_opt.hpp"

using namespace riskeysim;
using cplx = std::complex<double>;

namespace {

DeceptionOperator from_dense(const Eigen::MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  return DeceptionOperator::from_factors(es.eigenvectors(), std::move(w));
}

DeceptionOperator random_psd(int m, Rng& rng) {
  Eigen::MatrixXcd b(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) b(i, j) = rng.cnormal(1.0);
  return from_dense(b * b.adjoint());
}

// Exhaustive 1-degree phase scan with the first phase fixed at zero
// (the objective is invariant under a global phase).
double grid_maximum(const DeceptionOperator& g, double amp) {
  const int m = g.size();
  REQUIRE(m <= 3);
  const double step = std::numbers::pi / 180.0;
  PhaseVector w;
  w.amp_gain = amp;
  w.phases = Eigen::VectorXd::Zero(m);
  double best = g.quad(w.weights());
  if (m == 1) return best;
  for (int i = 0; i < 360; ++i) {
    w.phases[1] = i * step;
    if (m == 2) {
      best = std::max(best, g.quad(w.weights()));
      continue;
    }
    for (int j = 0; j < 360; ++j) {
      w.phases[2] = j * step;
      best = std::max(best, g.quad(w.weights()));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("scalar and flat landscapes") {
  SUBCASE("M = 1 is phase-invariant") {
    Eigen::MatrixXcd g(1, 1);
    g(0, 0) = 3.5;
    const DeceptionOperator op = from_dense(g);
    Rng rng = Rng::for_stream(71, streams::kTest, 0);
    OptimizerConfig cfg;
    cfg.restarts = 2;
    const OptimizeResult r = optimize_phase(op, 2.0, cfg, rng);
    CHECK(r.objective == doctest::Approx(2.0 * 3.5).epsilon(1e-12));
  }
  SUBCASE("identity spectrum gives M * A_E everywhere") {
    const int m = 5;
    const DeceptionOperator op =
        from_dense(Eigen::MatrixXcd::Identity(m, m));
    Rng rng = Rng::for_stream(71, streams::kTest, 1);
    OptimizerConfig cfg;
    const OptimizeResult r = optimize_phase(op, 1.5, cfg, rng);
    CHECK(r.objective == doctest::Approx(m * 1.5).epsilon(1e-10));
  }
}

TEST_CASE("hand case: 2x2 coupling matrix") {
  Eigen::MatrixXcd g(2, 2);
  g << 2.0, 1.0, 1.0, 2.0;
  const DeceptionOperator op = from_dense(g);
  Rng rng = Rng::for_stream(72, streams::kTest, 0);
  OptimizerConfig cfg;
  const OptimizeResult r = optimize_phase(op, 1.0, cfg, rng);
  CHECK(r.objective == doctest::Approx(6.0).epsilon(1e-9));
  // Aligned phases up to a global rotation.
  const double delta = std::remainder(r.w.phases[0] - r.w.phases[1],
                                      2.0 * std::numbers::pi);
  CHECK(std::abs(delta) < 1e-4);
  CHECK(grid_maximum(op, 1.0) == doctest::Approx(6.0).epsilon(1e-3));
}

TEST_CASE("feasibility, monotone ascent and global-phase invariance") {
  Rng rng = Rng::for_stream(73, streams::kTest, 0);
  const DeceptionOperator op = random_psd(12, rng);
  OptimizerConfig cfg;
  const double amp = 3.0;
  const OptimizeResult r = optimize_phase(op, amp, cfg, rng);
  const Eigen::VectorXcd wv = r.w.weights();
  for (int m = 0; m < wv.size(); ++m)
    CHECK(std::abs(std::norm(wv[m]) - amp) <= 1e-12 * amp);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i] >= r.trace[i - 1]);
  const Eigen::VectorXcd rotated = std::polar(1.0, 1.234) * wv;
  CHECK(op.quad(rotated) == doctest::Approx(op.quad(wv)).epsilon(1e-12));
}

TEST_CASE("backtracking step rule also ascends") {
  Rng rng = Rng::for_stream(73, streams::kTest, 5);
  const DeceptionOperator op = random_psd(8, rng);
  OptimizerConfig cfg;
  cfg.step_rule = OptimizerConfig::StepRule::Backtracking;
  const OptimizeResult r = optimize_phase(op, 1.0, cfg, rng);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i] >= r.trace[i - 1]);
  const Eigen::VectorXcd wv = r.w.weights();
  for (int m = 0; m < wv.size(); ++m)
    CHECK(std::abs(std::norm(wv[m]) - 1.0) <= 1e-12);
}

TEST_CASE("small-M optimality against the brute-force grid") {
  Rng rng = Rng::for_stream(74, streams::kTest, 0);
  for (int m : {2, 3}) {
    for (int rep = 0; rep < 3; ++rep) {
      const DeceptionOperator op = random_psd(m, rng);
      OptimizerConfig cfg;
      const OptimizeResult r = optimize_phase(op, 1.0, cfg, rng);
      CHECK(r.objective >= 0.99 * grid_maximum(op, 1.0));
    }
  }
}

TEST_CASE("dominates random phase draws") {
  Rng rng = Rng::for_stream(75, streams::kTest, 0);
  for (int rep = 0; rep < 4; ++rep) {
    const DeceptionOperator op = random_psd(16, rng);
    OptimizerConfig cfg;
    const OptimizeResult r = optimize_phase(op, 1.0, cfg, rng);
    double best_random = 0.0;
    for (int k = 0; k < 100; ++k) {
      const PhaseVector w = PhaseVector::random(16, 1.0, rng);
      best_random = std::max(best_random, op.quad(w.weights()));
    }
    CHECK(r.objective > best_random);
  }
}

TEST_CASE("eigen-seeded initialization") {
  Rng rng = Rng::for_stream(76, streams::kTest, 0);
  SUBCASE("rank-1 alignment is optimal at once") {
    const int m = 6;
    Eigen::VectorXcd g(m);
    for (int i = 0; i < m; ++i) g[i] = std::polar(1.0, rng.uniform(0.0, 6.28));
    Eigen::MatrixXcd factors(m, 1);
    factors.col(0) = g;
    Eigen::VectorXd wts(1);
    wts[0] = 1.0;
    const DeceptionOperator op =
        DeceptionOperator::from_factors(factors, wts);
    bool fb = false;
    const PhaseVector w = eig_phase_init(op, 2.0, rng, &fb);
    CHECK(!fb);
    CHECK(op.quad(w.weights()) == doctest::Approx(2.0 * m * m).epsilon(1e-9));
  }
  SUBCASE("diagonal operator: phases are immaterial, objective is the trace") {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4, 4);
    g(2, 2) = 5.0;
    g(1, 1) = 1.0;
    const DeceptionOperator op = from_dense(g);
    bool fb = false;
    const PhaseVector w = eig_phase_init(op, 1.0, rng, &fb);
    CHECK(!fb);
    CHECK(op.quad(w.weights()) == doctest::Approx(6.0).epsilon(1e-8));
  }
  SUBCASE("init beats the average random draw") {
    const DeceptionOperator op = random_psd(4, rng);
    bool fb = false;
    const PhaseVector w = eig_phase_init(op, 1.0, rng, &fb);
    double acc = 0.0;
    for (int k = 0; k < 100; ++k)
      acc += op.quad(PhaseVector::random(4, 1.0, rng).weights());
    CHECK(op.quad(w.weights()) >= acc / 100.0);
  }
}

TEST_CASE("physical operator at scale stays feasible and dominant") {
  ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  cfg.mx = cfg.my = 40;
  Rng rng = Rng::for_stream(77, streams::kTest, 0);
  const UpaGeometry geom = cfg.geometry();
  const LinkEpoch la = make_link_epoch(cfg, geom, Endpoint::Alice, std::nullopt, rng);
  const LinkEpoch lb = make_link_epoch(cfg, geom, Endpoint::Bob, std::nullopt, rng);
  const DeceptionOperator op = DeceptionOperator::from_links(la, lb);
  OptimizerConfig ocfg;
  const OptimizeResult r = optimize_phase(op, 1.0, ocfg, rng);
  const Eigen::VectorXcd wv = r.w.weights();
  for (int m = 0; m < wv.size(); ++m)
    CHECK(std::abs(std::norm(wv[m]) - 1.0) <= 1e-12);
  double best_random = 0.0;
  for (int k = 0; k < 100; ++k)
    best_random = std::max(best_random,
                           op.quad(PhaseVector::random(1600, 1.0, rng).weights()));
  CHECK(r.objective > best_random);
}

TEST_CASE("configuration contracts") {
  Rng rng = Rng::for_stream(78, streams::kTest, 0);
  const DeceptionOperator op = random_psd(3, rng);
  OptimizerConfig bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(optimize_phase(op, 1.0, bad, rng), std::invalid_argument);
  OptimizerConfig ok;
  CHECK_THROWS_AS(optimize_phase(op, 0.0, ok, rng), std::invalid_argument);
  Eigen::MatrixXcd f(2, 1);
  f.setOnes();
  Eigen::VectorXd negw(1);
  negw[0] = -1.0;
  CHECK_THROWS_AS(DeceptionOperator::from_factors(f, negw),
                  std::invalid_argument);
}
