#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "riskeysim/ris.hpp"

using namespace riskeysim;
using cplx = std::complex<double>;

namespace {

// Test-side expansion of the fixed-w variance matrix, entry by entry:
// G_ij = 0.5 * [ conj(S_A)_ij conj(S_B)_ij + conj(b_i) conj(S_A)_ij b_j
//              + conj(a_i) conj(S_B)_ij a_j ]
// with S the conventional NLoS covariances and a, b the LoS vectors.
Eigen::MatrixXcd g_matrix_oracle(const Eigen::MatrixXcd& cov2_a,
                                 const Eigen::MatrixXcd& cov2_b,
                                 const Eigen::VectorXcd& a,
                                 const Eigen::VectorXcd& b) {
  const int m = static_cast<int>(a.size());
  Eigen::MatrixXcd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const cplx sa = std::conj(cov2_a(i, j));
      const cplx sb = std::conj(cov2_b(i, j));
      g(i, j) = 0.5 * (sa * sb + std::conj(b[i]) * sa * b[j] +
                       std::conj(a[i]) * sb * a[j]);
    }
  return g;
}

std::pair<LinkEpoch, LinkEpoch> sample_epochs(const ScenarioConfig& cfg,
                                              Rng& rng) {
  const UpaGeometry geom = cfg.geometry();
  LinkEpoch la = make_link_epoch(cfg, geom, Endpoint::Alice, std::nullopt, rng);
  LinkEpoch lb = make_link_epoch(cfg, geom, Endpoint::Bob, std::nullopt, rng);
  return {std::move(la), std::move(lb)};
}

}  // namespace

TEST_CASE("deceiving channel composition") {
  SUBCASE("zero amplifying gain") {
    PhaseVector w;
    w.amp_gain = 0.0;
    w.phases = Eigen::VectorXd::Zero(3);
    Eigen::VectorXcd g = Eigen::VectorXcd::Ones(3);
    CHECK(std::abs(deceiving_channel(w.weights(), g, g)) == 0.0);
  }
  SUBCASE("scalar product") {
    Eigen::VectorXcd w(1), ga(1), gb(1);
    w[0] = {1.0, 0.0};
    ga[0] = {2.0, 0.0};
    gb[0] = {0.0, 3.0};
    CHECK(std::abs(deceiving_channel(w, ga, gb) - cplx{0.0, 6.0}) < 1e-15);
  }
  SUBCASE("matches the elementwise sum") {
    Rng rng = Rng::for_stream(31, streams::kTest, 0);
    Eigen::VectorXcd w(3), ga(3), gb(3);
    for (int m = 0; m < 3; ++m) {
      w[m] = rng.cnormal(1.0);
      ga[m] = rng.cnormal(1.0);
      gb[m] = rng.cnormal(1.0);
    }
    const cplx oracle =
        (w.array() * ga.array() * gb.array()).sum();
    CHECK(std::abs(deceiving_channel(w, ga, gb) - oracle) < 1e-14);
  }
  SUBCASE("dimension mismatch") {
    Eigen::VectorXcd w(2), g(3);
    CHECK_THROWS_AS(deceiving_channel(w, g, g), std::invalid_argument);
  }
}

TEST_CASE("random-phase statistics closed forms") {
  ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  const DeceptionStats s = stats_random_phase(cfg);
  CHECK(s.mu_e == cplx{0.0, 0.0});
  // 0.5 * 1 * 100 * (1e-3)^2 / (125 * 1625)
  const double expected = 0.5 * 100.0 * 1e-6 / (125.0 * 1625.0);
  CHECK(s.sigma_e2 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.sigma_e2 == doctest::Approx(2.4615e-10).epsilon(1e-4));

  SUBCASE("linear in element count") {
    ScenarioConfig big = cfg;
    big.mx = big.my = 20;
    CHECK(stats_random_phase(big).sigma_e2 ==
          doctest::Approx(4.0 * s.sigma_e2).epsilon(1e-12));
  }
  SUBCASE("zero gain") {
    ScenarioConfig off = cfg;
    off.amp_gain = 0.0;
    CHECK(stats_random_phase(off).sigma_e2 == 0.0);
  }
  SUBCASE("exact sum dominates the LoS-only approximation slightly") {
    const double ratio = s.sigma_e2_exact / s.sigma_e2;
    CHECK(ratio > 1.0);
    CHECK(ratio < 1.2);  // LoS-dominance approximation quality at sect-V
  }
}

TEST_CASE("random-phase empirical variance matches the exact sum") {
  ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  Rng rng = Rng::for_stream(32, streams::kTest, 0);
  auto [la, lb] = sample_epochs(cfg, rng);
  const DeceptionStats st = stats_random_phase(cfg);
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const RisLinkChannel ga = sample_link_epoch(la, rng);
    const RisLinkChannel gb = sample_link_epoch(lb, rng);
    const PhaseVector w = PhaseVector::random(cfg.m_elements(), cfg.amp_gain, rng);
    acc += std::norm(deceiving_channel(w.weights(), ga.g, gb.g));
  }
  const double sigma_mc = 0.5 * acc / n;
  CHECK(std::abs(sigma_mc / st.sigma_e2_exact - 1.0) < 0.05);
}

TEST_CASE("fixed-w variance: operator, dense matrix and Monte Carlo agree") {
  ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  cfg.mx = cfg.my = 4;
  cfg.iota = 2;
  Rng rng = Rng::for_stream(33, streams::kTest, 0);
  auto [la, lb] = sample_epochs(cfg, rng);
  const DeceptionOperator op = DeceptionOperator::from_links(la, lb);
  const RisLinkChannel ra = sample_link_epoch(la, rng);
  const RisLinkChannel rb = sample_link_epoch(lb, rng);

  const Eigen::MatrixXcd g_dense = g_matrix(ra, rb);
  const Eigen::MatrixXcd g_oracle =
      g_matrix_oracle(ra.cov2(), rb.cov2(), ra.g_los, rb.g_los);
  CHECK((g_dense - g_oracle).norm() < 1e-12 * g_oracle.norm());
  CHECK((op.dense() - g_oracle).norm() < 1e-12 * g_oracle.norm());
  CHECK((g_dense - g_dense.adjoint()).norm() < 1e-12 * g_dense.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g_dense);
  CHECK(es.eigenvalues().minCoeff() > -1e-14 * es.eigenvalues().maxCoeff());

  const PhaseVector w = PhaseVector::random(cfg.m_elements(), 2.5, rng);
  const Eigen::VectorXcd wv = w.weights();
  const DeceptionStats st = stats_fixed_phase(w, la, lb);
  CHECK(st.sigma_e2 ==
        doctest::Approx((wv.adjoint() * g_dense * wv)(0).real()).epsilon(1e-10));

  const int n = 100000;
  cplx mean{0.0, 0.0};
  std::vector<cplx> he(n);
  for (int i = 0; i < n; ++i) {
    const RisLinkChannel ga = sample_link_epoch(la, rng);
    const RisLinkChannel gb = sample_link_epoch(lb, rng);
    he[i] = deceiving_channel(wv, ga.g, gb.g);
    mean += he[i];
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const cplx& v : he) var += std::norm(v - mean);
  var /= n;
  CHECK(std::abs(0.5 * var / st.sigma_e2 - 1.0) < 0.05);
  // Mean matches the cascaded LoS product within 3 standard errors.
  const double se = std::sqrt(var / n);
  CHECK(std::abs(mean - st.mu_e) < 3.0 * se * std::numbers::sqrt2);
}

TEST_CASE("no NLoS randomness means zero variance for any phase") {
  ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  cfg.mx = cfg.my = 3;
  cfg.alpha_nlos = 1000.0;
  Rng rng = Rng::for_stream(34, streams::kTest, 0);
  auto [la, lb] = sample_epochs(cfg, rng);
  const DeceptionOperator op = DeceptionOperator::from_links(la, lb);
  const PhaseVector w = PhaseVector::random(cfg.m_elements(), 1.0, rng);
  CHECK(op.quad(w.weights()) == 0.0);
  const RisLinkChannel ra = sample_link_epoch(la, rng);
  const RisLinkChannel rb = sample_link_epoch(lb, rng);
  CHECK(g_matrix(ra, rb).norm() == 0.0);
}

TEST_CASE("variance is exactly linear in the amplifying gain") {
  ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  cfg.mx = cfg.my = 4;
  Rng rng = Rng::for_stream(35, streams::kTest, 0);
  auto [la, lb] = sample_epochs(cfg, rng);
  const DeceptionOperator op = DeceptionOperator::from_links(la, lb);
  PhaseVector w = PhaseVector::random(cfg.m_elements(), 1.0, rng);
  const double base = op.quad(w.weights());
  w.amp_gain = 7.0;
  CHECK(op.quad(w.weights()) == doctest::Approx(7.0 * base).epsilon(1e-12));
  ScenarioConfig scaled = cfg;
  scaled.amp_gain = 7.0;
  CHECK(stats_random_phase(scaled).sigma_e2 ==
        doctest::Approx(7.0 * stats_random_phase(cfg).sigma_e2).epsilon(1e-12));
}

TEST_CASE("CLT regime: deceiving channel is near-Gaussian at M = 100") {
  ScenarioConfig cfg = ScenarioConfig::section_v_preset();
  Rng rng = Rng::for_stream(36, streams::kTest, 0);
  auto [la, lb] = sample_epochs(cfg, rng);
  const int n = 100000;
  std::vector<double> re(n);
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const RisLinkChannel ga = sample_link_epoch(la, rng);
    const RisLinkChannel gb = sample_link_epoch(lb, rng);
    const PhaseVector w = PhaseVector::random(cfg.m_elements(), 1.0, rng);
    re[i] = deceiving_channel(w.weights(), ga.g, gb.g).real();
    mean += re[i];
  }
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : re) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double skew = m3 / std::pow(m2, 1.5);
  const double exkurt = m4 / (m2 * m2) - 3.0;
  CHECK(std::abs(skew) < 0.05);
  CHECK(std::abs(exkurt) < 0.2);
}
