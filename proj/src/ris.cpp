#include "riskeysim/ris.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riskeysim {

Eigen::VectorXcd PhaseVector::weights() const {
  const double amp = std::sqrt(amp_gain);
  Eigen::VectorXcd w(phases.size());
  for (Eigen::Index m = 0; m < phases.size(); ++m)
    w[m] = std::polar(amp, phases[m]);
  return w;
}

PhaseVector PhaseVector::random(int m, double amp_gain, Rng& rng) {
  PhaseVector w;
  w.amp_gain = amp_gain;
  w.phases.resize(m);
  for (int i = 0; i < m; ++i)
    w.phases[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return w;
}

std::complex<double> deceiving_channel(const Eigen::VectorXcd& weights,
                                       const Eigen::VectorXcd& ga,
                                       const Eigen::VectorXcd& gb) {
  if (weights.size() != ga.size() || ga.size() != gb.size())
    throw std::invalid_argument("deceiving_channel: dimension mismatch");
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < weights.size(); ++m)
    acc += weights[m] * ga[m] * gb[m];
  return acc;
}

std::complex<double> deceiving_channel(const PhaseVector& w,
                                       const RisLinkChannel& ga,
                                       const RisLinkChannel& gb) {
  return deceiving_channel(w.weights(), ga.g, gb.g);
}

DeceptionStats stats_random_phase(const ScenarioConfig& cfg) {
  const double m = cfg.m_elements();
  const double pa_los = cfg.los_power(cfg.d_ae());
  const double pb_los = cfg.los_power(cfg.d_be());
  const double pa_nlos = cfg.nlos_power(cfg.d_ae());
  const double pb_nlos = cfg.nlos_power(cfg.d_be());

  DeceptionStats s;
  s.mu_e = {0.0, 0.0};
  s.sigma_e2 = 0.5 * cfg.amp_gain * m * pa_los * pb_los;
  // |a_m|^2 = P_A^los and the per-element NLoS second moment is P_A^nlos,
  // identically over m, so the exact sum collapses to M times one product.
  s.sigma_e2_exact =
      0.5 * cfg.amp_gain * m * (pa_los + pa_nlos) * (pb_los + pb_nlos);
  return s;
}

DeceptionOperator DeceptionOperator::from_links(const LinkEpoch& a,
                                                const LinkEpoch& b) {
  const int m = static_cast<int>(a.g_los.size());
  if (b.g_los.size() != m)
    throw std::invalid_argument("DeceptionOperator: dimension mismatch");
  if (!(a.nlos_power >= 0.0) || !(b.nlos_power >= 0.0))
    throw std::invalid_argument("DeceptionOperator: negative NLoS power");
  const int na = static_cast<int>(a.angles.size());
  const int nb = static_cast<int>(b.angles.size());
  const double ca = a.nlos_power / na;
  const double cb = b.nlos_power / nb;

  DeceptionOperator op;
  op.factors_.resize(m, na + nb + na * nb);
  op.weights_.resize(na + nb + na * nb);
  int k = 0;
  // NLoS of link A against LoS of link B.
  for (int n = 0; n < na; ++n, ++k) {
    op.factors_.col(k) = (b.g_los.array() * a.steer.col(n).array()).conjugate();
    op.weights_[k] = 0.5 * ca;
  }
  // NLoS of link B against LoS of link A.
  for (int n = 0; n < nb; ++n, ++k) {
    op.factors_.col(k) = (a.g_los.array() * b.steer.col(n).array()).conjugate();
    op.weights_[k] = 0.5 * cb;
  }
  // NLoS-NLoS cross terms.
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j, ++k) {
      op.factors_.col(k) =
          (a.steer.col(i).array() * b.steer.col(j).array()).conjugate();
      op.weights_[k] = 0.5 * ca * cb;
    }
  return op;
}

DeceptionOperator DeceptionOperator::from_factors(Eigen::MatrixXcd factors,
                                                  Eigen::VectorXd weights) {
  if (factors.cols() != weights.size())
    throw std::invalid_argument("DeceptionOperator: factor/weight mismatch");
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    if (!(weights[k] >= 0.0))
      throw std::invalid_argument("DeceptionOperator: negative weight (non-PSD)");
  DeceptionOperator op;
  op.factors_ = std::move(factors);
  op.weights_ = std::move(weights);
  return op;
}

Eigen::VectorXcd DeceptionOperator::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != factors_.rows())
    throw std::invalid_argument("DeceptionOperator::apply: dimension mismatch");
  const Eigen::VectorXcd proj = factors_.adjoint() * v;
  const Eigen::VectorXcd scaled =
      weights_.cast<std::complex<double>>().cwiseProduct(proj);
  return factors_ * scaled;
}

double DeceptionOperator::quad(const Eigen::VectorXcd& w) const {
  const Eigen::VectorXcd proj = factors_.adjoint() * w;
  return (weights_.array() * proj.array().abs2()).sum();
}

Eigen::MatrixXcd DeceptionOperator::dense() const {
  const int m = size();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m, m);
  for (int k = 0; k < factors_.cols(); ++k)
    g.noalias() += weights_[k] * factors_.col(k) * factors_.col(k).adjoint();
  return g;
}

Eigen::MatrixXcd g_matrix(const RisLinkChannel& ga, const RisLinkChannel& gb) {
  const int m = static_cast<int>(ga.g_los.size());
  if (gb.g_los.size() != m)
    throw std::invalid_argument("g_matrix: dimension mismatch");
  if (!(ga.nlos_power >= 0.0) || !(gb.nlos_power >= 0.0))
    throw std::invalid_argument("g_matrix: negative NLoS power");

  // The fixed-w variance expansion multiplies conjugated NLoS covariances,
  // E[(g nlos)^* (g nlos)^T] = conj(cov2).
  const Eigen::MatrixXcd sa = ga.cov2().conjugate();
  const Eigen::MatrixXcd sb = gb.cov2().conjugate();
  const Eigen::VectorXcd a = ga.g_los;
  const Eigen::VectorXcd b = gb.g_los;

  Eigen::MatrixXcd g = sa.cwiseProduct(sb);
  g.noalias() += b.conjugate().asDiagonal() * sa * b.asDiagonal();
  g.noalias() += a.conjugate().asDiagonal() * sb * a.asDiagonal();
  return 0.5 * g;
}

DeceptionStats stats_fixed_phase(const PhaseVector& w, const LinkEpoch& a,
                                 const LinkEpoch& b) {
  const Eigen::VectorXcd wv = w.weights();
  DeceptionStats s;
  s.mu_e = deceiving_channel(wv, a.g_los, b.g_los);
  const DeceptionOperator op = DeceptionOperator::from_links(a, b);
  s.sigma_e2 = op.quad(wv);
  s.sigma_e2_exact = s.sigma_e2;
  return s;
}

}  // namespace riskeysim
