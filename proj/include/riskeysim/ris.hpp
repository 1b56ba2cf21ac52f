#pragma once

#include <Eigen/Dense>
#include <complex>

#include "riskeysim/channel.hpp"
#include "riskeysim/rng.hpp"

namespace riskeysim {

// Eve-RIS control state: realized weight w_m = sqrt(amp_gain) * exp(j theta_m).
struct PhaseVector {
  double amp_gain = 1.0;
  Eigen::VectorXd phases;  // theta_m in [0, 2pi)

  int size() const { return static_cast<int>(phases.size()); }
  Eigen::VectorXcd weights() const;

  static PhaseVector random(int m, double amp_gain, Rng& rng);
};

// h_E = g_B^T diag(w) g_A = sum_m w_m gA_m gB_m.
std::complex<double> deceiving_channel(const PhaseVector& w,
                                       const RisLinkChannel& ga,
                                       const RisLinkChannel& gb);
std::complex<double> deceiving_channel(const Eigen::VectorXcd& weights,
                                       const Eigen::VectorXcd& ga,
                                       const Eigen::VectorXcd& gb);

// First/second-order statistics of h_E.
struct DeceptionStats {
  std::complex<double> mu_e{0.0, 0.0};
  double sigma_e2 = 0.0;        // closed form used by experiments
  double sigma_e2_exact = 0.0;  // exact per-element moment sum (random w)
};

// Random-phase regime: mu_E = 0 and
//   sigma_E^2 = 0.5 * A_E * M * C0^2 * d_AE^(-aL) * d_BE^(-aL),
// the LoS-dominant approximation of the exact sum
//   0.5 * A_E * sum_m (P_A^N + |a_m|^2)(P_B^N + |b_m|^2),
// which is also exposed for validation.
DeceptionStats stats_random_phase(const ScenarioConfig& cfg);

// Matrix-free Hermitian PSD operator G with sigma_E^2 = w^H G w for a
// fixed phase vector. Held as a sum of K rank-one terms (K = 2 iota + iota^2),
// so applying it costs O(K M) and M = 6400 stays cheap.
class DeceptionOperator {
 public:
  static DeceptionOperator from_links(const LinkEpoch& a, const LinkEpoch& b);

  // Arbitrary PSD operator sum_k weights[k] factors.col(k) factors.col(k)^H;
  // weights must be >= 0. Any Hermitian PSD matrix can be expressed this
  // way through its eigendecomposition.
  static DeceptionOperator from_factors(Eigen::MatrixXcd factors,
                                        Eigen::VectorXd weights);

  int size() const { return static_cast<int>(factors_.rows()); }
  int rank_bound() const { return static_cast<int>(factors_.cols()); }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  double quad(const Eigen::VectorXcd& w) const;  // w^H G w (real, >= 0)
  Eigen::MatrixXcd dense() const;

 private:
  Eigen::MatrixXcd factors_;  // columns z_k
  Eigen::VectorXd weights_;   // lambda_k >= 0, G = sum lambda_k z_k z_k^H
};

// Dense G from link realizations carrying cov2 and g_los, following the
// conjugation pattern of the fixed-w variance expansion. Small M only.
Eigen::MatrixXcd g_matrix(const RisLinkChannel& ga, const RisLinkChannel& gb);

// Fixed-w statistics: mu_E = (g_B los)^T diag(w) (g_A los), sigma_E^2 = w^H G w.
DeceptionStats stats_fixed_phase(const PhaseVector& w, const LinkEpoch& a,
                                 const LinkEpoch& b);

}  // namespace riskeysim
