#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "riskeysim/config.hpp"
#include "riskeysim/geometry.hpp"
#include "riskeysim/rng.hpp"

namespace riskeysim {

enum class Endpoint { Alice, Bob };

// One realization of the direct Alice-Bob channel, h ~ CN(0, var2) with
// var2 = 2 sigma_h^2 = C0 * d_AB^(-alpha_nlos). The static LoS component
// is excluded from the model.
struct DirectChannel {
  std::complex<double> h{0.0, 0.0};
  double var2 = 0.0;
};

DirectChannel sample_direct(const ScenarioConfig& cfg, Rng& rng);

// Fixed-per-scatterer-epoch part of one endpoint-to-RIS link: LoS vector
// and the iota NLoS path steering vectors. Per-round randomness is only
// the path gains.
struct LinkEpoch {
  Eigen::VectorXcd g_los;        // sqrt(los_power) * u(LoS angles)
  Eigen::MatrixXcd steer;        // M x iota, columns u(el_n, az_n)
  std::vector<AnglePair> angles; // NLoS path angles
  AnglePair los;                 // LoS angle pair
  double los_power = 0.0;        // C0 * d^(-alpha_los)
  double nlos_power = 0.0;       // C0 * d^(-alpha_nlos), total per element
};

// One realization of an endpoint-to-RIS link channel.
struct RisLinkChannel {
  Eigen::VectorXcd g;            // full channel
  Eigen::VectorXcd g_los;
  std::vector<AnglePair> path_angles;
  Eigen::VectorXcd path_gains;   // rho_n, before the 1/sqrt(iota) scaling
  Eigen::MatrixXcd path_steering;
  double los_power = 0.0;
  double nlos_power = 0.0;

  // 2 Sigma in the conventional sense E[(g - g_los)(g - g_los)^H]
  //   = sum_n (nlos_power / iota) u_n u_n^H.
  // Dense; intended for small M (tests, g_matrix).
  Eigen::MatrixXcd cov2() const;
};

// Draws NLoS path angles i.i.d. uniform on [-pi/2, pi/2]^2.
std::vector<AnglePair> draw_path_angles(int iota, Rng& rng);

LinkEpoch make_link_epoch(const ScenarioConfig& cfg, const UpaGeometry& geom,
                          Endpoint ep,
                          const std::optional<std::vector<AnglePair>>& angles,
                          Rng& angle_rng);

RisLinkChannel sample_link_epoch(const LinkEpoch& epoch, Rng& rng);

// Epoch construction plus one gain draw; the spec-level sampling op.
RisLinkChannel sample_ris_link(const ScenarioConfig& cfg, const UpaGeometry& geom,
                               Endpoint ep,
                               const std::optional<std::vector<AnglePair>>& angles,
                               Rng& rng);

}  // namespace riskeysim
