#include "riskeysim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riskeysim/util.hpp"

namespace riskeysim {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

DirectChannel sample_direct(const ScenarioConfig& cfg, Rng& rng) {
  DirectChannel d;
  d.var2 = cfg.c0 * std::pow(cfg.d_ab(), -cfg.alpha_nlos);
  d.h = rng.cnormal(d.var2);
  return d;
}

std::vector<AnglePair> draw_path_angles(int iota, Rng& rng) {
  std::vector<AnglePair> a(iota);
  for (auto& p : a) {
    p.el = rng.uniform(-kHalfPi, kHalfPi);
    p.az = rng.uniform(-kHalfPi, kHalfPi);
  }
  return a;
}

LinkEpoch make_link_epoch(const ScenarioConfig& cfg, const UpaGeometry& geom,
                          Endpoint ep,
                          const std::optional<std::vector<AnglePair>>& angles,
                          Rng& angle_rng) {
  const Eigen::Vector3d endpoint =
      ep == Endpoint::Alice ? cfg.pos_alice : cfg.pos_bob;
  const double dist = (endpoint - cfg.pos_eve).norm();

  LinkEpoch e;
  e.los_power = cfg.los_power(dist);
  e.nlos_power = cfg.nlos_power(dist);
  e.los = los_angles(endpoint - cfg.pos_eve);
  e.g_los = std::sqrt(e.los_power) *
            steering_vector(geom, e.los.el, e.los.az, cfg.lambda);

  if (angles) {
    if (static_cast<int>(angles->size()) != cfg.iota)
      throw std::invalid_argument("make_link_epoch: expected iota angle pairs");
    for (const auto& p : *angles)
      if (std::abs(p.el) > kHalfPi || std::abs(p.az) > kHalfPi)
        throw std::domain_error("make_link_epoch: path angle out of range");
    e.angles = *angles;
  } else {
    e.angles = draw_path_angles(cfg.iota, angle_rng);
  }

  e.steer.resize(geom.size(), cfg.iota);
  for (int n = 0; n < cfg.iota; ++n)
    e.steer.col(n) = steering_vector(geom, e.angles[n].el, e.angles[n].az, cfg.lambda);
  return e;
}

RisLinkChannel sample_link_epoch(const LinkEpoch& epoch, Rng& rng) {
  const int iota = static_cast<int>(epoch.angles.size());
  RisLinkChannel c;
  c.g_los = epoch.g_los;
  c.path_angles = epoch.angles;
  c.path_steering = epoch.steer;
  c.los_power = epoch.los_power;
  c.nlos_power = epoch.nlos_power;
  c.path_gains.resize(iota);
  for (int n = 0; n < iota; ++n) c.path_gains[n] = rng.cnormal(epoch.nlos_power);
  const double scale = 1.0 / std::sqrt(static_cast<double>(iota));
  c.g = c.g_los + epoch.steer * (scale * c.path_gains);
  return c;
}

RisLinkChannel sample_ris_link(const ScenarioConfig& cfg, const UpaGeometry& geom,
                               Endpoint ep,
                               const std::optional<std::vector<AnglePair>>& angles,
                               Rng& rng) {
  const LinkEpoch epoch = make_link_epoch(cfg, geom, ep, angles, rng);
  return sample_link_epoch(epoch, rng);
}

Eigen::MatrixXcd RisLinkChannel::cov2() const {
  const int m = static_cast<int>(g_los.size());
  const int iota = static_cast<int>(path_angles.size());
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m, m);
  const double w = nlos_power / iota;
  for (int n = 0; n < iota; ++n)
    s.noalias() += w * path_steering.col(n) * path_steering.col(n).adjoint();
  return s;
}

}  // namespace riskeysim
