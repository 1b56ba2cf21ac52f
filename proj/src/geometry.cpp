#include "riskeysim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riskeysim {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

Eigen::Vector3d UpaGeometry::element_position(int m) const {
  const double d = elem_spacing;
  return {0.0, static_cast<double>(m % mx) * d,
          static_cast<double>(m / my) * d};
}

Wavenumbers angle_wavenumbers(AnglePair a, double lambda) {
  const double k = 2.0 * std::numbers::pi / lambda;
  return {k * std::sin(a.el) * std::sin(a.az), k * std::cos(a.el)};
}

Eigen::VectorXcd steering_vector(const UpaGeometry& geom, double el, double az,
                                 double lambda) {
  if (!(std::abs(el) <= kHalfPi) || !(std::abs(az) <= kHalfPi))
    throw std::domain_error("steering_vector: angle outside [-pi/2, pi/2]");
  const Wavenumbers wn = angle_wavenumbers({el, az}, lambda);
  const int m_total = geom.size();
  Eigen::VectorXcd u(m_total);
  for (int m = 0; m < m_total; ++m) {
    const Eigen::Vector3d l = geom.element_position(m);
    const double phase = wn.ky * l.y() + wn.kz * l.z();
    u[m] = std::polar(1.0, phase);
  }
  return u;
}

AnglePair los_angles(const Eigen::Vector3d& from_ris_to_point) {
  const double n = from_ris_to_point.norm();
  if (!(n > 0.0))
    throw std::domain_error("los_angles: zero-length direction");
  const Eigen::Vector3d v = from_ris_to_point / n;
  const double fz = std::min(std::abs(v.x()), 1.0);
  const double el = std::acos(fz);
  const double s = std::sin(el);
  double az = 0.0;
  if (s > 1e-12) {
    const double r = std::max(-1.0, std::min(1.0, v.y() / s));
    az = std::asin(r);
  }
  return {el, az};
}

}  // namespace riskeysim
