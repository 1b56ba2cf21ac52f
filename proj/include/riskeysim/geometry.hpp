#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace riskeysim {

struct AnglePair {
  double el = 0.0;  // elevation, radians, in [-pi/2, pi/2]
  double az = 0.0;  // azimuth, radians, in [-pi/2, pi/2]
};

// Uniform planar array in the x = 0 plane. Element m (0-based) sits at
// [0, (m mod mx) * d, floor(m / my) * d].
struct UpaGeometry {
  int mx = 1;
  int my = 1;
  double elem_spacing = 0.0;

  int size() const { return mx * my; }
  Eigen::Vector3d element_position(int m) const;
};

// Spatial frequencies seen by the array for a given angle pair: the
// steering phase of element m is ky * y_m + kz * z_m with
// (ky, kz) = (2*pi/lambda) * (sin el * sin az, cos el).
struct Wavenumbers {
  double ky = 0.0;
  double kz = 0.0;
};
Wavenumbers angle_wavenumbers(AnglePair a, double lambda);

// u(el, az): entry m is exp(j * a(el,az) . l_m); all entries unit modulus.
// Throws std::domain_error if an angle is outside [-pi/2, pi/2].
Eigen::VectorXcd steering_vector(const UpaGeometry& geom, double el, double az,
                                 double lambda);

// Angle pair of the line-of-sight path toward a point, in the array frame
// (plane x = 0, boresight +x). The parametrization above only senses the
// (y, z)-projection of a direction, and cos(el) >= 0 for in-range el, so
// the boresight component is folded to |vx| and az carries the y-component.
AnglePair los_angles(const Eigen::Vector3d& from_ris_to_point);

}  // namespace riskeysim
