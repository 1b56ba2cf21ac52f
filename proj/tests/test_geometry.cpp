#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riskeysim/geometry.hpp"
#include "riskeysim/rng.hpp"

using namespace riskeysim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("element positions follow the planar grid layout") {
  const UpaGeometry geom{4, 4, 0.25};
  CHECK(geom.size() == 16);
  for (int m = 0; m < 16; ++m) {
    const Eigen::Vector3d l = geom.element_position(m);
    CHECK(l.x() == 0.0);
    CHECK(l.y() == doctest::Approx((m % 4) * 0.25));
    CHECK(l.z() == doctest::Approx((m / 4) * 0.25));
  }
}

TEST_CASE("2x2 hand-evaluated steering vector at el = az = pi/2") {
  const UpaGeometry geom{2, 2, 1.0 / 8.0};
  const Eigen::VectorXcd u = steering_vector(geom, kPi / 2, kPi / 2, 1.0);
  // a = 2*pi*[0, 1, 0]; phases are 2*pi*y_m = {0, pi/4, 0, pi/4}.
  CHECK(std::abs(u[0] - std::complex<double>{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(u[1] - std::polar(1.0, kPi / 4)) < 1e-12);
  CHECK(std::abs(u[2] - std::complex<double>{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(u[3] - std::polar(1.0, kPi / 4)) < 1e-12);
}

TEST_CASE("boresight case keeps only the z-axis phase gradient") {
  const UpaGeometry geom{3, 3, 0.02};
  const double lambda = 0.1;
  const Eigen::VectorXcd u = steering_vector(geom, 0.0, 0.0, lambda);
  for (int m = 0; m < geom.size(); ++m) {
    const double phase = 2.0 * kPi / lambda * (m / geom.my) * geom.elem_spacing;
    CHECK(std::abs(u[m] - std::polar(1.0, phase)) < 1e-12);
  }
}

TEST_CASE("unit modulus for arbitrary in-range angles") {
  const UpaGeometry geom{5, 4, 0.0125};
  Rng rng = Rng::for_stream(11, streams::kTest, 0);
  for (int k = 0; k < 50; ++k) {
    const double el = rng.uniform(-kPi / 2, kPi / 2);
    const double az = rng.uniform(-kPi / 2, kPi / 2);
    const Eigen::VectorXcd u = steering_vector(geom, el, az, 0.1);
    for (int m = 0; m < u.size(); ++m)
      CHECK(std::abs(std::abs(u[m]) - 1.0) < 1e-12);
  }
}

TEST_CASE("angles outside the half-space are rejected") {
  const UpaGeometry geom{2, 2, 0.0125};
  CHECK_THROWS_AS(steering_vector(geom, 1.8, 0.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(steering_vector(geom, 0.0, -1.7, 0.1), std::domain_error);
}

TEST_CASE("negated element offsets conjugate the steering vector") {
  const UpaGeometry geom{3, 3, 0.0125};
  UpaGeometry reflected = geom;
  reflected.elem_spacing = -geom.elem_spacing;
  Rng rng = Rng::for_stream(12, streams::kTest, 0);
  for (int k = 0; k < 10; ++k) {
    const double el = rng.uniform(-kPi / 2, kPi / 2);
    const double az = rng.uniform(-kPi / 2, kPi / 2);
    const Eigen::VectorXcd u = steering_vector(geom, el, az, 0.1);
    const Eigen::VectorXcd v = steering_vector(reflected, el, az, 0.1);
    for (int m = 0; m < u.size(); ++m)
      CHECK(std::abs(v[m] - std::conj(u[m])) < 1e-12);
  }
}

TEST_CASE("LoS angle mapping reproduces the direction's y-frequency") {
  const Eigen::Vector3d dir{0.0, -10.0, -5.0};  // Alice as seen from Eve
  const AnglePair a = los_angles(dir);
  CHECK(std::abs(a.el) <= kPi / 2);
  CHECK(std::abs(a.az) <= kPi / 2);
  const Wavenumbers wn = angle_wavenumbers(a, 0.1);
  const Eigen::Vector3d v = dir.normalized();
  CHECK(wn.ky == doctest::Approx(2.0 * kPi / 0.1 * v.y()));
  CHECK(wn.kz == doctest::Approx(2.0 * kPi / 0.1 * std::abs(v.x())));
}

TEST_CASE("LoS mapping handles boresight and axis directions") {
  const AnglePair bore = los_angles({1.0, 0.0, 0.0});
  CHECK(bore.el == doctest::Approx(0.0));
  CHECK(bore.az == doctest::Approx(0.0));
  const AnglePair side = los_angles({0.0, 1.0, 0.0});
  CHECK(side.el == doctest::Approx(kPi / 2));
  CHECK(side.az == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(los_angles({0.0, 0.0, 0.0}), std::domain_error);
}
