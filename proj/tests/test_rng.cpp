#include <doctest.h>

#include <cmath>
#include <complex>

#include "riskeysim/rng.hpp"

using namespace riskeysim;

TEST_CASE("streams are reproducible and independent of construction order") {
  Rng a = Rng::for_stream(42, streams::kRound, 17);
  Rng c = Rng::for_stream(42, streams::kRound, 18);
  const auto v1 = a.next_u64();
  const auto v2 = c.next_u64();
  Rng b = Rng::for_stream(42, streams::kRound, 17);
  CHECK(b.next_u64() == v1);
  CHECK(v1 != v2);

  Rng d = Rng::for_stream(42, streams::kEpochAngles, 17);
  CHECK(d.next_u64() != v1);
}

TEST_CASE("uniform range and moments") {
  Rng rng = Rng::for_stream(1, streams::kTest, 0);
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  mean /= n;
  CHECK(std::abs(mean - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal moments") {
  Rng rng = Rng::for_stream(2, streams::kTest, 0);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    m1 += z;
    m2 += z * z;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(m2 - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("complex gaussian carries the requested total variance") {
  Rng rng = Rng::for_stream(3, streams::kTest, 0);
  const double var = 3.7e-6;
  const int n = 100000;
  double acc = 0.0;
  std::complex<double> mean{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const auto z = rng.cnormal(var);
    acc += std::norm(z);
    mean += z;
  }
  acc /= n;
  mean /= static_cast<double>(n);
  CHECK(std::abs(acc / var - 1.0) < 0.02);
  CHECK(std::abs(mean) < 3.0 * std::sqrt(var / n));
}

TEST_CASE("zero-variance draw is exactly zero") {
  Rng rng = Rng::for_stream(4, streams::kTest, 0);
  CHECK(rng.cnormal(0.0) == std::complex<double>{0.0, 0.0});
}
