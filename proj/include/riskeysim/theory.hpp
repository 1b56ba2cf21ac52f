#pragma once

#include <span>
#include <vector>

namespace riskeysim {

// Standard normal CDF via the complementary error function.
double normal_cdf(double x);

struct KmrQuery {
  double ratio = 1.0;  // sigma_E / sigma_h, >= 0
  double beta = 0.1;   // quantizer parameter, [0, 0.5)
};

// Key match rate between one legitimate party and the RIS controller,
//   sqrt(2/pi) * Int_beta^inf Phi(-beta sqrt(ratio^2+1) + ratio z) e^{-z^2/2} dz,
// evaluated by adaptive Simpson quadrature on [beta, beta + 12].
double theoretical_kmr(const KmrQuery& q, double abs_tol = 1e-10);

// Wave-blockage ceiling 2 Phi(-beta) = lim_{ratio->inf} theoretical_kmr.
double kmr_limit(double beta);

struct KmrDiffs {
  std::vector<double> values;  // kmr at each grid point
  std::vector<double> first;   // forward differences values[i+1]-values[i]
  std::vector<double> second;  // second divided differences (concavity sign)
};

// Finite differences of the key match rate over a strictly increasing
// ratio grid (>= 3 points). Second differences are divided differences so
// the concavity sign is meaningful on non-uniform grids.
KmrDiffs kmr_derivative_signs(double beta, std::span<const double> grid);

}  // namespace riskeysim
