#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "riskeysim/geometry.hpp"

namespace riskeysim {

// Beamspace dictionary: atom d is the steering vector at the d-th grid
// angle pair; the grid evenly enumerates [-pi/2, pi/2]^2 including the
// endpoints. Atoms and rows are generated on demand from the per-atom
// wavenumbers since M x D does not fit in memory at large M.
struct Dictionary {
  UpaGeometry geom;
  double lambda = 0.0;
  int grid_el = 0;
  int grid_az = 0;
  std::vector<AnglePair> grid;  // D = grid_el * grid_az entries
  Eigen::VectorXd ky, kz;       // per-atom wavenumbers

  int atoms() const { return static_cast<int>(grid.size()); }
  Eigen::VectorXcd atom(int d) const;            // M-vector, unit-modulus
  Eigen::VectorXcd row(int m) const;             // D-vector (row m of D)
  Eigen::MatrixXcd rows(const std::vector<int>& idx) const;
  // Index of the grid pair closest to (el, az); used by the on-grid mode.
  int nearest_atom(AnglePair a) const;
};

Dictionary build_dictionary(const UpaGeometry& geom, double lambda,
                            int grid_el, int grid_az);

// Row-selection sensing operator: the indices of RIS elements that carry a
// channel sensor and RF chain. Each conceptual row of C has exactly one
// nonzero entry.
struct SensingMatrix {
  std::vector<int> rows;  // distinct element indices, in selection order

  int count() const { return static_cast<int>(rows.size()); }
  Eigen::VectorXcd select(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd adjoint_embed(const Eigen::VectorXcd& c, int m) const;
};

// Ratio of largest to smallest nonzero singular value of the row
// submatrix D_{rows,:}; +inf when numerically rank-deficient.
double row_submatrix_cond(const Dictionary& dict, const std::vector<int>& rows);

// Greedy sensor placement: grow the set one element at a time, picking the
// index that minimizes the condition number of the selected row submatrix.
// Deterministic; ties break toward the lowest index.
SensingMatrix place_sensors(const Dictionary& dict, int c, int n_threads = 1);

struct SparseEstimate {
  std::vector<int> support;
  Eigen::VectorXcd coeffs;  // aligned with support
  double residual_norm = 0.0;
  bool refit_fallback = false;  // rank-deficient LS refit happened
};

// Sensing submatrix A = C D (size C x D) with precomputed helpers: the
// adjoint copy keeps correlation scans on the leading dimension, and the
// optional Gram A^H A turns per-iteration rescans into O(D k) updates.
// The Gram is built only while D stays below the memory guard.
struct SensingOperator {
  Eigen::MatrixXcd a;      // C x D
  Eigen::MatrixXcd a_adj;  // D x C
  Eigen::MatrixXcd gram;   // D x D or empty

  int measurements() const { return static_cast<int>(a.rows()); }
  int atoms() const { return static_cast<int>(a.cols()); }
};

SensingOperator make_sensing_operator(const Dictionary& dict,
                                      const SensingMatrix& sense,
                                      bool with_gram = true);

// Orthogonal matching pursuit on a measurement y: greedy max-|correlation|
// atom selection with a least-squares refit each step. Stops at `sparsity`
// atoms or when the residual drops below rel_tol * ||y||.
SparseEstimate omp_recover(const Eigen::VectorXcd& y, const SensingOperator& op,
                           int sparsity, double rel_tol = 1e-12);
SparseEstimate omp_recover(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& a,
                           int sparsity, double rel_tol = 1e-12);

// D * s_hat assembled from the support atoms only.
Eigen::VectorXcd reconstruct(const Dictionary& dict, const SparseEstimate& s);

// CSI attack: matched-filter both pilot measurement vectors, recover each
// link by OMP and return h_E^hat = g_BE^hat^T diag(w) g_AE^hat.
std::complex<double> csi_attack_round(
    const Eigen::VectorXcd& y_a_raw, std::complex<double> pilot_a,
    const Eigen::VectorXcd& y_b_raw, std::complex<double> pilot_b,
    const Eigen::VectorXcd& weights, const Dictionary& dict,
    const SensingOperator& op, int sparsity);

// Two-way attack: the random pilots stay unknown, so OMP recovers the
// combined vectors s q directly and the feature is reconstructed from the
// supports, phi_E^hat = (D sq_B)^T diag(w) (D sq_A).
std::complex<double> twoway_attack_round(
    const Eigen::VectorXcd& r_a, const Eigen::VectorXcd& r_b,
    const Eigen::VectorXcd& weights, const Dictionary& dict,
    const SensingOperator& op, int sparsity);

}  // namespace riskeysim
