#include "riskeysim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "riskeysim/util.hpp"

namespace riskeysim {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

Dictionary build_dictionary(const UpaGeometry& geom, double lambda,
                            int grid_el, int grid_az) {
  if (grid_el < 2 || grid_az < 2)
    throw std::invalid_argument("build_dictionary: grid counts must be >= 2");
  Dictionary d;
  d.geom = geom;
  d.lambda = lambda;
  d.grid_el = grid_el;
  d.grid_az = grid_az;
  d.grid.reserve(static_cast<std::size_t>(grid_el) * grid_az);
  auto grid_point = [](int i, int n) {
    const double v = -kHalfPi + (2.0 * kHalfPi) * i / (n - 1);
    return std::clamp(v, -kHalfPi, kHalfPi);
  };
  for (int i = 0; i < grid_el; ++i) {
    const double el = grid_point(i, grid_el);
    for (int j = 0; j < grid_az; ++j)
      d.grid.push_back({el, grid_point(j, grid_az)});
  }
  d.ky.resize(d.atoms());
  d.kz.resize(d.atoms());
  for (int k = 0; k < d.atoms(); ++k) {
    const Wavenumbers wn = angle_wavenumbers(d.grid[k], lambda);
    d.ky[k] = wn.ky;
    d.kz[k] = wn.kz;
  }
  return d;
}

Eigen::VectorXcd Dictionary::atom(int d) const {
  const int m_total = geom.size();
  Eigen::VectorXcd u(m_total);
  for (int m = 0; m < m_total; ++m) {
    const Eigen::Vector3d l = geom.element_position(m);
    u[m] = std::polar(1.0, ky[d] * l.y() + kz[d] * l.z());
  }
  return u;
}

Eigen::VectorXcd Dictionary::row(int m) const {
  const Eigen::Vector3d l = geom.element_position(m);
  Eigen::VectorXcd r(atoms());
  for (int d = 0; d < atoms(); ++d)
    r[d] = std::polar(1.0, ky[d] * l.y() + kz[d] * l.z());
  return r;
}

Eigen::MatrixXcd Dictionary::rows(const std::vector<int>& idx) const {
  Eigen::MatrixXcd r(static_cast<int>(idx.size()), atoms());
  for (std::size_t i = 0; i < idx.size(); ++i) r.row(static_cast<int>(i)) = row(idx[i]);
  return r;
}

int Dictionary::nearest_atom(AnglePair a) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < atoms(); ++k) {
    const double de = grid[k].el - a.el;
    const double da = grid[k].az - a.az;
    const double dist = de * de + da * da;
    if (dist < best_d) {
      best_d = dist;
      best = k;
    }
  }
  return best;
}

Eigen::VectorXcd SensingMatrix::select(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out(count());
  for (int i = 0; i < count(); ++i) out[i] = v[rows[i]];
  return out;
}

Eigen::VectorXcd SensingMatrix::adjoint_embed(const Eigen::VectorXcd& c,
                                              int m) const {
  if (c.size() != count())
    throw std::invalid_argument("SensingMatrix::adjoint_embed: size mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
  for (int i = 0; i < count(); ++i) out[rows[i]] = c[i];
  return out;
}

namespace {

// Condition number from the eigenvalues of a row Gram matrix.
double cond_from_gram(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  if (!(lmax > 0.0)) return std::numeric_limits<double>::infinity();
  const double floor = lmax * 1e-12;
  double lmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    const double v = ev[i];
    if (v > floor) lmin = std::min(lmin, v);
  }
  if (!std::isfinite(lmin)) return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

}  // namespace

double row_submatrix_cond(const Dictionary& dict, const std::vector<int>& rows) {
  const Eigen::MatrixXcd b = dict.rows(rows);
  return cond_from_gram(b * b.adjoint());
}

SensingMatrix place_sensors(const Dictionary& dict, int c, int n_threads) {
  const int m_total = dict.geom.size();
  if (c < 1 || c > m_total)
    throw std::invalid_argument("place_sensors: need 1 <= c <= M");

  SensingMatrix sense;
  Eigen::MatrixXcd selected(0, dict.atoms());   // rows picked so far
  Eigen::MatrixXcd gram(0, 0);                  // their Gram matrix

  std::vector<char> taken(m_total, 0);
  for (int step = 0; step < c; ++step) {
    const int k = static_cast<int>(sense.rows.size());
    struct Best {
      double cond = std::numeric_limits<double>::infinity();
      int idx = -1;
    };
    std::vector<Best> block_best((m_total + 255) / 256);

    parallel_for_blocks(m_total, n_threads, 256, [&](std::int64_t lo, std::int64_t hi) {
      Best local;
      Eigen::MatrixXcd cand_gram(k + 1, k + 1);
      if (k > 0) cand_gram.topLeftCorner(k, k) = gram;
      for (std::int64_t i = lo; i < hi; ++i) {
        if (taken[i]) continue;
        const Eigen::VectorXcd r = dict.row(static_cast<int>(i));
        cand_gram(k, k) = std::complex<double>(static_cast<double>(dict.atoms()), 0.0);
        if (k > 0) {
          const Eigen::VectorXcd cross = selected * r.conjugate();
          cand_gram.topRightCorner(k, 1) = cross;
          cand_gram.bottomLeftCorner(1, k) = cross.adjoint();
        }
        const double cond = cond_from_gram(cand_gram);
        if (cond < local.cond || (cond == local.cond && local.idx == -1)) {
          local.cond = cond;
          local.idx = static_cast<int>(i);
        }
      }
      block_best[lo / 256] = local;
    });

    Best best;
    for (const Best& b : block_best) {
      if (b.idx < 0) continue;
      if (b.cond < best.cond || (b.cond == best.cond && b.idx < best.idx)) best = b;
    }
    if (best.idx < 0) throw std::logic_error("place_sensors: no candidate left");

    taken[best.idx] = 1;
    sense.rows.push_back(best.idx);
    const Eigen::VectorXcd r = dict.row(best.idx);
    selected.conservativeResize(k + 1, Eigen::NoChange);
    selected.row(k) = r.transpose();
    gram.conservativeResize(k + 1, k + 1);
    gram(k, k) = std::complex<double>(static_cast<double>(dict.atoms()), 0.0);
    if (k > 0) {
      const Eigen::VectorXcd cross = selected.topRows(k) * r.conjugate();
      gram.topRightCorner(k, 1) = cross;
      gram.bottomLeftCorner(1, k) = cross.adjoint();
    }
  }
  return sense;
}

SensingOperator make_sensing_operator(const Dictionary& dict,
                                      const SensingMatrix& sense,
                                      bool with_gram) {
  SensingOperator op;
  op.a = dict.rows(sense.rows);
  op.a_adj = op.a.adjoint();
  // 4096 atoms is a 256 MB Gram; anything larger falls back to plain scans.
  if (with_gram && dict.atoms() <= 4096) op.gram = op.a_adj * op.a;
  return op;
}

SparseEstimate omp_recover(const Eigen::VectorXcd& y, const SensingOperator& op,
                           int sparsity, double rel_tol) {
  if (sparsity < 1) throw std::invalid_argument("omp_recover: sparsity must be >= 1");
  if (op.a.rows() != y.size())
    throw std::invalid_argument("omp_recover: measurement/operator mismatch");

  const double y_norm = y.norm();
  SparseEstimate est;
  est.residual_norm = y_norm;
  if (!(y_norm > 0.0)) return est;

  const bool use_gram = op.gram.size() > 0;
  const int max_atoms = std::min<int>(sparsity, op.measurements());
  Eigen::MatrixXcd basis(op.measurements(), max_atoms);
  Eigen::VectorXcd corr0;
  if (use_gram) corr0 = op.a_adj * y;
  Eigen::VectorXcd residual = y;
  std::vector<char> used(op.atoms(), 0);
  double residual_norm = y_norm;

  for (int it = 0; it < max_atoms; ++it) {
    if (residual_norm <= rel_tol * y_norm) break;
    Eigen::VectorXcd corr;
    if (use_gram) {
      corr = corr0;
      for (int k = 0; k < it; ++k)
        corr -= est.coeffs[k] * op.gram.col(est.support[k]);
    } else {
      corr = op.a_adj * residual;
    }
    int pick = -1;
    double best = -1.0;
    for (int d = 0; d < corr.size(); ++d) {
      if (used[d]) continue;
      const double v = std::norm(corr[d]);
      if (v > best) {
        best = v;
        pick = d;
      }
    }
    if (pick < 0) break;
    used[pick] = 1;
    est.support.push_back(pick);
    basis.col(it) = op.a.col(pick);

    const auto sub = basis.leftCols(it + 1);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(sub);
    if (cod.rank() < it + 1) est.refit_fallback = true;  // minimum-norm refit
    est.coeffs = cod.solve(y);
    residual = y - sub * est.coeffs;
    residual_norm = residual.norm();
  }
  est.residual_norm = residual_norm;
  return est;
}

SparseEstimate omp_recover(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& a,
                           int sparsity, double rel_tol) {
  SensingOperator op;
  op.a = a;
  op.a_adj = a.adjoint();
  return omp_recover(y, op, sparsity, rel_tol);
}

Eigen::VectorXcd reconstruct(const Dictionary& dict, const SparseEstimate& s) {
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(dict.geom.size());
  for (std::size_t i = 0; i < s.support.size(); ++i)
    g += s.coeffs[static_cast<int>(i)] * dict.atom(s.support[i]);
  return g;
}

std::complex<double> csi_attack_round(
    const Eigen::VectorXcd& y_a_raw, std::complex<double> pilot_a,
    const Eigen::VectorXcd& y_b_raw, std::complex<double> pilot_b,
    const Eigen::VectorXcd& weights, const Dictionary& dict,
    const SensingOperator& op, int sparsity) {
  if (!(std::norm(pilot_a) > 0.0) || !(std::norm(pilot_b) > 0.0))
    throw std::invalid_argument("csi_attack_round: zero pilot");
  const Eigen::VectorXcd ya = y_a_raw * (std::conj(pilot_a) / std::norm(pilot_a));
  const Eigen::VectorXcd yb = y_b_raw * (std::conj(pilot_b) / std::norm(pilot_b));
  const SparseEstimate sa = omp_recover(ya, op, sparsity);
  const SparseEstimate sb = omp_recover(yb, op, sparsity);
  const Eigen::VectorXcd ga = reconstruct(dict, sa);
  const Eigen::VectorXcd gb = reconstruct(dict, sb);
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < weights.size(); ++m)
    acc += weights[m] * ga[m] * gb[m];
  return acc;
}

std::complex<double> twoway_attack_round(
    const Eigen::VectorXcd& r_a, const Eigen::VectorXcd& r_b,
    const Eigen::VectorXcd& weights, const Dictionary& dict,
    const SensingOperator& op, int sparsity) {
  const SparseEstimate sa = omp_recover(r_a, op, sparsity);
  const SparseEstimate sb = omp_recover(r_b, op, sparsity);
  const Eigen::VectorXcd ga = reconstruct(dict, sa);
  const Eigen::VectorXcd gb = reconstruct(dict, sb);
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < weights.size(); ++m)
    acc += weights[m] * ga[m] * gb[m];
  return acc;
}

}  // namespace riskeysim
