#pragma once

#include "pabeam/core.hpp"

#include <Eigen/Eigenvalues>

namespace pabeam {

struct CovarianceEstimate {
  Eigen::MatrixXd matrix;  // L x L, symmetric
  int num_subarrays = 0;   // M_ch - L + 1
};

namespace detail {

// C(i,j) = sum_{k=0}^{s-1} y[k+i]*y[k+j]: the subarray outer-product sum of a
// single column. The first row is computed directly; the rest slides along
// diagonals in O(1) per entry, turning the O(L^2 S) sum into O(L S + L^2).
inline void sliding_outer_sum(const Eigen::Ref<const Eigen::VectorXd>& y, int l,
                              Eigen::MatrixXd& c) {
  const int s = static_cast<int>(y.size()) - l + 1;
  for (int j = 0; j < l; ++j) c(0, j) = y.head(s).dot(y.segment(j, s));
  for (int i = 1; i < l; ++i)
    for (int j = i; j < l; ++j)
      c(i, j) = c(i - 1, j - 1) - y[i - 1] * y[j - 1] + y[s - 1 + i] * y[s - 1 + j];
  c.triangularView<Eigen::StrictlyLower>() = c.transpose();
}

}  // namespace detail

// Spatially smoothed, temporally averaged sample covariance:
// R = [1/((2K+1)(M_ch-L+1))] sum_n sum_l x_l(n) x_l(n)^T
// where x_l(n) is the length-L subvector starting at channel l in column n.
inline CovarianceEstimate estimate_covariance(
    const Eigen::Ref<const Eigen::MatrixXd>& window, int subarray_length) {
  const int channels = static_cast<int>(window.rows());
  const int cols = static_cast<int>(window.cols());
  const int l = subarray_length;
  if (l < 1 || l > channels)
    throw std::domain_error("subarray_length out of range");
  const int s = channels - l + 1;

  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(l, l);
  Eigen::MatrixXd c(l, l);
  for (int n = 0; n < cols; ++n) {
    detail::sliding_outer_sum(window.col(n), l, c);
    r += c;
  }
  r /= double(cols) * s;
  return {std::move(r), s};
}

// R + eps*I with eps = Delta * trace(R).
inline Eigen::MatrixXd diagonal_load(const Eigen::Ref<const Eigen::MatrixXd>& r,
                                     double delta) {
  if (delta <= 0) throw std::domain_error("loading factor must be > 0");
  Eigen::MatrixXd loaded = r;
  loaded.diagonal().array() += delta * r.trace();
  return loaded;
}

// w = R^-1 a / (a^T R^-1 a), steering a = ones (delays already applied).
inline Eigen::VectorXd mv_weights(const Eigen::Ref<const Eigen::MatrixXd>& r_loaded) {
  const Eigen::Index l = r_loaded.rows();
  const Eigen::VectorXd steering = Eigen::VectorXd::Ones(l);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(r_loaded);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("mv_weights: covariance decomposition failed");
  const Eigen::VectorXd solved = ldlt.solve(steering);
  const double gain = steering.dot(solved);
  if (!std::isfinite(gain) || std::abs(gain) < 1e-300)
    throw std::runtime_error("mv_weights: singular covariance matrix");
  return solved / gain;
}

struct EigenPair {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // orthonormal columns, column i pairs with values[i]
};

inline EigenPair sym_eig(const Eigen::Ref<const Eigen::MatrixXd>& r) {
  const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::domain_error("sym_eig: input not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_eig: eigendecomposition failed");
  // Eigen returns ascending order
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

// Project MV weights onto the signal subspace: eigenvectors with
// eigenvalue >= sigma * lambda_max, at least the principal one.
inline Eigen::VectorXd eibmv_project(const Eigen::Ref<const Eigen::VectorXd>& w_mv,
                                     const EigenPair& eig, double sigma) {
  if (sigma < 0 || sigma > 1) throw std::domain_error("sigma must be in [0,1]");
  const Eigen::Index l = eig.values.size();
  const double cutoff = sigma * eig.values[0];
  Eigen::Index keep = 1;
  while (keep < l && eig.values[keep] >= cutoff) ++keep;
  const auto basis = eig.vectors.leftCols(keep);
  return basis * (basis.transpose() * w_mv);
}

// Weights applied to every length-L subarray of the snapshot, averaged.
inline double subarray_output(const Eigen::Ref<const Eigen::VectorXd>& weights,
                              const Eigen::Ref<const Eigen::VectorXd>& snapshot,
                              int subarray_length) {
  const int channels = static_cast<int>(snapshot.size());
  const int l = subarray_length;
  if (l < 1 || l > channels) throw std::domain_error("subarray_length out of range");
  const int s = channels - l + 1;
  double sum = 0.0;
  for (int sub = 0; sub < s; ++sub) sum += weights.dot(snapshot.segment(sub, l));
  return sum / s;
}

}  // namespace pabeam
