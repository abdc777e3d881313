#pragma once

#include "pabeam/core.hpp"

namespace pabeam {

inline double das(const Eigen::Ref<const Eigen::VectorXd>& snapshot) {
  if (snapshot.size() < 1) throw std::domain_error("das: empty snapshot");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < snapshot.size(); ++i) sum += snapshot[i];
  return sum;
}

// sign(xi*xj)*sqrt(|xi*xj|) of a single pair.
inline double dmas_pair(double xi, double xj) {
  const double p = xi * xj;
  return p >= 0 ? std::sqrt(p) : -std::sqrt(-p);
}

// The M-1 factorized rows of the pairwise expansion; row i collects pairs
// (i, j>i). Ascending accumulation order, so outputs are bit-stable.
inline Eigen::VectorXd dmas_terms(const Eigen::Ref<const Eigen::VectorXd>& snapshot,
                                  DmasSqrtMode mode = DmasSqrtMode::Pairwise) {
  const Eigen::Index m = snapshot.size();
  if (m < 2) throw std::domain_error("dmas: needs at least 2 channels");
  Eigen::VectorXd terms(m - 1);
  if (mode == DmasSqrtMode::Pairwise) {
    for (Eigen::Index i = 0; i < m - 1; ++i) {
      double row = 0.0;
      for (Eigen::Index j = i + 1; j < m; ++j) row += dmas_pair(snapshot[i], snapshot[j]);
      terms[i] = row;
    }
  } else {
    // sign/sqrt applied to the whole row product xi * sum_{j>i} xj
    double tail = 0.0;
    for (Eigen::Index j = 1; j < m; ++j) tail += snapshot[j];
    for (Eigen::Index i = 0; i < m - 1; ++i) {
      terms[i] = dmas_pair(snapshot[i], tail);
      if (i + 1 < m - 1) tail -= snapshot[i + 1];
    }
  }
  return terms;
}

// Sum of the factorized rows, in row order; identical accumulation to
// dmas_terms so the row-sum identity holds exactly.
inline double dmas(const Eigen::Ref<const Eigen::VectorXd>& snapshot,
                   DmasSqrtMode mode = DmasSqrtMode::Pairwise) {
  const Eigen::VectorXd terms = dmas_terms(snapshot, mode);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < terms.size(); ++i) sum += terms[i];
  return sum;
}

// Residual between the factorized and flat pairwise forms (square-root-free).
inline double expansion_identity_check(
    const Eigen::Ref<const Eigen::VectorXd>& snapshot) {
  const Eigen::Index m = snapshot.size();
  if (m < 2) throw std::domain_error("expansion check: needs at least 2 channels");
  double factorized = 0.0;
  for (Eigen::Index i = 0; i < m - 1; ++i) {
    double tail = 0.0;
    for (Eigen::Index j = i + 1; j < m; ++j) tail += snapshot[j];
    factorized += snapshot[i] * tail;
  }
  double pairwise = 0.0;
  for (Eigen::Index i = 0; i < m - 1; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) pairwise += snapshot[i] * snapshot[j];
  return std::abs(factorized - pairwise);
}

}  // namespace pabeam
