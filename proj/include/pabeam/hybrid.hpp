#pragma once

#include "pabeam/adaptive.hpp"
#include "pabeam/classic.hpp"
#include "pabeam/delay.hpp"
#include "pabeam/dsp.hpp"

namespace pabeam {

// Factorized DMAS term signals along one scanline: row i, column k holds
// dmas_terms(snapshot at depth k)[i]. Each row is a time series at the
// lattice rate.
inline Eigen::MatrixXd term_lines(const ChannelDataSet& channels, double lateral,
                                  const std::vector<double>& depths,
                                  DmasSqrtMode mode = DmasSqrtMode::Pairwise) {
  const int m = channels.geometry.num_elements;
  if (m < 2) throw std::domain_error("term_lines: needs at least 2 elements");
  Eigen::MatrixXd terms(m - 1, depths.size());
  for (std::size_t k = 0; k < depths.size(); ++k) {
    const Eigen::VectorXd snapshot =
        aligned_snapshot(channels, Point{lateral, depths[k]});
    terms.col(k) = dmas_terms(snapshot, mode);
  }
  return terms;
}

inline Eigen::MatrixXd term_lines(const ChannelDataSet& channels, int scanline,
                                  const ImagingGrid& grid,
                                  DmasSqrtMode mode = DmasSqrtMode::Pairwise) {
  const double lateral = pixel_position(0, scanline, grid).lateral;
  std::vector<double> depths(grid.num_axial());
  for (int r = 0; r < grid.num_axial(); ++r)
    depths[r] = grid.axial_start + r * grid.spacing;
  return term_lines(channels, lateral, depths, mode);
}

// EIBMV across the M-1 term signals in place of their uniform outer sum:
// band-pass each term row, then per axial sample run the full adaptive chain
// (covariance -> loading -> MV -> eigenspace projection -> subarray average)
// treating terms as channels.
//
// Covariance columns are integer shifts of the filtered term rows, so the
// per-column outer-product sums are cached in a ring and reused across the
// 2K+1-sample window.
inline std::vector<double> eibmv_dmas_line(const Eigen::MatrixXd& terms,
                                           const BeamformConfig& config, double fs) {
  const int channels = static_cast<int>(terms.rows());
  const int n = static_cast<int>(terms.cols());
  const int l = config.subarray_length;
  if (l < 1 || l > channels)
    throw std::domain_error("eibmv_dmas_line: subarray_length out of range");
  const int s = channels - l + 1;
  const int kh = config.temporal_half_width;
  const int span = 2 * kh + 1;

  Eigen::MatrixXd filtered(channels, n);
  for (int i = 0; i < channels; ++i) {
    std::vector<double> row(terms.row(i).begin(), terms.row(i).end());
    if (config.bandpass_enabled)
      row = bandpass(row, fs, config.band_lo, config.band_hi, config.tukey_alpha);
    filtered.row(i) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), n);
  }

  // per-column contribution C_n = X_n X_n^T over subarrays, ring-buffered
  std::vector<Eigen::MatrixXd> ring(span, Eigen::MatrixXd::Zero(l, l));
  auto column_contribution = [&](int col) -> Eigen::MatrixXd {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(l, l);
    if (col >= 0 && col < n) detail::sliding_outer_sum(filtered.col(col), l, c);
    return c;
  };
  for (int j = -kh; j < kh; ++j) ring[(j + span) % span] = column_contribution(j);

  std::vector<double> out(n, 0.0);
  Eigen::MatrixXd r(l, l);
  for (int k = 0; k < n; ++k) {
    ring[(k + kh) % span] = column_contribution(k + kh);
    r.setZero();
    for (const auto& c : ring) r += c;
    r /= double(span) * s;

    if (!(r.trace() > 0)) continue;  // silent pixel
    const Eigen::MatrixXd loaded = diagonal_load(r, config.loading_factor);
    Eigen::VectorXd w = mv_weights(loaded);
    w = eibmv_project(w, sym_eig(loaded), config.subspace_threshold);
    out[k] = subarray_output(w, filtered.col(k), l);
  }
  return out;
}

}  // namespace pabeam
