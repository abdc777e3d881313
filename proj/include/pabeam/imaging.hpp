#pragma once

#include "pabeam/adaptive.hpp"
#include "pabeam/classic.hpp"
#include "pabeam/delay.hpp"
#include "pabeam/dsp.hpp"
#include "pabeam/hybrid.hpp"

#include <thread>

namespace pabeam {

// Scanlines are beamformed on a dense axial lattice whose step is c/fs, so a
// line indexed by depth is simultaneously a time series at the acquisition
// rate (t = z/c, one-way) and the 4-12 MHz band-pass is meaningful. Grid
// images are sampled from these lines afterwards.
struct AxialLattice {
  double z0 = 0.0;  // m
  double dz = 0.0;  // m, = c/fs
  int n = 0;

  std::vector<double> depths() const {
    std::vector<double> d(n);
    for (int k = 0; k < n; ++k) d[k] = z0 + k * dz;
    return d;
  }
};

namespace detail {

// smallest 5-smooth integer >= n, keeps the kissfft plans cheap
inline int next_smooth(int n) {
  for (int c = n;; ++c) {
    int v = c;
    for (int f : {2, 3, 5})
      while (v % f == 0) v /= f;
    if (v == 1) return c;
  }
}

}  // namespace detail

inline AxialLattice make_dense_lattice(const ImagingGrid& grid,
                                       const AcquisitionParams& acq) {
  AxialLattice lat;
  lat.z0 = grid.axial_start;
  lat.dz = acq.sound_speed / acq.sampling_rate;
  const int needed =
      static_cast<int>(std::floor((grid.axial_end - grid.axial_start) / lat.dz)) + 2;
  lat.n = detail::next_smooth(needed);
  return lat;
}

// Deterministic static partition; results never depend on worker count
// because each index writes disjoint output.
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

namespace detail {

inline std::vector<double> scanline_classic(const ChannelDataSet& channels,
                                            double lateral, const AxialLattice& lat,
                                            const BeamformConfig& config) {
  std::vector<double> line(lat.n);
  for (int k = 0; k < lat.n; ++k) {
    const Eigen::VectorXd x =
        aligned_snapshot(channels, Point{lateral, lat.z0 + k * lat.dz});
    line[k] = config.method == Method::DAS ? das(x) : dmas(x, config.dmas_sqrt_mode);
  }
  return line;
}

inline std::vector<double> scanline_adaptive(const ChannelDataSet& channels,
                                             double lateral, const AxialLattice& lat,
                                             const BeamformConfig& config) {
  std::vector<double> line(lat.n, 0.0);
  for (int k = 0; k < lat.n; ++k) {
    const Point pixel{lateral, lat.z0 + k * lat.dz};
    const Eigen::MatrixXd window =
        aligned_window(channels, pixel, config.temporal_half_width);
    const CovarianceEstimate cov = estimate_covariance(window, config.subarray_length);
    if (!(cov.matrix.trace() > 0)) continue;  // silent pixel
    const Eigen::MatrixXd loaded = diagonal_load(cov.matrix, config.loading_factor);
    Eigen::VectorXd w = mv_weights(loaded);
    if (config.method == Method::EIBMV)
      w = eibmv_project(w, sym_eig(loaded), config.subspace_threshold);
    line[k] = subarray_output(w, window.col(config.temporal_half_width),
                              config.subarray_length);
  }
  return line;
}

inline std::vector<double> scanline_raw(const ChannelDataSet& channels, double lateral,
                                        const AxialLattice& lat,
                                        const BeamformConfig& config) {
  const double fs = channels.acq.sampling_rate;
  if (config.method == Method::EIBMV_DMAS) {
    // per-term filtering happens inside; no second band-pass
    const Eigen::MatrixXd terms =
        term_lines(channels, lateral, lat.depths(), config.dmas_sqrt_mode);
    return eibmv_dmas_line(terms, config, fs);
  }
  std::vector<double> line = config.method == Method::DAS || config.method == Method::DMAS
                                 ? scanline_classic(channels, lateral, lat, config)
                                 : scanline_adaptive(channels, lateral, lat, config);
  if (config.bandpass_enabled)
    line = bandpass(line, fs, config.band_lo, config.band_hi, config.tukey_alpha);
  return line;
}

}  // namespace detail

// Dense beamformed lines, one column per scanline.
inline Eigen::MatrixXd compute_dense(const ChannelDataSet& channels,
                                     const ImagingGrid& grid,
                                     const BeamformConfig& config, int workers = 1) {
  const AxialLattice lat = make_dense_lattice(grid, channels.acq);
  const int n_lat = grid.num_lateral();
  Eigen::MatrixXd dense(lat.n, n_lat);
  parallel_for(n_lat, workers, [&](int c) {
    const double lateral = -0.5 * grid.lateral_extent + c * grid.spacing;
    const std::vector<double> line = detail::scanline_raw(channels, lateral, lat, config);
    dense.col(c) = Eigen::Map<const Eigen::VectorXd>(line.data(), lat.n);
  });
  return dense;
}

// Sample dense columns at the grid's axial pixels (linear interpolation).
inline Eigen::MatrixXd resample_to_grid(const Eigen::MatrixXd& dense,
                                        const AxialLattice& lat,
                                        const ImagingGrid& grid) {
  Eigen::MatrixXd image(grid.num_axial(), grid.num_lateral());
  for (int r = 0; r < grid.num_axial(); ++r) {
    const double z = grid.axial_start + r * grid.spacing;
    const double idx = (z - lat.z0) / lat.dz;
    const int i0 = std::min(std::max(0, static_cast<int>(std::floor(idx))), lat.n - 2);
    const double frac = idx - i0;
    image.row(r) = (1.0 - frac) * dense.row(i0) + frac * dense.row(i0 + 1);
  }
  return image;
}

inline Eigen::MatrixXd image_classic(const ChannelDataSet& channels,
                                     const ImagingGrid& grid,
                                     const BeamformConfig& config, int workers = 1) {
  if (config.method != Method::DAS && config.method != Method::DMAS)
    throw std::domain_error("image_classic: method must be DAS or DMAS");
  const AxialLattice lat = make_dense_lattice(grid, channels.acq);
  return resample_to_grid(compute_dense(channels, grid, config, workers), lat, grid);
}

inline Eigen::MatrixXd image_adaptive(const ChannelDataSet& channels,
                                      const ImagingGrid& grid,
                                      const BeamformConfig& config, int workers = 1) {
  if (config.method != Method::MV && config.method != Method::EIBMV)
    throw std::domain_error("image_adaptive: method must be MV or EIBMV");
  const AxialLattice lat = make_dense_lattice(grid, channels.acq);
  return resample_to_grid(compute_dense(channels, grid, config, workers), lat, grid);
}

inline Eigen::MatrixXd image_eibmv_dmas(const ChannelDataSet& channels,
                                        const ImagingGrid& grid,
                                        const BeamformConfig& config, int workers = 1) {
  if (config.method != Method::EIBMV_DMAS)
    throw std::domain_error("image_eibmv_dmas: method must be EIBMV_DMAS");
  const AxialLattice lat = make_dense_lattice(grid, channels.acq);
  return resample_to_grid(compute_dense(channels, grid, config, workers), lat, grid);
}

// Envelope detection on the dense lines, then grid sampling.
inline Eigen::MatrixXd envelope_from_dense(const Eigen::MatrixXd& dense,
                                           const AxialLattice& lat,
                                           const ImagingGrid& grid) {
  Eigen::MatrixXd env(dense.rows(), dense.cols());
  for (Eigen::Index c = 0; c < dense.cols(); ++c) {
    std::vector<double> line(dense.col(c).begin(), dense.col(c).end());
    const std::vector<double> e = envelope(line);
    env.col(c) = Eigen::Map<const Eigen::VectorXd>(e.data(), dense.rows());
  }
  return resample_to_grid(env, lat, grid);
}

inline Eigen::MatrixXd envelope_image(const ChannelDataSet& channels,
                                      const ImagingGrid& grid,
                                      const BeamformConfig& config, int workers = 1) {
  const AxialLattice lat = make_dense_lattice(grid, channels.acq);
  return envelope_from_dense(compute_dense(channels, grid, config, workers), lat, grid);
}

}  // namespace pabeam
