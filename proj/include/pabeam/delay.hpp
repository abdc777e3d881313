#pragma once

#include "pabeam/core.hpp"

namespace pabeam {

// One-way photoacoustic delay: the source emits, the element receives.
inline double propagation_delay(const Point& pixel, const Point& element,
                                double sound_speed) {
  if (sound_speed <= 0) throw std::domain_error("sound_speed must be > 0");
  return std::hypot(pixel.lateral - element.lateral, pixel.axial - element.axial) /
         sound_speed;
}

// Linear interpolation at fractional index time*fs; taps outside [0, T-1] read 0.
inline double sample_at(const Eigen::Ref<const Eigen::RowVectorXd>& channel,
                        double time, double fs) {
  const double idx = time * fs;
  const long t = channel.size();
  if (idx < 0.0) return 0.0;
  const long i0 = static_cast<long>(std::floor(idx));
  const double frac = idx - i0;
  const double a = (i0 >= 0 && i0 < t) ? channel[i0] : 0.0;
  const double b = (i0 + 1 >= 0 && i0 + 1 < t) ? channel[i0 + 1] : 0.0;
  return a + frac * (b - a);
}

inline Eigen::VectorXd aligned_snapshot(const ChannelDataSet& channels,
                                        const Point& pixel) {
  const int m = channels.geometry.num_elements;
  Eigen::VectorXd snapshot(m);
  for (int i = 0; i < m; ++i) {
    const double tau = propagation_delay(pixel, element_position(i, channels.geometry),
                                         channels.acq.sound_speed);
    snapshot[i] = sample_at(channels.samples.row(i), tau, channels.acq.sampling_rate);
  }
  return snapshot;
}

// M x (2K+1) matrix; column j holds per-element samples at delay + (j-K)/fs.
inline Eigen::MatrixXd aligned_window(const ChannelDataSet& channels,
                                      const Point& pixel, int k_half) {
  if (k_half < 0) throw std::domain_error("K must be >= 0");
  const int m = channels.geometry.num_elements;
  const double fs = channels.acq.sampling_rate;
  Eigen::MatrixXd window(m, 2 * k_half + 1);
  for (int i = 0; i < m; ++i) {
    const double tau = propagation_delay(pixel, element_position(i, channels.geometry),
                                         channels.acq.sound_speed);
    for (int j = -k_half; j <= k_half; ++j)
      window(i, j + k_half) = sample_at(channels.samples.row(i), tau + j / fs, fs);
  }
  return window;
}

}  // namespace pabeam
