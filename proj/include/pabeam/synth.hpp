#pragma once

#include "pabeam/core.hpp"
#include "pabeam/delay.hpp"

#include <cstdint>
#include <limits>
#include <random>

namespace pabeam {

struct Absorber {
  Point center;
  double radius = 0.1e-3;   // m
  double amplitude = 1.0;   // initial pressure, arbitrary units
};

struct Phantom {
  std::vector<Absorber> absorbers;
};

struct NoiseSpec {
  double target_snr_db = 50.0;  // +inf disables noise
  std::uint64_t seed = 12345;
};

// Bipolar N-wave of a uniformly pressurized sphere observed at distance R:
// p0*(R - c*t)/(2R) inside the support |R - c*t| <= a, zero outside.
inline double nwave_pressure(double distance, double radius, double amplitude,
                             double time, double sound_speed) {
  if (!(distance > radius) || !(radius > 0))
    throw std::domain_error("nwave: requires R > a > 0");
  const double ct = sound_speed * time;
  if (ct < distance - radius || ct > distance + radius) return 0.0;
  return amplitude * (distance - ct) / (2.0 * distance);
}

// Gaussian-modulated cosine whose -6 dB spectral width is
// fractional_bandwidth * fc; truncated where the envelope drops below 1e-3 of
// peak; scaled to unit spectral magnitude at fc. Even-symmetric (zero phase).
inline std::vector<double> impulse_response(double center_freq,
                                            double fractional_bandwidth,
                                            double fs) {
  if (!(center_freq > 0 && center_freq < 0.5 * fs))
    throw std::domain_error("impulse_response: need 0 < fc < fs/2");
  if (!(fractional_bandwidth > 0 && fractional_bandwidth < 2))
    throw std::domain_error("impulse_response: need 0 < fractional_bandwidth < 2");
  // -6 dB amplitude full width 2*sqrt(2 ln 2) * sigma_f
  const double sigma_f = fractional_bandwidth * center_freq / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double tau = 1.0 / (2.0 * M_PI * sigma_f);
  const int half = static_cast<int>(std::ceil(tau * std::sqrt(2.0 * std::log(1e3)) * fs));
  std::vector<double> kernel(2 * half + 1);
  for (int n = -half; n <= half; ++n) {
    const double t = n / fs;
    kernel[n + half] = std::exp(-t * t / (2.0 * tau * tau)) * std::cos(2.0 * M_PI * center_freq * t);
  }
  // normalize: |sum_n k[n] e^{-i 2 pi fc n / fs}| = 1
  double re = 0.0, im = 0.0;
  for (int n = -half; n <= half; ++n) {
    const double ph = 2.0 * M_PI * center_freq * n / fs;
    re += kernel[n + half] * std::cos(ph);
    im -= kernel[n + half] * std::sin(ph);
  }
  const double mag = std::hypot(re, im);
  for (double& v : kernel) v /= mag;
  return kernel;
}

// Analytic forward model: per element, superpose the N-wave of each absorber
// at the element-to-center distance, convolved with the band-limited impulse
// response. Arrivals beyond the record are truncated (diagnostic appended).
inline ChannelDataSet simulate_channels(const Phantom& phantom,
                                        const ArrayGeometry& geometry,
                                        const AcquisitionParams& acq,
                                        double center_freq = 4e6,
                                        double fractional_bandwidth = 0.77,
                                        std::vector<std::string>* diagnostics = nullptr) {
  if (phantom.absorbers.empty())
    throw std::domain_error("simulate_channels: empty phantom");
  const int m = geometry.num_elements;
  const int t = acq.num_samples;
  const double fs = acq.sampling_rate;
  const double c = acq.sound_speed;
  const std::vector<double> kernel = impulse_response(center_freq, fractional_bandwidth, fs);
  const int kh = static_cast<int>(kernel.size()) / 2;

  ChannelDataSet out;
  out.samples = Eigen::MatrixXd::Zero(m, t);
  out.acq = acq;
  out.geometry = geometry;

  for (int i = 0; i < m; ++i) {
    const Point elem = element_position(i, geometry);
    for (std::size_t a = 0; a < phantom.absorbers.size(); ++a) {
      const Absorber& ab = phantom.absorbers[a];
      const double r = std::hypot(ab.center.lateral - elem.lateral,
                                  ab.center.axial - elem.axial);
      if (!(r > ab.radius))
        throw std::domain_error("simulate_channels: element inside absorber");
      if (ab.amplitude == 0.0) continue;
      const int k_lo = static_cast<int>(std::floor((r - ab.radius) / c * fs));
      const int k_hi = static_cast<int>(std::ceil((r + ab.radius) / c * fs));
      if (k_lo + kh >= t && diagnostics)
        diagnostics->push_back("absorber " + std::to_string(a) +
                               " arrival beyond record on element " + std::to_string(i) +
                               "; signal truncated");
      for (int k = std::max(0, k_lo); k <= k_hi; ++k) {
        const double v = nwave_pressure(r, ab.radius, ab.amplitude, k / fs, c);
        if (v == 0.0) continue;
        const int n_lo = std::max(-kh, -k);
        const int n_hi = std::min(kh, t - 1 - k);
        for (int n = n_lo; n <= n_hi; ++n)
          out.samples(i, k + n) += v * kernel[n + kh];
      }
    }
  }
  return out;
}

namespace detail {

// Fixed, fully specified normal generator (mt19937_64 + Box-Muller, one
// variate per draw) so realizations are reproducible across toolchains.
class NormalDraw {
 public:
  explicit NormalDraw(std::uint64_t seed) : rng_(seed) {}
  double operator()(double stddev) {
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform_open() {
    // (0, 1]: never returns 0, so log(u1) is finite
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
  }
  std::mt19937_64 rng_;
};

}  // namespace detail

// Adds zero-mean Gaussian noise sized so that mean signal power over the
// signal support (samples above 1e-6 of the clean peak) over noise variance
// hits target_snr_db. Element-major, sample-major draw order.
inline ChannelDataSet add_noise(const ChannelDataSet& channels, const NoiseSpec& spec) {
  const double peak = channels.samples.cwiseAbs().maxCoeff();
  if (!(peak > 0)) throw std::domain_error("add_noise: all-zero input, SNR undefined");
  if (std::isinf(spec.target_snr_db)) return channels;

  const double support_floor = 1e-6 * peak;
  double power = 0.0;
  long count = 0;
  for (Eigen::Index i = 0; i < channels.samples.rows(); ++i)
    for (Eigen::Index k = 0; k < channels.samples.cols(); ++k) {
      const double v = channels.samples(i, k);
      if (std::abs(v) > support_floor) {
        power += v * v;
        ++count;
      }
    }
  const double variance = (power / count) / std::pow(10.0, spec.target_snr_db / 10.0);
  const double stddev = std::sqrt(variance);

  ChannelDataSet noisy = channels;
  detail::NormalDraw draw(spec.seed);
  for (Eigen::Index i = 0; i < noisy.samples.rows(); ++i)
    for (Eigen::Index k = 0; k < noisy.samples.cols(); ++k)
      noisy.samples(i, k) += draw(stddev);
  return noisy;
}

}  // namespace pabeam
