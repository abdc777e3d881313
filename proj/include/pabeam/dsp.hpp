#pragma once

#include "pabeam/core.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>

namespace pabeam {

// Tukey taper evaluated at u in [0,1]: cosine ramps over alpha/2 of each end.
inline double tukey_value(double u, double alpha) {
  if (alpha < 0 || alpha > 1) throw std::domain_error("tukey alpha must be in [0,1]");
  if (u < 0 || u > 1) return 0.0;
  if (alpha == 0.0) return 1.0;
  const double half = 0.5 * alpha;
  if (u < half) return 0.5 * (1.0 + std::cos(M_PI * (u / half - 1.0)));
  if (u > 1.0 - half) return 0.5 * (1.0 + std::cos(M_PI * ((u - 1.0) / half + 1.0)));
  return 1.0;
}

inline std::vector<double> tukey_window(int n, double alpha) {
  if (n < 1) throw std::domain_error("window length must be >= 1");
  if (alpha < 0 || alpha > 1) throw std::domain_error("tukey alpha must be in [0,1]");
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  for (int i = 0; i < n; ++i) w[i] = tukey_value(double(i) / (n - 1), alpha);
  return w;
}

// Frequency-domain band-pass: positive bins in [f_lo, f_hi] weighted by a Tukey
// taper spanning the band, everything else zeroed, spectrum kept conjugate
// symmetric so the output stays real.
inline std::vector<double> bandpass(const std::vector<double>& line, double fs,
                                    double f_lo, double f_hi, double alpha) {
  if (!(f_lo > 0 && f_lo < f_hi && f_hi < 0.5 * fs))
    throw std::domain_error("band must satisfy 0 < f_lo < f_hi < fs/2");
  const int n = static_cast<int>(line.size());
  if (n == 0) return {};
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  std::vector<double> in(line);
  fft.fwd(spec, in);
  const double df = fs / n;
  spec[0] = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    const double f = k * df;
    double w = 0.0;
    if (f >= f_lo && f <= f_hi) w = tukey_value((f - f_lo) / (f_hi - f_lo), alpha);
    spec[k] *= w;
    if (k != n - k) spec[n - k] *= w;
  }
  std::vector<double> out;
  fft.inv(out, spec);
  return out;
}

// Magnitude of the analytic signal (negative frequencies zeroed, positive doubled).
inline std::vector<double> envelope(const std::vector<double>& line) {
  const int n = static_cast<int>(line.size());
  if (n < 2) throw std::domain_error("envelope needs at least 2 samples");
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  std::vector<double> in(line);
  fft.fwd(spec, in);
  for (int k = 1; k < n; ++k) {
    if (2 * k < n)
      spec[k] *= 2.0;
    else if (2 * k > n)
      spec[k] = 0.0;
    // k == n/2 (even n): kept with unit weight
  }
  std::vector<std::complex<double>> analytic;
  fft.inv(analytic, spec);
  std::vector<double> env(n);
  for (int k = 0; k < n; ++k) env[k] = std::abs(analytic[k]);
  return env;
}

// 20*log10(v/max), clamped below at -dynamic_range; global max maps to 0 dB.
inline Eigen::MatrixXd log_compress(const Eigen::MatrixXd& image,
                                    double dynamic_range) {
  if (dynamic_range <= 0) throw std::domain_error("dynamic_range must be > 0");
  const double peak = image.maxCoeff();
  if (!(peak > 0)) throw std::domain_error("log_compress: image has no positive peak");
  Eigen::MatrixXd db(image.rows(), image.cols());
  for (Eigen::Index c = 0; c < image.cols(); ++c)
    for (Eigen::Index r = 0; r < image.rows(); ++r) {
      const double v = image(r, c);
      double d = v > 0 ? 20.0 * std::log10(v / peak) : -dynamic_range;
      db(r, c) = std::max(d, -dynamic_range);
    }
  return db;
}

}  // namespace pabeam
