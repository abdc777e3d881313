#pragma once

#include "pabeam/core.hpp"

#include <algorithm>
#include <limits>

namespace pabeam {

struct LateralProfile {
  std::vector<double> values_db;  // normalized, max = 0 dB
  double spacing = 0.0;           // m
  double depth = 0.0;             // m
};

// Axial ROI box in meters.
struct Roi {
  double lateral_min = 0.0, lateral_max = 0.0;
  double axial_min = 0.0, axial_max = 0.0;
};

inline LateralProfile lateral_profile(const Eigen::MatrixXd& db_image,
                                      const ImagingGrid& grid, double depth) {
  if (depth < grid.axial_start || depth > grid.axial_end)
    throw std::domain_error("lateral_profile: depth outside grid");
  const int row = static_cast<int>(std::llround((depth - grid.axial_start) / grid.spacing));
  const int r = std::min(std::max(row, 0), grid.num_axial() - 1);
  LateralProfile profile;
  profile.spacing = grid.spacing;
  profile.depth = grid.axial_start + r * grid.spacing;
  const double peak = db_image.row(r).maxCoeff();
  profile.values_db.resize(db_image.cols());
  for (Eigen::Index c = 0; c < db_image.cols(); ++c)
    profile.values_db[c] = db_image(r, c) - peak;
  return profile;
}

// -6 dB mainlobe width: walk from the peak to the first samples below -6 dB
// on each side, linearly interpolate both crossings, return their separation.
inline double fwhm_minus6db(const LateralProfile& profile) {
  const auto& v = profile.values_db;
  const int n = static_cast<int>(v.size());
  const int peak = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  if (peak == 0 || peak == n - 1)
    throw std::runtime_error("fwhm: peak at profile edge");
  const double level = v[peak] - 6.0;

  auto crossing = [&](int step) -> double {
    for (int i = peak + step; i >= 0 && i < n; i += step) {
      if (v[i] < level) {
        // interpolate in dB vs position between i-step and i
        const double frac = (v[i - step] - level) / (v[i - step] - v[i]);
        return (i - step + step * frac) * profile.spacing;
      }
    }
    throw std::runtime_error("fwhm: mainlobe wider than profile");
  };
  return crossing(+1) - crossing(-1);
}

// 20*log10(peak envelope in the signal ROI / std of envelope in the noise ROI).
inline double snr_db(const Eigen::MatrixXd& envelope_image, const ImagingGrid& grid,
                     const Roi& signal_roi, const Roi& noise_roi) {
  const bool overlap = signal_roi.lateral_min < noise_roi.lateral_max &&
                       noise_roi.lateral_min < signal_roi.lateral_max &&
                       signal_roi.axial_min < noise_roi.axial_max &&
                       noise_roi.axial_min < signal_roi.axial_max;
  if (overlap) throw std::domain_error("snr: ROIs must be disjoint");

  auto collect = [&](const Roi& roi) {
    std::vector<double> vals;
    for (int r = 0; r < grid.num_axial(); ++r)
      for (int c = 0; c < grid.num_lateral(); ++c) {
        const Point p = pixel_position(r, c, grid);
        if (p.lateral >= roi.lateral_min && p.lateral <= roi.lateral_max &&
            p.axial >= roi.axial_min && p.axial <= roi.axial_max)
          vals.push_back(envelope_image(r, c));
      }
    if (vals.empty()) throw std::domain_error("snr: ROI outside image");
    return vals;
  };

  const std::vector<double> sig = collect(signal_roi);
  const std::vector<double> noise = collect(noise_roi);
  const double peak = *std::max_element(sig.begin(), sig.end());
  double mean = 0.0;
  for (double x : noise) mean += x;
  mean /= noise.size();
  double var = 0.0;
  for (double x : noise) var += (x - mean) * (x - mean);
  var /= noise.size();
  if (!(var > 0)) throw std::domain_error("snr: zero-variance noise ROI");
  return 20.0 * std::log10(peak / std::sqrt(var));
}

// Highest profile value outside the mainlobe, where the mainlobe spans the
// first local minima flanking the peak. -inf when nothing lies outside.
inline double sidelobe_level(const LateralProfile& profile) {
  const auto& v = profile.values_db;
  const int n = static_cast<int>(v.size());
  const int peak = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  if (peak == 0 || peak == n - 1)
    throw std::runtime_error("sidelobe: peak at profile edge");

  int left = peak;
  while (left > 0 && v[left - 1] < v[left]) --left;
  int right = peak;
  while (right < n - 1 && v[right + 1] < v[right]) ++right;

  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    if (i < left || i > right) best = std::max(best, v[i] - v[peak]);
  return best;
}

}  // namespace pabeam
