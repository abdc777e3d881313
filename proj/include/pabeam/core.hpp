#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pabeam {

struct Point {
  double lateral = 0.0;  // m, along the array
  double axial = 0.0;    // m, depth
};

// Centered uniform linear array in the z=0 plane.
struct ArrayGeometry {
  int num_elements = 128;
  double pitch = 0.15e-3;  // m
};

struct AcquisitionParams {
  double sampling_rate = 50e6;  // Hz
  double sound_speed = 1540.0;  // m/s
  int num_samples = 2048;
};

struct ChannelDataSet {
  Eigen::MatrixXd samples;  // M x T
  AcquisitionParams acq;
  ArrayGeometry geometry;
};

// Rectangular lateral x axial pixel lattice, lateral extent centered on the array.
struct ImagingGrid {
  double lateral_extent = 20e-3;  // m, total width
  double axial_start = 0.0;       // m
  double axial_end = 50e-3;       // m
  double spacing = 0.1e-3;        // m, isotropic

  int num_lateral() const {
    return static_cast<int>(std::llround(lateral_extent / spacing)) + 1;
  }
  int num_axial() const {
    return static_cast<int>(std::llround((axial_end - axial_start) / spacing)) + 1;
  }
};

enum class Method { DAS, DMAS, MV, EIBMV, EIBMV_DMAS };

enum class DmasSqrtMode { Pairwise, RowProduct };

struct BeamformConfig {
  Method method = Method::DAS;
  int subarray_length = 64;        // L
  int temporal_half_width = 5;     // K, window spans 2K+1 samples
  double subspace_threshold = 0.5; // sigma, eigenvalue cutoff relative to lambda_max
  double loading_factor = 1.0 / 640.0;  // Delta, epsilon = Delta * trace(R)
  double band_lo = 4e6;            // Hz
  double band_hi = 12e6;           // Hz
  double tukey_alpha = 0.5;
  double dynamic_range = 60.0;     // dB
  bool bandpass_enabled = true;
  DmasSqrtMode dmas_sqrt_mode = DmasSqrtMode::Pairwise;
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::DAS: return "das";
    case Method::DMAS: return "dmas";
    case Method::MV: return "mv";
    case Method::EIBMV: return "eibmv";
    case Method::EIBMV_DMAS: return "eibmv_dmas";
  }
  return "?";
}

inline Point element_position(int index, const ArrayGeometry& geometry) {
  if (index < 0 || index >= geometry.num_elements)
    throw std::domain_error("element index out of range");
  const double center = 0.5 * (geometry.num_elements - 1);
  return {(index - center) * geometry.pitch, 0.0};
}

inline Point pixel_position(int row, int col, const ImagingGrid& grid) {
  if (row < 0 || row >= grid.num_axial() || col < 0 || col >= grid.num_lateral())
    throw std::domain_error("pixel index out of range");
  return {-0.5 * grid.lateral_extent + col * grid.spacing,
          grid.axial_start + row * grid.spacing};
}

// Number of channels the adaptive stage sees: M for plain methods,
// M-1 term signals for the hybrid.
inline int beamforming_channels(Method method, int num_elements) {
  return method == Method::EIBMV_DMAS ? num_elements - 1 : num_elements;
}

inline std::vector<std::string> validate_config(const BeamformConfig& config,
                                                const ArrayGeometry& geometry,
                                                const AcquisitionParams& acq) {
  std::vector<std::string> violations;
  if (geometry.num_elements < 2) violations.push_back("num_elements: must be >= 2");
  if (geometry.pitch <= 0) violations.push_back("pitch: must be > 0");
  if (acq.sampling_rate <= 0) violations.push_back("sampling_rate: must be > 0");
  if (acq.sound_speed <= 0) violations.push_back("sound_speed: must be > 0");
  if (acq.num_samples < 1) violations.push_back("num_samples: must be >= 1");

  const int channels = beamforming_channels(config.method, geometry.num_elements);
  if (config.subarray_length < 1 || config.subarray_length > channels)
    violations.push_back("subarray_length: must satisfy 1 <= L <= " +
                         std::to_string(channels));
  if (config.temporal_half_width < 0)
    violations.push_back("temporal_half_width: must be >= 0");
  if (config.subspace_threshold < 0 || config.subspace_threshold > 1)
    violations.push_back("subspace_threshold: must be in [0, 1]");
  if (config.loading_factor <= 0)
    violations.push_back("loading_factor: must be > 0");
  if (!(config.band_lo > 0 && config.band_lo < config.band_hi &&
        config.band_hi < 0.5 * acq.sampling_rate))
    violations.push_back("band: must satisfy 0 < f_lo < f_hi < fs/2");
  if (config.tukey_alpha < 0 || config.tukey_alpha > 1)
    violations.push_back("tukey_alpha: must be in [0, 1]");
  if (config.dynamic_range <= 0)
    violations.push_back("dynamic_range: must be > 0");
  return violations;
}

}  // namespace pabeam
