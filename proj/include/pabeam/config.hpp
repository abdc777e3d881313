#pragma once

#include "pabeam/core.hpp"
#include "pabeam/synth.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace pabeam {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GridMode { Fine, Coarse };

// Full pipeline run description; defaults reproduce the reference simulation
// setup (128 elements, 50 MHz sampling, five absorbers at 25..45 mm, 50 dB
// channel SNR, L=64, K=5, sigma=0.5, Delta=1/640, 4-12 MHz Tukey 0.5 band,
// 60 dB display range).
struct RunConfig {
  ArrayGeometry geometry;
  AcquisitionParams acq;
  Phantom phantom = default_phantom();
  NoiseSpec noise;
  std::vector<Method> methods = {Method::DAS, Method::DMAS, Method::MV,
                                 Method::EIBMV, Method::EIBMV_DMAS};
  BeamformConfig beamform;  // method field is overwritten per run
  double center_freq = 4e6;
  double fractional_bandwidth = 0.77;

  GridMode grid_mode = GridMode::Fine;
  double lateral_extent = 20e-3;
  double axial_start = 0.0;
  double axial_end = 50e-3;
  double spacing_fine = 0.1e-3;
  double spacing_coarse = 0.2e-3;

  std::string output_dir = "out";
  bool export_pgm = true;
  bool export_csv = true;
  std::vector<double> profile_depths = {35e-3, 45e-3};

  static Phantom default_phantom() {
    Phantom p;
    for (int i = 0; i < 5; ++i)
      p.absorbers.push_back({{0.0, 25e-3 + i * 5e-3}, 0.1e-3, 1.0});
    return p;
  }

  ImagingGrid grid() const {
    return {lateral_extent, axial_start, axial_end,
            grid_mode == GridMode::Coarse ? spacing_coarse : spacing_fine};
  }

  BeamformConfig config_for(Method m) const {
    BeamformConfig c = beamform;
    c.method = m;
    return c;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

inline double parse_number(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    if (v == "inf") return std::numeric_limits<double>::infinity();
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + v + "'");
  }
}

inline long parse_int(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + v + "'");
  }
}

inline bool parse_switch(const std::string& v, int line) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ParseError("line " + std::to_string(line) + ": expected on/off, got '" + v + "'");
}

inline Method parse_method(const std::string& v, int line) {
  if (v == "das") return Method::DAS;
  if (v == "dmas") return Method::DMAS;
  if (v == "mv") return Method::MV;
  if (v == "eibmv") return Method::EIBMV;
  if (v == "eibmv_dmas") return Method::EIBMV_DMAS;
  throw ParseError("line " + std::to_string(line) + ": unknown method '" + v + "'");
}

}  // namespace detail

// INI-style document: [array] [acquisition] [phantom] [noise] [beamform]
// [output] sections, key = value lines, # comments. Unknown sections or keys
// are errors; omitted keys keep defaults.
inline RunConfig parse_config(const std::string& text) {
  using namespace detail;
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("line " + std::to_string(lineno) + ": unterminated section");
      section = line.substr(1, line.size() - 2);
      static const std::vector<std::string> known = {"array", "acquisition", "phantom",
                                                     "noise", "beamform", "output"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ParseError("line " + std::to_string(lineno) + ": unknown section [" +
                         section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ParseError("line " + std::to_string(lineno) + ": key outside any section");

    auto unknown = [&]() -> ParseError {
      return ParseError("line " + std::to_string(lineno) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    };

    if (section == "array") {
      if (key == "elements") cfg.geometry.num_elements = static_cast<int>(parse_int(value, lineno));
      else if (key == "pitch") cfg.geometry.pitch = parse_number(value, lineno);
      else throw unknown();
    } else if (section == "acquisition") {
      if (key == "sampling_rate") cfg.acq.sampling_rate = parse_number(value, lineno);
      else if (key == "sound_speed") cfg.acq.sound_speed = parse_number(value, lineno);
      else if (key == "num_samples") cfg.acq.num_samples = static_cast<int>(parse_int(value, lineno));
      else throw unknown();
    } else if (section == "phantom") {
      if (key == "absorbers") {
        cfg.phantom.absorbers.clear();
        for (const std::string& tuple : split(value, ';')) {
          if (tuple.empty()) continue;
          const auto f = split(tuple, ',');
          if (f.size() != 4)
            throw ParseError("line " + std::to_string(lineno) +
                             ": absorber needs lateral,axial,radius,amplitude");
          cfg.phantom.absorbers.push_back({{parse_number(f[0], lineno), parse_number(f[1], lineno)},
                                           parse_number(f[2], lineno),
                                           parse_number(f[3], lineno)});
        }
      } else if (key == "center_freq") cfg.center_freq = parse_number(value, lineno);
      else if (key == "fractional_bandwidth") cfg.fractional_bandwidth = parse_number(value, lineno);
      else throw unknown();
    } else if (section == "noise") {
      if (key == "snr_db") cfg.noise.target_snr_db = parse_number(value, lineno);
      else if (key == "seed") cfg.noise.seed = static_cast<std::uint64_t>(parse_int(value, lineno));
      else throw unknown();
    } else if (section == "beamform") {
      if (key == "methods") {
        cfg.methods.clear();
        for (const std::string& name : split(value, ','))
          cfg.methods.push_back(parse_method(name, lineno));
      } else if (key == "subarray_length") cfg.beamform.subarray_length = static_cast<int>(parse_int(value, lineno));
      else if (key == "temporal_half_width") cfg.beamform.temporal_half_width = static_cast<int>(parse_int(value, lineno));
      else if (key == "sigma") cfg.beamform.subspace_threshold = parse_number(value, lineno);
      else if (key == "delta") cfg.beamform.loading_factor = parse_number(value, lineno);
      else if (key == "band_lo") cfg.beamform.band_lo = parse_number(value, lineno);
      else if (key == "band_hi") cfg.beamform.band_hi = parse_number(value, lineno);
      else if (key == "tukey_alpha") cfg.beamform.tukey_alpha = parse_number(value, lineno);
      else if (key == "dynamic_range") cfg.beamform.dynamic_range = parse_number(value, lineno);
      else if (key == "bandpass") cfg.beamform.bandpass_enabled = parse_switch(value, lineno);
      else if (key == "dmas_sqrt_mode") {
        if (value == "pairwise") cfg.beamform.dmas_sqrt_mode = DmasSqrtMode::Pairwise;
        else if (value == "row_product") cfg.beamform.dmas_sqrt_mode = DmasSqrtMode::RowProduct;
        else throw ParseError("line " + std::to_string(lineno) +
                              ": dmas_sqrt_mode must be pairwise or row_product");
      } else throw unknown();
    } else if (section == "output") {
      if (key == "dir") cfg.output_dir = value;
      else if (key == "grid") {
        if (value == "fine") cfg.grid_mode = GridMode::Fine;
        else if (value == "coarse") cfg.grid_mode = GridMode::Coarse;
        else throw ParseError("line " + std::to_string(lineno) + ": grid must be fine or coarse");
      } else if (key == "lateral_extent") cfg.lateral_extent = parse_number(value, lineno);
      else if (key == "axial_start") cfg.axial_start = parse_number(value, lineno);
      else if (key == "axial_end") cfg.axial_end = parse_number(value, lineno);
      else if (key == "spacing_fine") cfg.spacing_fine = parse_number(value, lineno);
      else if (key == "spacing_coarse") cfg.spacing_coarse = parse_number(value, lineno);
      else if (key == "formats") {
        cfg.export_pgm = cfg.export_csv = false;
        for (const std::string& f : split(value, ',')) {
          if (f == "pgm") cfg.export_pgm = true;
          else if (f == "csv") cfg.export_csv = true;
          else throw ParseError("line " + std::to_string(lineno) + ": unknown format '" + f + "'");
        }
      } else if (key == "profile_depths") {
        cfg.profile_depths.clear();
        for (const std::string& d : split(value, ','))
          cfg.profile_depths.push_back(parse_number(d, lineno));
      } else throw unknown();
    }
  }

  std::vector<std::string> violations;
  for (Method m : cfg.methods) {
    for (const std::string& v : validate_config(cfg.config_for(m), cfg.geometry, cfg.acq))
      violations.push_back(std::string(method_name(m)) + ": " + v);
  }
  for (const Absorber& a : cfg.phantom.absorbers)
    if (!(a.radius > 0)) violations.push_back("phantom: absorber radius must be > 0");
  if (!violations.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "[array]\n";
  os << "elements = " << cfg.geometry.num_elements << "\n";
  os << "pitch = " << cfg.geometry.pitch << "\n";
  os << "\n[acquisition]\n";
  os << "sampling_rate = " << cfg.acq.sampling_rate << "\n";
  os << "sound_speed = " << cfg.acq.sound_speed << "\n";
  os << "num_samples = " << cfg.acq.num_samples << "\n";
  os << "\n[phantom]\n";
  os << "absorbers = ";
  for (std::size_t i = 0; i < cfg.phantom.absorbers.size(); ++i) {
    const Absorber& a = cfg.phantom.absorbers[i];
    if (i) os << "; ";
    os << a.center.lateral << "," << a.center.axial << "," << a.radius << ","
       << a.amplitude;
  }
  os << "\n";
  os << "center_freq = " << cfg.center_freq << "\n";
  os << "fractional_bandwidth = " << cfg.fractional_bandwidth << "\n";
  os << "\n[noise]\n";
  os << "snr_db = " << cfg.noise.target_snr_db << "\n";
  os << "seed = " << cfg.noise.seed << "\n";
  os << "\n[beamform]\n";
  os << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    os << (i ? "," : "") << method_name(cfg.methods[i]);
  os << "\n";
  os << "subarray_length = " << cfg.beamform.subarray_length << "\n";
  os << "temporal_half_width = " << cfg.beamform.temporal_half_width << "\n";
  os << "sigma = " << cfg.beamform.subspace_threshold << "\n";
  os << "delta = " << cfg.beamform.loading_factor << "\n";
  os << "band_lo = " << cfg.beamform.band_lo << "\n";
  os << "band_hi = " << cfg.beamform.band_hi << "\n";
  os << "tukey_alpha = " << cfg.beamform.tukey_alpha << "\n";
  os << "dynamic_range = " << cfg.beamform.dynamic_range << "\n";
  os << "bandpass = " << (cfg.beamform.bandpass_enabled ? "on" : "off") << "\n";
  os << "dmas_sqrt_mode = "
     << (cfg.beamform.dmas_sqrt_mode == DmasSqrtMode::Pairwise ? "pairwise" : "row_product")
     << "\n";
  os << "\n[output]\n";
  os << "dir = " << cfg.output_dir << "\n";
  os << "grid = " << (cfg.grid_mode == GridMode::Coarse ? "coarse" : "fine") << "\n";
  os << "lateral_extent = " << cfg.lateral_extent << "\n";
  os << "axial_start = " << cfg.axial_start << "\n";
  os << "axial_end = " << cfg.axial_end << "\n";
  os << "spacing_fine = " << cfg.spacing_fine << "\n";
  os << "spacing_coarse = " << cfg.spacing_coarse << "\n";
  os << "formats = ";
  {
    bool first = true;
    if (cfg.export_pgm) { os << "pgm"; first = false; }
    if (cfg.export_csv) os << (first ? "" : ",") << "csv";
  }
  os << "\n";
  os << "profile_depths = ";
  for (std::size_t i = 0; i < cfg.profile_depths.size(); ++i)
    os << (i ? "," : "") << cfg.profile_depths[i];
  os << "\n";
  return os.str();
}

}  // namespace pabeam
