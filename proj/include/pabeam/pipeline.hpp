#pragma once

#include "pabeam/channel_io.hpp"
#include "pabeam/config.hpp"
#include "pabeam/imaging.hpp"
#include "pabeam/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>

namespace pabeam {

namespace detail {

inline std::string fnv1a_digest(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read back: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

enum class ExportFormat { Pgm, Csv };

// pgm: binary 8-bit, pixel = round-half-up of 255*(v+DR)/DR clamped to
// [0,255], row-major axial-then-lateral. csv: one row per axial index,
// comma-separated dB values, 6 significant digits.
inline void export_image(const Eigen::MatrixXd& db_image, const std::string& path,
                         ExportFormat format, double dynamic_range) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  if (format == ExportFormat::Pgm) {
    out << "P5\n" << db_image.cols() << " " << db_image.rows() << "\n255\n";
    for (Eigen::Index r = 0; r < db_image.rows(); ++r)
      for (Eigen::Index c = 0; c < db_image.cols(); ++c) {
        const double scaled =
            255.0 * (db_image(r, c) + dynamic_range) / dynamic_range;
        const long v = static_cast<long>(std::floor(scaled + 0.5));  // round half up
        out.put(static_cast<char>(std::clamp(v, 0L, 255L)));
      }
  } else {
    out << std::setprecision(6);
    for (Eigen::Index r = 0; r < db_image.rows(); ++r) {
      for (Eigen::Index c = 0; c < db_image.cols(); ++c)
        out << (c ? "," : "") << db_image(r, c);
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

struct MethodMetrics {
  // keyed by depth in mm, formatted with one decimal
  std::map<std::string, double> fwhm_mm;
  std::map<std::string, double> snr_db;
  std::map<std::string, double> sidelobe_db;
};

inline void write_report(const std::map<std::string, MethodMetrics>& metrics,
                         const RunConfig& cfg, const std::string& path) {
  nlohmann::json doc;
  doc["config"] = serialize_config(cfg);
  doc["seed"] = cfg.noise.seed;
  doc["methods"] = nlohmann::json::object();
  for (const auto& [name, m] : metrics) {
    nlohmann::json entry;
    entry["fwhm_mm"] = m.fwhm_mm;
    entry["snr_db"] = m.snr_db;
    entry["sidelobe_db"] = m.sidelobe_db;
    doc["methods"][name] = entry;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

struct PipelineResult {
  std::map<std::string, std::string> files;          // path -> digest
  std::map<std::string, std::string> method_status;  // method -> ok/failed
  int exit_code = 0;
  std::string manifest_path;
};

inline std::string depth_key(double depth_m) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << depth_m * 1e3;
  return os.str();
}

// simulate -> beamform each method -> envelope/dB/profiles/metrics -> report
// + manifest. Pure function of (config, seed): identical runs produce
// byte-identical artifacts at any worker count.
inline PipelineResult run_pipeline(const RunConfig& cfg, int workers = 1,
                                   const std::string& channel_file = "") {
  namespace fs = std::filesystem;
  PipelineResult result;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  auto record = [&](const fs::path& path) {
    result.files[path.string()] = detail::fnv1a_digest(detail::read_file(path.string()));
  };

  ChannelDataSet channels;
  if (!channel_file.empty()) {
    channels = read_channel_data(channel_file);
    channels.acq.num_samples = static_cast<int>(channels.samples.cols());
  } else {
    channels = simulate_channels(cfg.phantom, cfg.geometry, cfg.acq, cfg.center_freq,
                                 cfg.fractional_bandwidth);
    channels = add_noise(channels, cfg.noise);
  }
  const fs::path ch_path = dir / "channels.pab";
  write_channel_data(channels, ch_path.string());
  record(ch_path);

  const ImagingGrid grid = cfg.grid();
  const AxialLattice lat = make_dense_lattice(grid, channels.acq);
  std::map<std::string, MethodMetrics> report_metrics;
  bool any_failed = false;

  for (Method method : cfg.methods) {
    const std::string name = method_name(method);
    const BeamformConfig bf = cfg.config_for(method);
    try {
      const Eigen::MatrixXd dense = compute_dense(channels, grid, bf, workers);
      const Eigen::MatrixXd raw = resample_to_grid(dense, lat, grid);
      const Eigen::MatrixXd env = envelope_from_dense(dense, lat, grid);
      const Eigen::MatrixXd db = log_compress(env, bf.dynamic_range);

      if (cfg.export_pgm) {
        const fs::path p = dir / (name + "_db.pgm");
        export_image(db, p.string(), ExportFormat::Pgm, bf.dynamic_range);
        record(p);
      }
      if (cfg.export_csv) {
        const fs::path p = dir / (name + "_db.csv");
        export_image(db, p.string(), ExportFormat::Csv, bf.dynamic_range);
        record(p);
        const fs::path praw = dir / (name + "_raw.csv");
        export_image(raw, praw.string(), ExportFormat::Csv, bf.dynamic_range);
        record(praw);
      }

      MethodMetrics mm;
      for (double depth : cfg.profile_depths) {
        const LateralProfile profile = lateral_profile(db, grid, depth);
        const std::string key = depth_key(depth);
        if (cfg.export_csv) {
          const fs::path p = dir / (name + "_profile_" + key + "mm.csv");
          std::ofstream pf(p.string(), std::ios::binary);
          if (!pf) throw IoError("cannot open for writing: " + p.string());
          pf << std::setprecision(6);
          for (std::size_t i = 0; i < profile.values_db.size(); ++i)
            pf << (i ? "," : "") << profile.values_db[i];
          pf << "\n";
          pf.close();
          if (pf.fail()) throw IoError("write failed: " + p.string());
          record(p);
        }
        try {
          mm.fwhm_mm[key] = fwhm_minus6db(profile) * 1e3;
        } catch (const std::runtime_error&) {
          // mainlobe wider than profile; leave entry out
        }
        try {
          mm.sidelobe_db[key] = sidelobe_level(profile);
        } catch (const std::runtime_error&) {
        }
        const Roi signal{-1e-3, 1e-3, depth - 1e-3, depth + 1e-3};
        const Roi noise{4e-3, 8e-3, depth - 2e-3, depth + 2e-3};
        mm.snr_db[key] = snr_db(env, grid, signal, noise);
      }
      report_metrics[name] = mm;
      result.method_status[name] = "ok";
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& e) {
      result.method_status[name] = std::string("failed: ") + e.what();
      any_failed = true;
    }
  }

  const fs::path report_path = dir / "report.json";
  write_report(report_metrics, cfg, report_path.string());
  record(report_path);

  nlohmann::json manifest;
  manifest["config_digest"] = detail::fnv1a_digest(serialize_config(cfg));
  manifest["seed"] = cfg.noise.seed;
  manifest["files"] = result.files;
  manifest["methods"] = result.method_status;
  const fs::path manifest_path = dir / "manifest.json";
  {
    std::ofstream out(manifest_path.string(), std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + manifest_path.string());
    out << manifest.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + manifest_path.string());
  }
  result.manifest_path = manifest_path.string();
  result.exit_code = any_failed ? 4 : 0;
  return result;
}

}  // namespace pabeam
