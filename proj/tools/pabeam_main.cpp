#include "pabeam/pabeam.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pabeam::IoError("cannot read config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CommonOpts {
  std::string config_path;
  std::string output_dir;
  std::string methods;
  std::string grid;
  std::int64_t seed = -1;
  int workers = 1;
};

void add_common(CLI::App* app, CommonOpts& opts) {
  app->add_option("--config", opts.config_path, "INI configuration file");
  app->add_option("--output", opts.output_dir, "output directory");
  app->add_option("--methods", opts.methods,
                  "comma-separated subset of das,dmas,mv,eibmv,eibmv_dmas");
  app->add_option("--grid", opts.grid, "grid resolution: fine or coarse");
  app->add_option("--seed", opts.seed, "noise seed override");
  app->add_option("--workers", opts.workers, "scanline worker threads");
}

pabeam::RunConfig load_config(const CommonOpts& opts) {
  std::string text;
  if (!opts.config_path.empty()) text = read_text_file(opts.config_path);
  pabeam::RunConfig cfg = pabeam::parse_config(text);
  if (!opts.output_dir.empty()) cfg.output_dir = opts.output_dir;
  if (opts.seed >= 0) cfg.noise.seed = static_cast<std::uint64_t>(opts.seed);
  if (!opts.grid.empty()) {
    if (opts.grid == "fine") cfg.grid_mode = pabeam::GridMode::Fine;
    else if (opts.grid == "coarse") cfg.grid_mode = pabeam::GridMode::Coarse;
    else throw pabeam::ValidationError("grid must be fine or coarse");
  }
  if (!opts.methods.empty()) {
    cfg.methods.clear();
    std::stringstream ss(opts.methods);
    std::string name;
    while (std::getline(ss, name, ',')) cfg.methods.push_back(pabeam::detail::parse_method(name, 0));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pabeam - photoacoustic beamforming toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string channels_path;

  CLI::App* simulate = app.add_subcommand("simulate", "generate synthetic channel data");
  add_common(simulate, opts);

  CLI::App* beamform = app.add_subcommand("beamform", "reconstruct images");
  add_common(beamform, opts);
  beamform->add_option("--channels", channels_path, "existing channel-data file");

  CLI::App* metrics = app.add_subcommand("metrics", "reconstruct and report image metrics");
  add_common(metrics, opts);
  metrics->add_option("--channels", channels_path, "existing channel-data file");

  CLI::App* pipeline = app.add_subcommand("pipeline", "full simulate/beamform/measure run");
  add_common(pipeline, opts);
  pipeline->add_option("--channels", channels_path, "existing channel-data file");

  CLI11_PARSE(app, argc, argv);

  try {
    pabeam::RunConfig cfg = load_config(opts);

    if (simulate->parsed()) {
      namespace fs = std::filesystem;
      fs::create_directories(cfg.output_dir);
      pabeam::ChannelDataSet channels = pabeam::simulate_channels(
          cfg.phantom, cfg.geometry, cfg.acq, cfg.center_freq, cfg.fractional_bandwidth);
      channels = pabeam::add_noise(channels, cfg.noise);
      const std::string path = (fs::path(cfg.output_dir) / "channels.pab").string();
      pabeam::write_channel_data(channels, path);
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (beamform->parsed() || pipeline->parsed() || metrics->parsed()) {
      if (metrics->parsed()) cfg.export_pgm = cfg.export_csv = false;
      const pabeam::PipelineResult result =
          pabeam::run_pipeline(cfg, opts.workers, channels_path);
      for (const auto& [method, status] : result.method_status)
        std::cout << method << ": " << status << "\n";
      std::cout << "manifest: " << result.manifest_path << "\n";
      return result.exit_code;
    }
  } catch (const pabeam::ParseError& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 2;
  } catch (const pabeam::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const pabeam::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
