#include "pabeam/hybrid.hpp"
#include "pabeam/imaging.hpp"
#include "pabeam/synth.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pabeam;

namespace {

ChannelDataSet small_phantom_data(int elements = 8, double amplitude = 1.0) {
  Phantom phantom;
  phantom.absorbers.push_back({{0.0, 15e-3}, 0.1e-3, amplitude});
  ArrayGeometry geometry{elements, 0.3e-3};
  AcquisitionParams acq{50e6, 1540.0, 800};
  return simulate_channels(phantom, geometry, acq);
}

}  // namespace

TEST_CASE("term_lines") {
  const ChannelDataSet channels = small_phantom_data();
  ImagingGrid grid{4e-3, 12e-3, 18e-3, 0.2e-3};

  SECTION("zero channels give a zero matrix") {
    ChannelDataSet zero = channels;
    zero.samples.setZero();
    CHECK(term_lines(zero, 5, grid).isZero());
  }

  SECTION("column-wise row sums equal the unfiltered DMAS line exactly") {
    const Eigen::MatrixXd terms = term_lines(channels, 10, grid);
    const double lateral = pixel_position(0, 10, grid).lateral;
    for (int r = 0; r < grid.num_axial(); ++r) {
      const Eigen::VectorXd snap = aligned_snapshot(
          channels, Point{lateral, grid.axial_start + r * grid.spacing});
      double sum = 0;
      for (Eigen::Index i = 0; i < terms.rows(); ++i) sum += terms(i, r);
      CHECK(sum == dmas(snap));
    }
  }

  SECTION("M=2 reduces to the single pair per sample") {
    const ChannelDataSet two = small_phantom_data(2);
    const Eigen::MatrixXd terms = term_lines(two, 10, grid);
    REQUIRE(terms.rows() == 1);
    const double lateral = pixel_position(0, 10, grid).lateral;
    for (int r = 0; r < grid.num_axial(); ++r) {
      const Eigen::VectorXd x = aligned_snapshot(
          two, Point{lateral, grid.axial_start + r * grid.spacing});
      CHECK(terms(0, r) == dmas_pair(x[0], x[1]));
    }
  }
}

TEST_CASE("eibmv_dmas_line") {
  const ChannelDataSet channels = small_phantom_data();
  const int m = channels.geometry.num_elements;
  ImagingGrid grid{4e-3, 12e-3, 18e-3, 0.2e-3};
  const Eigen::MatrixXd terms = term_lines(channels, 10, grid);
  const double fs = channels.acq.sampling_rate;

  SECTION("L=1 degenerates the whole adaptive chain to the uniform outer sum") {
    // with single-channel subarrays the unit-gain constraint pins w = [1]
    // regardless of the covariance, so the output is the plain term average
    BeamformConfig cfg;
    cfg.method = Method::EIBMV_DMAS;
    cfg.subarray_length = 1;
    cfg.temporal_half_width = 0;
    cfg.subspace_threshold = 0.0;
    cfg.bandpass_enabled = false;
    const std::vector<double> line = eibmv_dmas_line(terms, cfg, fs);
    for (int k = 0; k < terms.cols(); ++k) {
      const double expected = terms.col(k).sum() / (m - 1);
      CHECK(line[k] == Catch::Approx(expected).margin(1e-12 * std::abs(expected) + 1e-18));
    }
  }

  SECTION("scale covariance: scaling channels by alpha scales the line by alpha") {
    const ChannelDataSet scaled = small_phantom_data(8, 3.5);
    BeamformConfig cfg;
    cfg.method = Method::EIBMV_DMAS;
    cfg.subarray_length = 4;
    cfg.temporal_half_width = 2;
    const Eigen::MatrixXd terms_scaled = term_lines(scaled, 10, grid);
    const std::vector<double> base = eibmv_dmas_line(terms, cfg, fs);
    const std::vector<double> big = eibmv_dmas_line(terms_scaled, cfg, fs);
    double peak = 0;
    for (double v : base) peak = std::max(peak, std::abs(v));
    for (std::size_t k = 0; k < base.size(); ++k)
      CHECK(big[k] == Catch::Approx(3.5 * base[k]).margin(1e-9 * peak * 3.5));
  }

  SECTION("zero terms give a zero line") {
    BeamformConfig cfg;
    cfg.method = Method::EIBMV_DMAS;
    cfg.subarray_length = 4;
    const std::vector<double> line =
        eibmv_dmas_line(Eigen::MatrixXd::Zero(m - 1, 50), cfg, fs);
    for (double v : line) CHECK(v == 0.0);
  }

  SECTION("L beyond the term count throws") {
    BeamformConfig cfg;
    cfg.method = Method::EIBMV_DMAS;
    cfg.subarray_length = m;  // terms rows = m-1
    CHECK_THROWS_AS(eibmv_dmas_line(terms, cfg, fs), std::domain_error);
  }

  SECTION("finite output on pure noise input") {
    ChannelDataSet noise_only = channels;
    noise_only.samples.setZero();
    noise_only = add_noise(small_phantom_data(8, 1e-12), NoiseSpec{0.0, 3});
    BeamformConfig cfg;
    cfg.method = Method::EIBMV_DMAS;
    cfg.subarray_length = 4;
    const Eigen::MatrixXd noisy_terms = term_lines(noise_only, 10, grid);
    for (double v : eibmv_dmas_line(noisy_terms, cfg, fs))
      CHECK(std::isfinite(v));
  }
}

TEST_CASE("image_eibmv_dmas") {
  const ChannelDataSet channels = small_phantom_data(8);
  ImagingGrid grid{4e-3, 12e-3, 18e-3, 0.2e-3};

  BeamformConfig cfg;
  cfg.method = Method::EIBMV_DMAS;
  cfg.subarray_length = 4;
  cfg.temporal_half_width = 2;

  SECTION("single absorber argmax within a pixel") {
    const Eigen::MatrixXd image = image_eibmv_dmas(channels, grid, cfg);
    Eigen::Index r, c;
    image.cwiseAbs().maxCoeff(&r, &c);
    const Point p = pixel_position(static_cast<int>(r), static_cast<int>(c), grid);
    // small aperture: allow a couple of pixels of peak wander
    CHECK(std::abs(p.lateral) <= 3 * grid.spacing);
    CHECK(std::abs(p.axial - 15e-3) <= 3 * grid.spacing);
  }
  SECTION("zero channels produce a zero image") {
    ChannelDataSet zero = channels;
    zero.samples.setZero();
    CHECK(image_eibmv_dmas(zero, grid, cfg).isZero());
  }
  SECTION("worker count does not change the image") {
    const Eigen::MatrixXd one = image_eibmv_dmas(channels, grid, cfg, 1);
    const Eigen::MatrixXd four = image_eibmv_dmas(channels, grid, cfg, 4);
    CHECK((one - four).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("wrong method throws") {
    BeamformConfig bad = cfg;
    bad.method = Method::DAS;
    CHECK_THROWS_AS(image_eibmv_dmas(channels, grid, bad), std::domain_error);
  }
}
