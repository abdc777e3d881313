#include "pabeam/dsp.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pabeam;

namespace {

std::vector<double> tone(double freq, double fs, int n, double phase = 0.0) {
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = std::cos(2.0 * M_PI * freq * k / fs + phase);
  return s;
}

}  // namespace

TEST_CASE("tukey window") {
  SECTION("alpha=0.5 center weight is 1") {
    for (int n : {11, 64, 257}) {
      const auto w = tukey_window(n, 0.5);
      CHECK(w[n / 2] == 1.0);
    }
  }
  SECTION("endpoints taper to 0 for alpha > 0") {
    const auto w = tukey_window(33, 0.5);
    CHECK(w.front() == Catch::Approx(0.0).margin(1e-12));
    CHECK(w.back() == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("alpha=0 is rectangular") {
    const auto w = tukey_window(17, 0.0);
    for (double v : w) CHECK(v == 1.0);
  }
  SECTION("alpha=1 matches Hann") {
    const int n = 21;
    const auto w = tukey_window(n, 1.0);
    for (int i = 0; i < n; ++i) {
      const double hann = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));
      CHECK(w[i] == Catch::Approx(hann).margin(1e-12));
    }
  }
  CHECK_THROWS_AS(tukey_window(0, 0.5), std::domain_error);
  CHECK_THROWS_AS(tukey_window(8, 1.5), std::domain_error);
}

TEST_CASE("bandpass") {
  const double fs = 50e6;
  const int n = 2000;

  SECTION("8 MHz tone in the flat band region is preserved") {
    const auto out = bandpass(tone(8e6, fs, n), fs, 4e6, 12e6, 0.5);
    const auto ref = tone(8e6, fs, n);
    // compare away from the 5% edge regions
    for (int k = n / 20; k < n - n / 20; ++k)
      CHECK(out[k] == Catch::Approx(ref[k]).margin(0.01));
  }
  SECTION("2 MHz tone is suppressed below 1e-6") {
    const auto out = bandpass(tone(2e6, fs, n), fs, 4e6, 12e6, 0.5);
    double peak = 0;
    for (double v : out) peak = std::max(peak, std::abs(v));
    CHECK(peak < 1e-6);
  }
  SECTION("zero input gives zero output") {
    const auto out = bandpass(std::vector<double>(n, 0.0), fs, 4e6, 12e6, 0.5);
    for (double v : out) CHECK(v == 0.0);
  }
  SECTION("linear in the input") {
    auto a = tone(8e6, fs, 512), b = tone(6e6, fs, 512, 0.3);
    std::vector<double> sum(512);
    for (int k = 0; k < 512; ++k) sum[k] = 2.0 * a[k] + b[k];
    const auto fa = bandpass(a, fs, 4e6, 12e6, 0.5);
    const auto fb = bandpass(b, fs, 4e6, 12e6, 0.5);
    const auto fsum = bandpass(sum, fs, 4e6, 12e6, 0.5);
    for (int k = 0; k < 512; ++k)
      CHECK(fsum[k] == Catch::Approx(2.0 * fa[k] + fb[k]).margin(1e-9));
  }
  SECTION("applying twice equals the squared taper, spectrally") {
    auto x = tone(5e6, fs, 1024);  // 5 MHz sits on the rising taper
    const auto once = bandpass(x, fs, 4e6, 12e6, 0.5);
    const auto twice = bandpass(once, fs, 4e6, 12e6, 0.5);
    // tone amplitude after one pass = w, after two = w^2
    double a1 = 0, a2 = 0;
    for (int k = 200; k < 800; ++k) {
      a1 = std::max(a1, std::abs(once[k]));
      a2 = std::max(a2, std::abs(twice[k]));
    }
    CHECK(a2 == Catch::Approx(a1 * a1).margin(0.02));
  }
  SECTION("band outside Nyquist throws") {
    CHECK_THROWS_AS(bandpass(tone(8e6, fs, 64), fs, 4e6, 30e6, 0.5),
                    std::domain_error);
    CHECK_THROWS_AS(bandpass(tone(8e6, fs, 64), fs, 0.0, 12e6, 0.5),
                    std::domain_error);
  }
}

TEST_CASE("envelope") {
  const double fs = 50e6;
  const int n = 2000;

  SECTION("unit tone envelope is flat within 1% in the interior") {
    const auto env = envelope(tone(8e6, fs, n));
    for (int k = n / 20; k < n - n / 20; ++k)
      CHECK(env[k] == Catch::Approx(1.0).margin(0.01));
  }
  SECTION("zero input") {
    const auto env = envelope(std::vector<double>(64, 0.0));
    for (double v : env) CHECK(v == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("sign-blind") {
    auto x = tone(7e6, fs, 512, 0.4);
    auto neg = x;
    for (double& v : neg) v = -v;
    const auto ex = envelope(x);
    const auto en = envelope(neg);
    for (int k = 0; k < 512; ++k) CHECK(ex[k] == Catch::Approx(en[k]).margin(1e-12));
  }
  SECTION("non-negative") {
    const auto env = envelope(tone(3e6, fs, 333, 1.1));
    for (double v : env) CHECK(v >= 0.0);
  }
}

TEST_CASE("log compression") {
  Eigen::MatrixXd image(2, 3);
  image << 1.0, 0.5, 1e-6, 0.25, 0.1, 0.0;
  const Eigen::MatrixXd db = log_compress(image, 60.0);

  CHECK(db(0, 0) == 0.0);
  CHECK(db(0, 1) == Catch::Approx(-6.0206).epsilon(1e-4));
  CHECK(db(0, 2) == -60.0);  // -120 dB clamped
  CHECK(db(1, 2) == -60.0);  // zero clamped

  SECTION("invariant to global positive scaling") {
    const Eigen::MatrixXd db2 = log_compress(7.3 * image, 60.0);
    CHECK((db - db2).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("all-zero image throws") {
    CHECK_THROWS_AS(log_compress(Eigen::MatrixXd::Zero(2, 2), 60.0),
                    std::domain_error);
  }
  SECTION("non-positive dynamic range throws") {
    CHECK_THROWS_AS(log_compress(image, 0.0), std::domain_error);
  }
}
