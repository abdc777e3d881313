#pragma once

#include "pabeam/core.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pabeam {

// Channel-data file: header line "PABEAM-CH v1", ASCII metadata lines
// m=, t=, fs=, c=, pitch=, then M*T float32 little-endian, element-major.

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void put_f32_le(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  const unsigned char b[4] = {static_cast<unsigned char>(bits),
                              static_cast<unsigned char>(bits >> 8),
                              static_cast<unsigned char>(bits >> 16),
                              static_cast<unsigned char>(bits >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline float get_f32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  const std::uint32_t bits = std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
                             std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace detail

inline void write_channel_data(const ChannelDataSet& channels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "PABEAM-CH v1\n";
  out << "m=" << channels.geometry.num_elements << "\n";
  out << "t=" << channels.acq.num_samples << "\n";
  out << "fs=" << detail::format_double(channels.acq.sampling_rate) << "\n";
  out << "c=" << detail::format_double(channels.acq.sound_speed) << "\n";
  out << "pitch=" << detail::format_double(channels.geometry.pitch) << "\n";
  for (Eigen::Index i = 0; i < channels.samples.rows(); ++i)
    for (Eigen::Index k = 0; k < channels.samples.cols(); ++k)
      detail::put_f32_le(out, static_cast<float>(channels.samples(i, k)));
  if (!out) throw IoError("write failed: " + path);
}

inline ChannelDataSet read_channel_data(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "PABEAM-CH v1")
    throw IoError("bad channel-data header in " + path);

  ChannelDataSet channels;
  int m = -1, t = -1;
  for (const char* key : {"m", "t", "fs", "c", "pitch"}) {
    if (!std::getline(in, line)) throw IoError("truncated header in " + path);
    const std::string prefix = std::string(key) + "=";
    if (line.rfind(prefix, 0) != 0)
      throw IoError("expected '" + prefix + "...' in " + path);
    const std::string value = line.substr(prefix.size());
    if (prefix == "m=") m = std::stoi(value);
    else if (prefix == "t=") t = std::stoi(value);
    else if (prefix == "fs=") channels.acq.sampling_rate = std::stod(value);
    else if (prefix == "c=") channels.acq.sound_speed = std::stod(value);
    else channels.geometry.pitch = std::stod(value);
  }
  if (m < 2 || t < 1) throw IoError("bad dimensions in " + path);
  channels.geometry.num_elements = m;
  channels.acq.num_samples = t;
  channels.samples.resize(m, t);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < t; ++k) channels.samples(i, k) = detail::get_f32_le(in);
  if (!in) throw IoError("truncated payload in " + path);
  return channels;
}

}  // namespace pabeam
