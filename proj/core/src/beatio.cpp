#include "rim/beatio.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rim {
namespace {

constexpr char kMagic[8] = {'R', 'I', 'M', 'B', 'E', 'A', 'T', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64(const unsigned char* p) {
  const std::uint64_t bits = get_u64(p);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace

void write_beat(const BeatMatrix& beat, const std::string& path) {
  std::string out;
  out.reserve(32 + beat.samples.size() * 16);
  out.append(kMagic, sizeof(kMagic));
  put_u64(out, static_cast<std::uint64_t>(beat.config.num_chirps));
  put_u64(out, static_cast<std::uint64_t>(beat.config.num_samples_total()));
  put_u64(out, static_cast<std::uint64_t>(beat.config.n_max()));
  for (const auto& s : beat.samples) {
    put_f64(out, s.real());
    put_f64(out, s.imag());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open beat dump for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

BeatMatrix read_beat(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open beat dump: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (bytes.size() < 32 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a beat dump (bad magic): " + path);
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t k = get_u64(p + 8);
  const std::uint64_t n = get_u64(p + 16);
  const std::uint64_t n_max = get_u64(p + 24);
  if (n_max >= n || k == 0) throw std::runtime_error("beat dump header inconsistent");
  const std::uint64_t count = k * (n - n_max);
  if (bytes.size() != 32 + count * 16) {
    throw std::runtime_error("beat dump payload size inconsistent with header");
  }

  BeatMatrix beat;
  // Reconstruct a config whose derived (K, N, n_max) match the header.
  beat.config.num_chirps = static_cast<int>(k);
  beat.config.sample_period_s = beat.config.chirp_duration_s / static_cast<double>(n - 1);
  beat.config.interest_bandwidth_hz =
      static_cast<double>(n_max) * beat.config.slope() * beat.config.sample_period_s;
  beat.samples.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const unsigned char* q = p + 32 + i * 16;
    beat.samples[i] = {get_f64(q), get_f64(q + 8)};
  }
  return beat;
}

}  // namespace rim
