#include "rim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace rim::fft {
namespace {

// FFTW planning is not thread safe; executing a cached plan on a fresh
// array is. Plans are created with FFTW_UNALIGNED so any buffer works.
std::mutex plan_mutex;

fftw_plan plan_for(std::size_t n, int sign) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(n);
  auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, plan);
  return plan;
}

void execute(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) throw std::invalid_argument("fft of empty sequence");
  fftw_plan plan = plan_for(data.size(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void forward(std::vector<std::complex<double>>& data) { execute(data, FFTW_FORWARD); }

void inverse(std::vector<std::complex<double>>& data) { execute(data, FFTW_BACKWARD); }

std::vector<std::complex<double>> forward_padded(
    const std::vector<std::complex<double>>& input, std::size_t padded_size) {
  std::vector<std::complex<double>> data(input);
  data.resize(std::max(padded_size, input.size()), {0.0, 0.0});
  forward(data);
  return data;
}

std::vector<std::complex<double>> inverse_padded(
    const std::vector<std::complex<double>>& input, std::size_t padded_size) {
  std::vector<std::complex<double>> data(input);
  data.resize(std::max(padded_size, input.size()), {0.0, 0.0});
  inverse(data);
  return data;
}

}  // namespace rim::fft
