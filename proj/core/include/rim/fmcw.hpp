#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rim/rng.hpp"
#include "rim/scenario.hpp"

namespace rim {

/// Waveform and sampling parameters of one FMCW radar. A CPI consists of
/// `num_chirps` back-to-back chirps of duration `chirp_duration_s`, each
/// sweeping `sweep_bandwidth_hz`. The beat signal is low-pass limited to
/// `interest_bandwidth_hz` and sampled every `sample_period_s`, keeping
/// fast-time samples n = n_max .. N-1.
struct ChirpConfig {
  double carrier_hz = 77e9;
  double sweep_bandwidth_hz = 1e9;
  double chirp_duration_s = 20e-6;
  int num_chirps = 1;
  double interest_bandwidth_hz = 50e6;
  double sample_period_s = 20e-9;     // typically 1 / interest_bandwidth
  double duty_cycle = 1.0;
  double frame_duration_s = 0.0;      // 0 means a frame of exactly one CPI

  double slope() const { return sweep_bandwidth_hz / chirp_duration_s; }
  double tau_max() const { return interest_bandwidth_hz / slope(); }
  double max_range_m() const;
  int num_samples_total() const;      // N = floor(T / Ts) + 1
  int n_max() const;                  // floor(tau_max / Ts)
  int samples_per_chirp() const;      // N - n_max
  double processing_gain() const;     // K (N - n_max)
  /// One-sided unambiguous velocity of the K-chirp Doppler DFT,
  /// lambda_c / (4 T); the spectrum wraps beyond +-this value.
  double unambiguous_velocity_mps() const;

  void validate() const;

  static ChirpConfig with_sample_rate_from_bandwidth(ChirpConfig cfg);
};

/// Slow-time by fast-time complex sample grid of one CPI. Row k holds
/// chirp k; column j holds sample index n = n_max + j of each chirp.
struct BeatMatrix {
  ChirpConfig config;
  std::vector<std::complex<double>> samples;   // row-major, K x (N - n_max)

  int rows() const { return config.num_chirps; }
  int cols() const { return config.samples_per_chirp(); }
  std::complex<double>& at(int k, int j) { return samples[static_cast<std::size_t>(k) * cols() + j]; }
  const std::complex<double>& at(int k, int j) const {
    return samples[static_cast<std::size_t>(k) * cols() + j];
  }
  double total_energy() const;
};

enum class Window { kRectangular, kRaisedCosine };

/// Magnitude-squared delay-Doppler spectrum on a regular bin grid.
/// Delay axis spans [0, 1/(alpha Ts)) and the Doppler axis is centered,
/// nu in [-1/(2 fc T), +1/(2 fc T)).
struct RangeDopplerMap {
  ChirpConfig config;
  int num_tau = 0;
  int num_nu = 0;
  int zero_pad_fast = 1;
  int zero_pad_slow = 1;
  std::vector<double> tau_axis;   // seconds, ascending
  std::vector<double> nu_axis;    // dimensionless 2v/c, ascending
  std::vector<double> power;      // row-major, num_nu x num_tau, |z|^2

  double at(int nu_idx, int tau_idx) const {
    return power[static_cast<std::size_t>(nu_idx) * num_tau + tau_idx];
  }
  double tau_bin_width() const { return tau_axis[1] - tau_axis[0]; }
  double nu_bin_width() const { return nu_axis[1] - nu_axis[0]; }
};

struct MapPeak {
  double tau_s = 0.0;
  double nu = 0.0;
  double power = 0.0;   // peak cell |z|^2 before interpolation
  int tau_idx = 0;
  int nu_idx = 0;
};

/// One detected target. corrected_range always satisfies
/// corrected_range = c (tau_hat + fc nu_hat / alpha) / 2.
struct Detection {
  double tau_hat_s = 0.0;       // apparent delay at the spectrum peak
  double nu_hat = 0.0;          // normalized Doppler 2v/c
  double peak_power = 0.0;
  double corrected_range_m = 0.0;
  double velocity_mps = 0.0;
};

struct CfarConfig {
  int num_training = 8;   // training cells per side, per axis
  int num_guard = 2;      // guard cells per side, per axis
  double target_pfa = 1e-3;
  /// Clusters whose peaks are within this Chebyshev distance merge; if
  /// negative, a default of 3x the zero-pad factor is used to absorb the
  /// mainlobe and first sidelobes of a single target.
  int merge_radius = -1;
};

/// Transmit phase 2 pi (fc t + 0.5 alpha t^2) of one chirp, 0 <= t <= T.
double chirp_phase(const ChirpConfig& config, double t_s);

/// Scattering description consumed by the beat synthesizer: a target plus
/// its two-way power gain |gamma|^2 and reflection phase.
struct TargetReturn {
  Target target;
  double power_gain = 1.0;   // |gamma|^2, linear
  double phase_rad = 0.0;
};

/// Direct post-dechirp synthesis of the slow/fast-time samples:
/// y_{k,n} = sum_targets gamma e^{j2pi(-alpha tau + fc nu) n Ts} e^{j2pi fc nu k T} + w_{k,n}.
/// Targets beyond tau_max are rejected (the anti-alias filter and ADC
/// bandwidth bound the observable delay).
BeatMatrix synthesize_beat(const ChirpConfig& config,
                           const std::vector<TargetReturn>& targets,
                           const NoiseConfig& noise);

RangeDopplerMap range_doppler_map(const BeatMatrix& beat,
                                  Window window = Window::kRectangular,
                                  int zero_pad_fast = 4, int zero_pad_slow = 4);

/// Location of the global maximum with 3-point parabolic refinement on
/// log power along each axis (wrapping at the grid edges).
MapPeak map_peak(const RangeDopplerMap& map);

/// 2-D cell-averaging CFAR with a toroidal training window (the map is a
/// DFT periodogram, hence periodic in both axes). The threshold factor is
/// Ntrain (pfa^{-1/Ntrain} - 1). Adjacent crossings are clustered and each
/// cluster yields one coupling-corrected Detection at its strongest cell.
std::vector<Detection> cfar_detect(const RangeDopplerMap& map, const CfarConfig& cfar);

/// Adds the range-Doppler coupling shift fc nu / alpha back to the delay
/// estimate and converts to range and velocity.
Detection correct_coupling(Detection det, const ChirpConfig& config);

struct Resolution {
  double delta_range_m = 0.0;      // c / (2 B)
  double delta_velocity_mps = 0.0; // lambda_c / (2 K T)
};

Resolution resolution(const ChirpConfig& config);

}  // namespace rim
