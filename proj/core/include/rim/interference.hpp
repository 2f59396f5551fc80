#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rim/fmcw.hpp"

namespace rim {

/// Oscillator phase-noise model: single-sideband PSD flat at
/// `pedestal_height_dbc_hz` out to `pedestal_width_hz`, rolling off at
/// -20 dB/decade beyond (the white-FM / Lorentzian pedestal shape).
struct PhaseNoiseConfig {
  double pedestal_height_dbc_hz = -70.0;
  double pedestal_width_hz = 200e3;
  std::uint64_t rng_seed = 0;
};

/// Waveform, timing and link parameters of one interfering radar as seen
/// by the victim. `start_offset_s` is the interferer transmit-clock
/// offset relative to the victim's CPI start; `oneway_delay_s` is the
/// direct-path propagation delay.
struct InterfererSpec {
  double sweep_bandwidth_hz = 1e9;   // B~
  double chirp_duration_s = 20e-6;   // T~
  double start_offset_s = 0.0;       // t0
  double oneway_delay_s = 0.0;       // tau_int
  double power_gain = 1.0;           // |gamma_int|^2, linear
  std::optional<PhaseNoiseConfig> phase_noise;

  double slope() const { return sweep_bandwidth_hz / chirp_duration_s; }
  void validate() const;
};

enum class CoherenceClass { kCoherent, kPartiallyCoherent, kIncoherent };

struct CoherenceTolerances {
  /// Relative (alpha, T, B) mismatch below which the pair counts as
  /// parameter-matched.
  double relative_match = 1e-4;
  /// Fast-time spread (in range bins across one sampling window) beyond
  /// which the interference is treated as fully incoherent.
  double spread_bins = 10.0;
};

/// Dechirped interference samples on the victim's slow/fast-time grid,
/// plus the in-band indicator |x_int|^2 per sample.
struct InterferenceSamples {
  ChirpConfig config;
  std::vector<std::complex<double>> samples;   // gain applied, K x (N - n_max)
  std::vector<std::uint8_t> indicator;

  double indicator_fraction() const;
  double total_energy() const;
};

/// Evaluates the interferer's chirp dechirped by the victim chirp at every
/// sample instant. A sample is in band when the instantaneous beat
/// frequency alpha~ s - alpha t falls inside the dechirped target band
/// [-Bs, 0] (an ideal brick-wall anti-alias filter of total width Bs; the
/// victim's own echoes beat at -alpha tau in exactly this band). When
/// phase noise is configured, the oscillator phase difference between the
/// two (independent) processes is added per sample.
InterferenceSamples dechirped_interference(
    const ChirpConfig& victim, const InterfererSpec& intf,
    const std::optional<PhaseNoiseConfig>& victim_phase_noise = std::nullopt);

/// Fraction of victim chirp k's sampling window during which the
/// dechirped interferer is in band (same condition as the indicator grid,
/// evaluated as exact interval arithmetic on the piecewise-linear beat
/// frequency). The optional window [active_lo_s, active_hi_s] restricts
/// the interferer to its own transmit span, in victim chirp-local time.
double in_band_fraction(const ChirpConfig& victim, const InterfererSpec& intf,
                        int chirp_k,
                        double active_lo_s = -std::numeric_limits<double>::infinity(),
                        double active_hi_s = std::numeric_limits<double>::infinity());

/// Elementwise sum; interference from several radars is additive.
BeatMatrix inject(const BeatMatrix& beat, const InterferenceSamples& intf);

CoherenceClass classify_coherence(const ChirpConfig& victim, const InterfererSpec& intf,
                                  const CoherenceTolerances& tol = {});

/// Expected interference probability f = u alpha tau_max / B, clamped to
/// [0, 1].
double interference_probability(double duty_cycle, double alpha, double tau_max_s,
                                double bandwidth_hz);

/// Limiting behavior of the in-band events for the three slope regimes.
struct InterferenceRegimes {
  double equal_slope_probability = 0.0;     // u Bs / B, lasting a full chirp
  double slow_interferer_probability = 0.0; // u, for alpha~ << alpha
  double slow_interferer_duration_s = 0.0;  // alpha~ tau_max / (alpha - alpha~)
  double fast_interferer_count = 0.0;       // alpha~ / alpha simultaneous events
  double fast_interferer_duration_s = 0.0;  // alpha tau_max / (alpha~ - alpha)
};

InterferenceRegimes interference_regimes(double duty_cycle, double alpha,
                                         double alpha_int, double tau_max_s,
                                         double bandwidth_hz, double interest_bandwidth_hz);

/// Rule-of-thumb SIR lower bound |gamma|^2 Gp^2 / (f |gamma_int|^2 Gp GI),
/// with GI in [1, Gp] expressing the coherence of the interference.
double sir_bound(double gamma2, double gamma_int2, double processing_gain,
                 double interference_gain, double f);

/// The same bound factored into geometry and design terms:
/// sigma r^2 / ((4 pi) d^4) * Gp B / (u Bs GI).
double sir_bound_factored(double rcs_m2, double interferer_distance_m,
                          double target_distance_m, double processing_gain,
                          double bandwidth_hz, double duty_cycle,
                          double interest_bandwidth_hz, double interference_gain);

/// Zero-mean phase trajectory (radians) of `count` samples at `rate_hz`
/// whose one-sided PSD follows the configured pedestal shape. Generated
/// by frequency-domain shaping of white Gaussian noise.
std::vector<double> sample_phase_noise(const PhaseNoiseConfig& cfg, std::size_t count,
                                       double rate_hz);

/// Fast-time power spectra (single chirp) of the target and interference
/// components, with and without oscillator phase noise, averaged over
/// independent phase-noise realizations. The victim oscillator enters the
/// target component through the delayed-minus-instant phase difference, so
/// the target profile smears far less than the interference profile.
struct RangeProfiles {
  std::vector<double> range_axis_m;
  std::vector<double> target_power;       // no phase noise
  std::vector<double> target_power_pn;    // averaged over realizations
  std::vector<double> intf_power;
  std::vector<double> intf_power_pn;
};

RangeProfiles averaged_range_profile(const ChirpConfig& victim, const TargetReturn& target,
                                     const InterfererSpec& intf, std::size_t pn_realizations,
                                     int zero_pad = 4);

}  // namespace rim
