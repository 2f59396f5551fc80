#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rim/rng.hpp"
#include "rim/scenario.hpp"

namespace rim {

/// One long chirp of duration `duration_s` (millisecond scale) shared by
/// up to `channel_count` radars; channel i starts its ramp with offset
/// i * duration / channel_count, which keeps any two channels
/// quasi-orthogonal.
struct SlowChirpConfig {
  double carrier_hz = 77e9;
  double bandwidth_hz = 1e9;
  double duration_s = 10e-3;
  int channel_count = 1;
  int channel_index = 0;
  double sample_rate_hz = 1e6;

  double slope() const { return bandwidth_hz / duration_s; }
  double channel_offset_s() const {
    return channel_index * duration_s / channel_count;
  }
  int num_samples() const;
  void validate() const;
};

struct CouplingResult {
  double exact = 0.0;   // |1/T integral e^{j(phi(t) - phi(t - dtau))} dt|^2
  double bound = 0.0;   // 1 / (pi^2 B^2 dtau^2)
};

/// Power coupling between a chirp and its copy delayed by `delta_tau_s`.
/// The exact value is a composite Gauss-Legendre quadrature of the phase
/// difference of the two quadratic phases; delta_tau = 0 is self-coupling
/// and returns exact = 1 with an unbounded bound.
CouplingResult coupling(double delta_tau_s, double bandwidth_hz, double duration_s);

/// Number of usable channels floor(T B sqrt(sigma) / r): offsets whose
/// coupling stays below the return of a typical target of cross section
/// sigma when interferer and target distances are comparable to r.
long long max_channels(double duration_s, double bandwidth_hz, double rcs_m2,
                       double distance_m);

/// Single-sweep dechirped time series including the terms a short-chirp
/// model drops: y(t) = g e^{j2pi fc nu t} e^{-j2pi alpha tau t} e^{j phi0}
/// e^{j2pi t^2 nu alpha} + w(t), with phi0 = pi alpha tau (tau - 2 fc/alpha).
std::vector<std::complex<double>> dechirp_slow(const Target& target,
                                               const SlowChirpConfig& cfg,
                                               double power_gain, double phase_rad,
                                               const NoiseConfig& noise);

/// Absolute dechirp phase for a given delay: pi alpha tau (tau - 2 fc / alpha).
double phi0_forward(double alpha, double tau_s, double carrier_hz);

/// The same phase reconstructed from the measured spectral peak
/// f* = fc nu - alpha tau: pi ((fc nu - f*)/alpha)(fc (nu - 2) - f*).
double phi0_from_fstar(double alpha, double carrier_hz, double nu, double f_star_hz);

/// Quadratic-term integral I(nu) = integral_0^T e^{j 2 pi t^2 nu alpha} dt.
std::complex<double> quadratic_integral(const SlowChirpConfig& cfg, double nu);

struct SpectrumPeak {
  double freq_hz = 0.0;                  // refined peak location
  std::complex<double> value{0.0, 0.0};  // Y(f) at the refined frequency
};

/// Location and complex value of the spectrum maximum. Y is normalized as
/// dt * sum y_i e^{-j2pi f t_i}, so a zero-velocity unit-gain target gives
/// Y = e^{j phi0} T at f* = -alpha tau.
SpectrumPeak spectrum_peak(const std::vector<std::complex<double>>& series,
                           double sample_rate_hz, int zero_pad = 8);

/// Velocity lookup table: for each grid velocity the angle of
/// e^{j phi0(nu)} I(nu) (unwrapped along the grid, optionally about a
/// fitted circle center), plus |I(nu)|. The angle is usable for inversion
/// only while it stays strictly monotone with total variation below one
/// turn; build_velocity_lut enforces that.
struct VelocityLut {
  double f_star_hz = 0.0;
  std::vector<double> velocity_mps;
  std::vector<double> angle_rad;       // unwrapped
  std::vector<double> integral_mag;
  bool recentered = false;
  std::complex<double> origin{0.0, 0.0};

  double min_velocity() const { return velocity_mps.front(); }
  double max_velocity() const { return velocity_mps.back(); }
  /// Velocity for a measured (principal) angle; linear interpolation on
  /// the monotone angle grid. Throws AmbiguousVelocityError when the
  /// angle lies outside the table.
  double invert(double angle_rad_principal) const;
};

/// Thrown when the requested velocity span has a folded (non one-to-one)
/// angle trace; carries the maximal usable span around the requested
/// center.
class SpanTooWideError : public std::runtime_error {
 public:
  SpanTooWideError(const std::string& what, double lo_mps, double hi_mps)
      : std::runtime_error(what), valid_lo_mps(lo_mps), valid_hi_mps(hi_mps) {}
  double valid_lo_mps = 0.0;
  double valid_hi_mps = 0.0;
};

/// Thrown when a measured angle cannot be attributed inside the lookup
/// span (the caller may retry on a Doppler-offset channel).
class AmbiguousVelocityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

VelocityLut build_velocity_lut(const SlowChirpConfig& cfg, double f_star_hz,
                               double v_min_mps, double v_max_mps, double v_step_mps,
                               bool recenter = false);

/// Largest half-width around `v_center` whose angle trace stays monotone
/// within one turn (the usable lookup span is determined numerically per
/// configuration).
double valid_velocity_halfspan(const SlowChirpConfig& cfg, double f_star_hz,
                               double v_center_mps);

struct EstimatorOptions {
  /// Center of the velocity search window (prior from tracking or the
  /// channel's Doppler offset); the window half-width defaults to the
  /// numerically determined usable span.
  double v_center_mps = 0.0;
  double v_halfspan_mps = -1.0;   // <= 0: use valid_velocity_halfspan
  double v_step_mps = -1.0;       // <= 0: span/256, capped at 0.25 km/h
  /// Added back to the measured peak frequency when the series was mixed
  /// down by a Doppler offset beforehand.
  double f_star_offset_hz = 0.0;
  bool recenter = false;
  double residual_tolerance = 0.05;  // |Im g| / |Re g| acceptance bound
  int refine_passes = 2;
};

struct RangeVelocityEstimate {
  double range_m = 0.0;
  double velocity_mps = 0.0;
  double f_star_hz = 0.0;
  std::complex<double> gamma{0.0, 0.0};
  double residual_ratio = 0.0;
  double lut_lo_mps = 0.0;
  double lut_hi_mps = 0.0;
};

/// Joint single-sweep estimate: the beat spectrum peak pins
/// f* = fc nu - alpha tau, the complex value at the peak is inverted
/// through the velocity lookup table, and the range follows from
/// R = c (fc nu - f*) / (2 alpha). The implied reflectivity must come out
/// real positive within the residual tolerance.
RangeVelocityEstimate estimate_range_velocity(
    const std::vector<std::complex<double>>& series, const SlowChirpConfig& cfg,
    const EstimatorOptions& options = {});

struct ChannelOutcome {
  double offset_hz = 0.0;
  bool ok = false;
  std::string error;
  RangeVelocityEstimate estimate;
};

/// Runs the estimator once per Doppler offset, each time on the series
/// mixed with e^{-j 2 pi offset t}; channel k searches velocities around
/// c * offset_k / (2 fc). Returns every channel's outcome; callers pick
/// the ones whose residual check passed.
std::vector<ChannelOutcome> doppler_offset_channels(
    const std::vector<std::complex<double>>& series, const SlowChirpConfig& cfg,
    const std::vector<double>& offsets_hz, const EstimatorOptions& base = {});

/// First passing channel; throws AmbiguousVelocityError with per-channel
/// diagnostics when none passes.
const ChannelOutcome& pick_channel(const std::vector<ChannelOutcome>& outcomes);

struct ChannelConflicts {
  int conflicted_radars = 0;
  long long conflict_pairs = 0;
};

/// Repeated random channel selection: every radar draws a channel
/// uniformly; radars sharing a channel redraw the next round. Returns the
/// per-round conflict counts (round 0 is the initial draw).
std::vector<ChannelConflicts> random_channel_protocol(int num_radars,
                                                      long long num_channels,
                                                      int rounds, Rng& rng);

}  // namespace rim
