#include "rim/interference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rim/fft.hpp"
#include "rim/rng.hpp"
#include "rim/units.hpp"

namespace rim {

void InterfererSpec::validate() const {
  if (!(sweep_bandwidth_hz > 0.0) || !(chirp_duration_s > 0.0)) {
    throw std::domain_error("interferer sweep bandwidth and chirp duration must be positive");
  }
  if (oneway_delay_s < 0.0) throw std::domain_error("interferer delay must be non-negative");
  if (power_gain < 0.0) throw std::domain_error("interferer power gain must be non-negative");
}

double InterferenceSamples::indicator_fraction() const {
  if (indicator.empty()) return 0.0;
  std::size_t on = 0;
  for (auto v : indicator) on += v;
  return static_cast<double>(on) / static_cast<double>(indicator.size());
}

double InterferenceSamples::total_energy() const {
  double e = 0.0;
  for (const auto& s : samples) e += std::norm(s);
  return e;
}

namespace {

// Phase-noise sample path on a uniform grid with linear interpolation in
// between; the grid extends `lead_s` before zero so delayed evaluations
// stay inside it.
class PhaseNoisePath {
 public:
  PhaseNoisePath(const PhaseNoiseConfig& cfg, double lead_s, double duration_s,
                 double rate_hz)
      : rate_(rate_hz), lead_(std::ceil(lead_s * rate_hz) + 1.0) {
    const std::size_t count =
        static_cast<std::size_t>(lead_ + std::ceil(duration_s * rate_hz)) + 2;
    values_ = sample_phase_noise(cfg, count, rate_hz);
  }

  double at(double t_s) const {
    const double x =
        std::clamp(t_s * rate_ + lead_, 0.0, static_cast<double>(values_.size() - 2));
    const auto i = static_cast<std::size_t>(x);
    const double frac = x - static_cast<double>(i);
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
  }

 private:
  double rate_;
  double lead_;
  std::vector<double> values_;
};

double wrap_cycles_to_phase(double cycles) {
  return kTwoPi * (cycles - std::floor(cycles));
}

}  // namespace

InterferenceSamples dechirped_interference(
    const ChirpConfig& victim, const InterfererSpec& intf,
    const std::optional<PhaseNoiseConfig>& victim_phase_noise) {
  victim.validate();
  intf.validate();

  const int K = victim.num_chirps;
  const int M = victim.samples_per_chirp();
  const int n0 = victim.n_max();
  const double Ts = victim.sample_period_s;
  const double T = victim.chirp_duration_s;
  const double fc = victim.carrier_hz;
  const double alpha = victim.slope();
  const double alpha_i = intf.slope();
  const double Ti = intf.chirp_duration_s;
  const double bs = victim.interest_bandwidth_hz;
  const double amp = std::sqrt(intf.power_gain);

  std::optional<PhaseNoisePath> pn_victim;
  std::optional<PhaseNoisePath> pn_intf;
  const double cpi = K * T;
  if (victim_phase_noise) {
    pn_victim.emplace(*victim_phase_noise, T, cpi + T, 1.0 / Ts);
  }
  if (intf.phase_noise) {
    // The interferer clock argument u = t_abs - t0 - tau_int spans
    // [-(t0 + tau_int), cpi - t0 - tau_int]; size the path to cover it.
    const double shift = intf.start_offset_s + intf.oneway_delay_s;
    pn_intf.emplace(*intf.phase_noise, std::max(0.0, shift) + 2.0 * Ts,
                    cpi + std::max(0.0, -shift) + 2.0 * Ts, 1.0 / Ts);
  }

  InterferenceSamples out;
  out.config = victim;
  out.samples.assign(static_cast<std::size_t>(K) * M, {0.0, 0.0});
  out.indicator.assign(out.samples.size(), 0);

  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < M; ++j) {
      const double t = (n0 + j) * Ts;           // victim chirp-local time
      const double t_abs = k * T + t;
      const double u = t_abs - intf.start_offset_s - intf.oneway_delay_s;
      const double s = u - std::floor(u / Ti) * Ti;   // interferer chirp-local time
      const double f_inst = alpha_i * s - alpha * t;
      if (f_inst < -bs || f_inst > 0.0) continue;

      const std::size_t idx = static_cast<std::size_t>(k) * M + j;
      out.indicator[idx] = 1;
      // Phase difference of the two quadratic chirp phases, kept in cycles
      // until reduction so the large common carrier terms cancel first.
      double cycles = fc * (s - t) + 0.5 * (alpha_i * s * s - alpha * t * t);
      double phase = wrap_cycles_to_phase(cycles);
      if (pn_intf) phase += pn_intf->at(u);
      if (pn_victim) phase += -pn_victim->at(t_abs);
      out.samples[idx] = std::polar(amp, phase);
    }
  }
  return out;
}

double in_band_fraction(const ChirpConfig& victim, const InterfererSpec& intf,
                        int chirp_k, double active_lo_s, double active_hi_s) {
  const double Ts = victim.sample_period_s;
  const double T = victim.chirp_duration_s;
  const double alpha = victim.slope();
  const double alpha_i = intf.slope();
  const double Ti = intf.chirp_duration_s;
  const double bs = victim.interest_bandwidth_hz;

  const double window_lo = victim.n_max() * Ts;
  const double window_hi = (victim.num_samples_total() - 1) * Ts;
  const double t_lo = std::max(window_lo, active_lo_s);
  const double t_hi = std::min(window_hi, active_hi_s);
  if (t_hi <= t_lo || window_hi <= window_lo) return 0.0;

  // Piecewise-linear beat frequency; pieces split at interferer chirp
  // boundaries within the sampling window.
  const double off = chirp_k * T - intf.start_offset_s - intf.oneway_delay_s;
  double covered = 0.0;
  double piece_lo = t_lo;
  while (piece_lo < t_hi) {
    const double u_lo = piece_lo + off;
    const double idx = std::floor(u_lo / Ti);
    const double piece_hi = std::min(t_hi, (idx + 1.0) * Ti - off);
    // On this piece: f(t) = (alpha_i - alpha) t + alpha_i (off - idx Ti).
    const double slope = alpha_i - alpha;
    const double intercept = alpha_i * (off - idx * Ti);
    double lo = piece_lo, hi = piece_hi;
    if (std::abs(slope) < 1e-9 * alpha) {
      const double f = slope * 0.5 * (piece_lo + piece_hi) + intercept;
      if (f < -bs || f > 0.0) lo = hi;
    } else {
      // Solve -bs <= slope t + intercept <= 0.
      double ta = (-bs - intercept) / slope;
      double tb = (0.0 - intercept) / slope;
      if (ta > tb) std::swap(ta, tb);
      lo = std::max(lo, ta);
      hi = std::min(hi, tb);
    }
    if (hi > lo) covered += hi - lo;
    piece_lo = std::max(piece_hi, piece_lo + 1e-15 * T);
  }
  return covered / (window_hi - window_lo);
}

BeatMatrix inject(const BeatMatrix& beat, const InterferenceSamples& intf) {
  if (beat.samples.size() != intf.samples.size() ||
      beat.rows() != intf.config.num_chirps) {
    throw std::invalid_argument("interference grid does not match beat matrix dimensions");
  }
  BeatMatrix out = beat;
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += intf.samples[i];
  return out;
}

CoherenceClass classify_coherence(const ChirpConfig& victim, const InterfererSpec& intf,
                                  const CoherenceTolerances& tol) {
  const auto rel = [](double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  };
  const double window_s = victim.samples_per_chirp() * victim.sample_period_s;
  const double spread_bins =
      std::abs(intf.slope() - victim.slope()) * window_s * window_s;
  if (spread_bins > tol.spread_bins) return CoherenceClass::kIncoherent;
  const bool matched = rel(intf.slope(), victim.slope()) < tol.relative_match &&
                       rel(intf.chirp_duration_s, victim.chirp_duration_s) < tol.relative_match &&
                       rel(intf.sweep_bandwidth_hz, victim.sweep_bandwidth_hz) < tol.relative_match;
  if (matched && !intf.phase_noise.has_value()) return CoherenceClass::kCoherent;
  return CoherenceClass::kPartiallyCoherent;
}

double interference_probability(double duty_cycle, double alpha, double tau_max_s,
                                double bandwidth_hz) {
  if (duty_cycle < 0.0 || duty_cycle > 1.0) {
    throw std::domain_error("duty cycle must lie in [0, 1]");
  }
  if (!(alpha > 0.0) || !(tau_max_s >= 0.0) || !(bandwidth_hz > 0.0)) {
    throw std::domain_error("interference probability needs positive alpha and bandwidth");
  }
  return std::clamp(duty_cycle * alpha * tau_max_s / bandwidth_hz, 0.0, 1.0);
}

InterferenceRegimes interference_regimes(double duty_cycle, double alpha,
                                         double alpha_int, double tau_max_s,
                                         double bandwidth_hz,
                                         double interest_bandwidth_hz) {
  InterferenceRegimes r;
  r.equal_slope_probability = duty_cycle * interest_bandwidth_hz / bandwidth_hz;
  r.slow_interferer_probability = duty_cycle;
  if (alpha_int < alpha) {
    r.slow_interferer_duration_s = alpha_int * tau_max_s / (alpha - alpha_int);
  }
  r.fast_interferer_count = alpha_int / alpha;
  if (alpha_int > alpha) {
    r.fast_interferer_duration_s = alpha * tau_max_s / (alpha_int - alpha);
  }
  return r;
}

double sir_bound(double gamma2, double gamma_int2, double processing_gain,
                 double interference_gain, double f) {
  if (interference_gain < 1.0 || interference_gain > processing_gain) {
    throw std::domain_error("interference gain GI must lie in [1, Gp]");
  }
  if (!(f > 0.0) || f > 1.0) {
    throw std::domain_error("interference probability f must lie in (0, 1]");
  }
  return gamma2 * processing_gain * processing_gain /
         (f * gamma_int2 * processing_gain * interference_gain);
}

double sir_bound_factored(double rcs_m2, double interferer_distance_m,
                          double target_distance_m, double processing_gain,
                          double bandwidth_hz, double duty_cycle,
                          double interest_bandwidth_hz, double interference_gain) {
  const double geometry = rcs_m2 * interferer_distance_m * interferer_distance_m /
                          (4.0 * kPi * std::pow(target_distance_m, 4.0));
  const double design = processing_gain * bandwidth_hz /
                        (duty_cycle * interest_bandwidth_hz * interference_gain);
  return geometry * design;
}

std::vector<double> sample_phase_noise(const PhaseNoiseConfig& cfg, std::size_t count,
                                       double rate_hz) {
  if (count == 0) throw std::invalid_argument("phase-noise trajectory needs count > 0");
  if (!(rate_hz > 0.0)) throw std::invalid_argument("phase-noise rate must be positive");
  if (!(cfg.pedestal_width_hz > 0.0)) {
    throw std::domain_error("phase-noise pedestal width must be positive");
  }

  const double s0 = 2.0 * db_to_linear(cfg.pedestal_height_dbc_hz);
  if (s0 <= 0.0 || !std::isfinite(s0)) return std::vector<double>(count, 0.0);

  const std::size_t n = std::max<std::size_t>(count, 8);
  std::vector<std::complex<double>> spectrum(n, {0.0, 0.0});
  Rng rng(derive_seed(cfg.rng_seed, 0x706e6f6973ull));
  const auto psd = [&](double f) {
    // One-sided PSD: flat pedestal up to Wp, -20 dB/decade beyond.
    const double shaped = s0 * std::min(1.0, std::pow(cfg.pedestal_width_hz / f, 2.0));
    return shaped;
  };
  for (std::size_t m = 1; m <= n / 2; ++m) {
    const double f = static_cast<double>(m) * rate_hz / static_cast<double>(n);
    const double sigma = std::sqrt(psd(f) * rate_hz * static_cast<double>(n) / 2.0);
    if (2 * m == n) {
      spectrum[m] = {sigma * rng.normal(), 0.0};
    } else {
      const std::complex<double> z{rng.normal(), rng.normal()};
      spectrum[m] = sigma * z / std::sqrt(2.0);
      spectrum[n - m] = std::conj(spectrum[m]);
    }
  }
  fft::inverse(spectrum);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = spectrum[i].real() / static_cast<double>(n);
  return out;
}

RangeProfiles averaged_range_profile(const ChirpConfig& victim, const TargetReturn& target,
                                     const InterfererSpec& intf, std::size_t pn_realizations,
                                     int zero_pad) {
  if (pn_realizations < 1) throw std::invalid_argument("need at least one realization");
  victim.validate();

  ChirpConfig single = victim;
  single.num_chirps = 1;
  const int M = single.samples_per_chirp();
  const int n0 = single.n_max();
  const double Ts = single.sample_period_s;
  const double tau = 2.0 * target.target.range_m / kSpeedOfLight;
  if (tau > single.tau_max()) {
    throw std::domain_error("target delay exceeds tau_max");
  }
  const double nu = 2.0 * target.target.radial_velocity_mps / kSpeedOfLight;
  const double fast_freq = -single.slope() * tau + single.carrier_hz * nu;
  const std::complex<double> gain =
      std::polar(std::sqrt(target.power_gain), target.phase_rad);

  const int nfft = M * std::max(zero_pad, 1);
  const auto spectrum_power = [&](const std::vector<std::complex<double>>& x) {
    auto spec = fft::inverse_padded(x, nfft);
    std::vector<double> p(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) p[i] = std::norm(spec[i]);
    return p;
  };

  RangeProfiles out;
  out.range_axis_m.resize(nfft);
  for (int m = 0; m < nfft; ++m) {
    out.range_axis_m[m] =
        kSpeedOfLight * (m / (single.slope() * nfft * Ts)) / 2.0;
  }

  // Noise-free references (single realization, oscillators ideal).
  std::vector<std::complex<double>> target_clean(M);
  for (int j = 0; j < M; ++j) {
    target_clean[j] = gain * std::polar(1.0, kTwoPi * fast_freq * (n0 + j) * Ts);
  }
  out.target_power = spectrum_power(target_clean);
  InterfererSpec intf_clean = intf;
  intf_clean.phase_noise.reset();
  out.intf_power = spectrum_power(dechirped_interference(single, intf_clean).samples);

  // Phase-noise averages. The victim oscillator phase enters the target
  // component as theta_v(t - tau) - theta_v(t): the short lag leaves it
  // highly correlated, which is exactly why the target profile stays
  // sharper than the interference profile.
  const PhaseNoiseConfig base_pn = intf.phase_noise ? *intf.phase_noise : PhaseNoiseConfig{};
  out.target_power_pn.assign(nfft, 0.0);
  out.intf_power_pn.assign(nfft, 0.0);
  std::vector<std::complex<double>> target_pn(M);
  for (std::size_t r = 0; r < pn_realizations; ++r) {
    PhaseNoiseConfig victim_pn = base_pn;
    victim_pn.rng_seed = derive_seed(base_pn.rng_seed, 2 * r);
    PhaseNoiseConfig intf_pn = base_pn;
    intf_pn.rng_seed = derive_seed(base_pn.rng_seed, 2 * r + 1);

    PhaseNoisePath victim_path(victim_pn, tau + Ts, single.chirp_duration_s + Ts, 1.0 / Ts);
    for (int j = 0; j < M; ++j) {
      const double t = (n0 + j) * Ts;
      const double dphi = victim_path.at(t - tau) - victim_path.at(t);
      target_pn[j] = target_clean[j] * std::polar(1.0, dphi);
    }
    const auto tp = spectrum_power(target_pn);

    InterfererSpec intf_r = intf;
    intf_r.phase_noise = intf_pn;
    const auto ip =
        spectrum_power(dechirped_interference(single, intf_r, victim_pn).samples);
    for (int m = 0; m < nfft; ++m) {
      out.target_power_pn[m] += tp[m];
      out.intf_power_pn[m] += ip[m];
    }
  }
  const double inv = 1.0 / static_cast<double>(pn_realizations);
  for (int m = 0; m < nfft; ++m) {
    out.target_power_pn[m] *= inv;
    out.intf_power_pn[m] *= inv;
  }
  return out;
}

}  // namespace rim
