#include "rim/slowchirp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "rim/dsv.hpp"
#include "rim/fft.hpp"
#include "rim/quadrature.hpp"
#include "rim/units.hpp"

namespace rim {

int SlowChirpConfig::num_samples() const {
  return static_cast<int>(std::llround(duration_s * sample_rate_hz));
}

void SlowChirpConfig::validate() const {
  if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0) || !(duration_s > 0.0)) {
    throw std::domain_error("slow-chirp carrier, bandwidth and duration must be positive");
  }
  if (channel_count < 1) throw std::domain_error("channel count must be >= 1");
  if (channel_index < 0 || channel_index >= channel_count) {
    throw std::domain_error("channel index must lie in [0, channel_count)");
  }
  if (!(sample_rate_hz > 0.0) || num_samples() < 16) {
    throw std::domain_error("sample rate too low for the chirp duration");
  }
}

CouplingResult coupling(double delta_tau_s, double bandwidth_hz, double duration_s) {
  if (delta_tau_s < 0.0 || delta_tau_s >= duration_s) {
    throw std::domain_error("coupling defined for 0 <= delta_tau < T");
  }
  CouplingResult r;
  if (delta_tau_s == 0.0) {
    r.exact = 1.0;
    r.bound = std::numeric_limits<double>::infinity();
    return r;
  }
  const double alpha = bandwidth_hz / duration_s;
  // Phase difference of the two quadratic ramp phases; the beat frequency
  // is alpha * delta_tau, i.e. B * dtau / T cycles per unit time.
  const double cycles = bandwidth_hz * delta_tau_s;
  const std::size_t panels =
      std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(4.0 * cycles)));
  const auto integrand = [&](double t) {
    const double dt = t - delta_tau_s;
    const double phase_cycles =
        /* fc t - fc (t - dtau) */ 0.0 +  // carrier cancels up to a constant
        0.5 * alpha * (t * t - dt * dt);
    const double ph = kTwoPi * (phase_cycles - std::floor(phase_cycles));
    return std::complex<double>(std::cos(ph), std::sin(ph));
  };
  const auto integral = integrate_gl7(integrand, 0.0, duration_s, panels);
  r.exact = std::norm(integral / duration_s);
  r.bound = 1.0 / (kPi * kPi * bandwidth_hz * bandwidth_hz * delta_tau_s * delta_tau_s);
  return r;
}

long long max_channels(double duration_s, double bandwidth_hz, double rcs_m2,
                       double distance_m) {
  if (!(duration_s > 0.0) || !(bandwidth_hz > 0.0) || !(rcs_m2 > 0.0) ||
      !(distance_m > 0.0)) {
    throw std::domain_error("max_channels needs positive inputs");
  }
  return static_cast<long long>(
      std::floor(duration_s * bandwidth_hz * std::sqrt(rcs_m2) / distance_m));
}

double phi0_forward(double alpha, double tau_s, double carrier_hz) {
  return kPi * alpha * tau_s * (tau_s - 2.0 * carrier_hz / alpha);
}

double phi0_from_fstar(double alpha, double carrier_hz, double nu, double f_star_hz) {
  return kPi * ((carrier_hz * nu - f_star_hz) / alpha) *
         (carrier_hz * (nu - 2.0) - f_star_hz);
}

std::vector<std::complex<double>> dechirp_slow(const Target& target,
                                               const SlowChirpConfig& cfg,
                                               double power_gain, double phase_rad,
                                               const NoiseConfig& noise) {
  cfg.validate();
  target.validate();
  noise.validate();
  const double tau = 2.0 * target.range_m / kSpeedOfLight;
  const double nu = 2.0 * target.radial_velocity_mps / kSpeedOfLight;
  const double alpha = cfg.slope();
  const double phi0 = phi0_forward(alpha, tau, cfg.carrier_hz);
  const double lin_freq = cfg.carrier_hz * nu - alpha * tau;
  const std::complex<double> gain = std::polar(std::sqrt(power_gain), phase_rad + phi0);

  const int n = cfg.num_samples();
  std::vector<std::complex<double>> y(static_cast<std::size_t>(n));
  std::optional<Rng> rng;
  if (noise.variance_w > 0.0) rng.emplace(noise.rng_seed);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.sample_rate_hz;
    const double cycles = lin_freq * t + t * t * nu * alpha;
    const double ph = kTwoPi * (cycles - std::floor(cycles));
    y[i] = gain * std::complex<double>(std::cos(ph), std::sin(ph));
    if (rng) y[i] += rng->complex_normal(noise.variance_w);
  }
  return y;
}

std::complex<double> quadratic_integral(const SlowChirpConfig& cfg, double nu) {
  const double cycles = std::abs(nu) * cfg.slope() * cfg.duration_s * cfg.duration_s;
  const std::size_t panels =
      std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(6.0 * cycles)));
  const double w = kTwoPi * nu * cfg.slope();
  return integrate_gl7(
      [w](double t) {
        const double ph = w * t * t;
        return std::complex<double>(std::cos(ph), std::sin(ph));
      },
      0.0, cfg.duration_s, panels);
}

namespace {

std::complex<double> goertzel(const std::vector<std::complex<double>>& series,
                              double sample_rate_hz, double freq_hz) {
  // Direct evaluation of dt * sum y_i e^{-j 2 pi f t_i}.
  const double dphi = -kTwoPi * freq_hz / sample_rate_hz;
  const std::complex<double> step = std::polar(1.0, dphi);
  std::complex<double> rot{1.0, 0.0};
  std::complex<double> acc{0.0, 0.0};
  for (const auto& v : series) {
    acc += v * rot;
    rot *= step;
  }
  return acc / sample_rate_hz;
}

double wrap_pi(double x) {
  x = std::fmod(x + kPi, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x - kPi;
}

}  // namespace

SpectrumPeak spectrum_peak(const std::vector<std::complex<double>>& series,
                           double sample_rate_hz, int zero_pad) {
  if (series.empty()) throw std::invalid_argument("spectrum of empty series");
  const std::size_t nfft = series.size() * static_cast<std::size_t>(std::max(zero_pad, 1));
  auto spec = fft::forward_padded(series, nfft);

  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double p = std::norm(spec[i]);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  const auto p_at = [&](std::size_t i) { return std::norm(spec[(i + nfft) % nfft]); };
  const double pm = p_at(best + nfft - 1);
  const double pp = p_at(best + 1);
  const double la = std::log(std::max(pm, 1e-300));
  const double lb = std::log(std::max(best_p, 1e-300));
  const double lc = std::log(std::max(pp, 1e-300));
  const double denom = la - 2.0 * lb + lc;
  const double frac =
      (denom < 0.0 && std::isfinite(denom)) ? std::clamp(0.5 * (la - lc) / denom, -0.5, 0.5) : 0.0;

  // Signed bin index (the spectrum is periodic; report in [-fs/2, fs/2)).
  double bin = static_cast<double>(best) + frac;
  if (bin > static_cast<double>(nfft) / 2.0) bin -= static_cast<double>(nfft);
  SpectrumPeak peak;
  peak.freq_hz = bin * sample_rate_hz / static_cast<double>(nfft);
  peak.value = goertzel(series, sample_rate_hz, peak.freq_hz);
  return peak;
}

namespace {

std::complex<double> lut_model_value(const SlowChirpConfig& cfg, double f_star_hz,
                                     double v_mps) {
  const double nu = 2.0 * v_mps / kSpeedOfLight;
  const double phi0 = phi0_from_fstar(cfg.slope(), cfg.carrier_hz, nu, f_star_hz);
  return std::polar(1.0, wrap_pi(phi0)) * quadratic_integral(cfg, nu);
}

std::complex<double> fit_circle_center(const std::vector<std::complex<double>>& pts) {
  // Kasa algebraic circle fit: least squares on |z|^2 = 2 x0 x + 2 y0 y + e.
  double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, sxz = 0, syz = 0, sz = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    const double x = p.real(), y = p.imag(), z = x * x + y * y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    sx += x;
    sy += y;
    sxz += x * z;
    syz += y * z;
    sz += z;
  }
  // Solve [2sxx 2sxy sx; 2sxy 2syy sy; 2sx 2sy n] [x0 y0 e]^T = [sxz syz sz]^T.
  const double a[3][3] = {{2 * sxx, 2 * sxy, sx}, {2 * sxy, 2 * syy, sy}, {2 * sx, 2 * sy, n}};
  const double b[3] = {sxz, syz, sz};
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  if (std::abs(det) < 1e-30) return {0.0, 0.0};
  const auto solve_col = [&](int col) {
    double m[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = (j == col) ? b[i] : a[i][j];
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
            m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) /
           det;
  };
  return {solve_col(0), solve_col(1)};
}

}  // namespace

VelocityLut build_velocity_lut(const SlowChirpConfig& cfg, double f_star_hz,
                               double v_min_mps, double v_max_mps, double v_step_mps,
                               bool recenter) {
  cfg.validate();
  if (!(v_step_mps > 0.0) || !(v_max_mps > v_min_mps)) {
    throw std::invalid_argument("velocity span and step must be positive");
  }
  const int count = static_cast<int>(std::floor((v_max_mps - v_min_mps) / v_step_mps)) + 1;
  if (count < 3) throw std::invalid_argument("velocity grid needs at least 3 points");

  VelocityLut lut;
  lut.f_star_hz = f_star_hz;
  lut.recentered = recenter;
  std::vector<std::complex<double>> trace(static_cast<std::size_t>(count));
  lut.velocity_mps.resize(count);
  lut.integral_mag.resize(count);
  for (int i = 0; i < count; ++i) {
    const double v = v_min_mps + i * v_step_mps;
    lut.velocity_mps[i] = v;
    trace[i] = lut_model_value(cfg, f_star_hz, v);
    lut.integral_mag[i] = std::abs(quadratic_integral(cfg, 2.0 * v / kSpeedOfLight));
  }
  if (recenter) {
    lut.origin = fit_circle_center(trace);
    for (auto& z : trace) z -= lut.origin;
  }

  // Unwrap the trace angle along the grid.
  lut.angle_rad.resize(count);
  lut.angle_rad[0] = std::arg(trace[0]);
  for (int i = 1; i < count; ++i) {
    lut.angle_rad[i] = lut.angle_rad[i - 1] + wrap_pi(std::arg(trace[i]) - std::arg(trace[i - 1]));
  }

  // The inversion is one-to-one only while the unwrapped angle is strictly
  // monotone and spans less than one full turn.
  const bool increasing = lut.angle_rad[1] > lut.angle_rad[0];
  bool monotone = true;
  for (int i = 1; i < count && monotone; ++i) {
    const double d = lut.angle_rad[i] - lut.angle_rad[i - 1];
    monotone = increasing ? (d > 0.0) : (d < 0.0);
  }
  const double variation = std::abs(lut.angle_rad.back() - lut.angle_rad.front());
  if (!monotone || variation >= kTwoPi) {
    // Report the maximal usable window around the center of the request.
    const int mid = count / 2;
    int lo = mid, hi = mid;
    while (lo > 0) {
      const double d = lut.angle_rad[lo] - lut.angle_rad[lo - 1];
      const bool ok = increasing ? (d > 0.0) : (d < 0.0);
      if (!ok || std::abs(lut.angle_rad[hi] - lut.angle_rad[lo - 1]) >= kTwoPi) break;
      --lo;
    }
    while (hi + 1 < count) {
      const double d = lut.angle_rad[hi + 1] - lut.angle_rad[hi];
      const bool ok = increasing ? (d > 0.0) : (d < 0.0);
      if (!ok || std::abs(lut.angle_rad[hi + 1] - lut.angle_rad[lo]) >= kTwoPi) break;
      ++hi;
    }
    throw SpanTooWideError(
        "velocity span too wide for one-to-one angle inversion; maximal valid span [" +
            format_double(lut.velocity_mps[lo]) + ", " + format_double(lut.velocity_mps[hi]) +
            "] m/s",
        lut.velocity_mps[lo], lut.velocity_mps[hi]);
  }
  return lut;
}

double VelocityLut::invert(double angle_rad_principal) const {
  // Compare in wrapped coordinates relative to the table's first entry.
  const double base = angle_rad[0];
  const double target = base + wrap_pi(angle_rad_principal - wrap_pi(base));
  const bool increasing = angle_rad.back() > angle_rad.front();
  const double lo = increasing ? angle_rad.front() : angle_rad.back();
  const double hi = increasing ? angle_rad.back() : angle_rad.front();
  // The wrapped target may land one turn off; try the shift that falls in
  // range.
  double t = target;
  if (t < lo && t + kTwoPi <= hi) t += kTwoPi;
  if (t > hi && t - kTwoPi >= lo) t -= kTwoPi;
  if (t < lo || t > hi) {
    throw AmbiguousVelocityError("measured angle outside the velocity lookup span");
  }
  // Binary search on the monotone grid, then linear interpolation.
  std::size_t a = 0, b = angle_rad.size() - 1;
  while (b - a > 1) {
    const std::size_t m = (a + b) / 2;
    const bool left = increasing ? (angle_rad[m] > t) : (angle_rad[m] < t);
    (left ? b : a) = m;
  }
  const double da = angle_rad[a], db = angle_rad[b];
  const double w = (std::abs(db - da) < 1e-300) ? 0.0 : (t - da) / (db - da);
  return velocity_mps[a] + w * (velocity_mps[b] - velocity_mps[a]);
}

double valid_velocity_halfspan(const SlowChirpConfig& cfg, double f_star_hz,
                               double v_center_mps) {
  // The angle slope is dominated by d phi0 / d nu; expand numerically
  // until the variation approaches one turn.
  const double dv = 1e-7;
  const auto angle_at = [&](double v) {
    return std::arg(lut_model_value(cfg, f_star_hz, v));
  };
  const double slope =
      std::abs(wrap_pi(angle_at(v_center_mps + dv) - angle_at(v_center_mps - dv))) / (2.0 * dv);
  if (!(slope > 0.0)) return 1.0;
  double half = 0.98 * kPi / slope;
  // Walk outward in small steps to confirm monotonicity over the window.
  for (int refine = 0; refine < 4; ++refine) {
    const int steps = 64;
    double prev = angle_at(v_center_mps - half);
    double acc = 0.0;
    bool ok = true;
    double sign = 0.0;
    for (int i = 1; i <= 2 * steps; ++i) {
      const double v = v_center_mps - half + i * (half / steps);
      const double cur = angle_at(v);
      const double d = wrap_pi(cur - prev);
      if (i == 1) sign = d >= 0.0 ? 1.0 : -1.0;
      if (d * sign <= 0.0) ok = false;
      acc += std::abs(d);
      prev = cur;
    }
    if (ok && acc < kTwoPi * 0.98) return half;
    half *= 0.7;
  }
  return half;
}

RangeVelocityEstimate estimate_range_velocity(
    const std::vector<std::complex<double>>& series, const SlowChirpConfig& cfg,
    const EstimatorOptions& options) {
  cfg.validate();
  if (series.empty()) throw std::invalid_argument("estimator needs a non-empty series");
  const double fs = cfg.sample_rate_hz;
  const double alpha = cfg.slope();
  const double fc = cfg.carrier_hz;

  double v_ref = options.v_center_mps;
  RangeVelocityEstimate est;
  const int passes = std::max(1, options.refine_passes);
  VelocityLut lut;
  for (int pass = 0; pass < passes; ++pass) {
    // Remove the quadratic phase at the reference velocity so the beat
    // tone is spectrally sharp, then measure its frequency.
    const double nu_ref = 2.0 * v_ref / kSpeedOfLight;
    std::vector<std::complex<double>> dechirped(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double t = static_cast<double>(i) / fs;
      dechirped[i] = series[i] * std::polar(1.0, -kTwoPi * t * t * nu_ref * alpha);
    }
    const auto peak = spectrum_peak(dechirped, fs);
    est.f_star_hz = peak.freq_hz + options.f_star_offset_hz;
    // The complex amplitude is read at the peak of the input series; a
    // prior Doppler-offset mixing moves the peak but not its value, so
    // Y(f*) = gamma e^{j phi0} I(nu) still holds with the offset-corrected
    // f*.
    const auto value = goertzel(series, fs, peak.freq_hz);

    double halfspan = options.v_halfspan_mps;
    if (!(halfspan > 0.0)) {
      halfspan = valid_velocity_halfspan(cfg, est.f_star_hz, options.v_center_mps);
    }
    double step = options.v_step_mps;
    if (!(step > 0.0)) step = std::min(0.25 / 3.6, 2.0 * halfspan / 256.0);
    lut = build_velocity_lut(cfg, est.f_star_hz, options.v_center_mps - halfspan,
                             options.v_center_mps + halfspan, step, false);

    double v_hat;
    if (options.recenter) {
      // First pass normalizes the measured amplitude with the plain LUT,
      // then reads the angle about the fitted circle center.
      const double v0 = lut.invert(std::arg(value));
      const double mag = std::abs(quadratic_integral(cfg, 2.0 * v0 / kSpeedOfLight));
      const double g0 = std::abs(value) / std::max(mag, 1e-300);
      auto centered = build_velocity_lut(cfg, est.f_star_hz, options.v_center_mps - halfspan,
                                         options.v_center_mps + halfspan, step, true);
      v_hat = centered.invert(std::arg(value / g0 - centered.origin));
    } else {
      v_hat = lut.invert(std::arg(value));
    }

    const double nu_hat = 2.0 * v_hat / kSpeedOfLight;
    const double tau_hat = (fc * nu_hat - est.f_star_hz) / alpha;
    est.velocity_mps = v_hat;
    est.range_m = kSpeedOfLight * tau_hat / 2.0;
    const std::complex<double> model =
        std::polar(1.0, wrap_pi(phi0_from_fstar(alpha, fc, nu_hat, est.f_star_hz))) *
        quadratic_integral(cfg, nu_hat);
    est.gamma = value / model;
    est.residual_ratio = std::abs(est.gamma.imag()) / std::max(std::abs(est.gamma.real()), 1e-300);
    est.lut_lo_mps = lut.min_velocity();
    est.lut_hi_mps = lut.max_velocity();
    v_ref = v_hat;
  }

  if (est.gamma.real() <= 0.0 || est.residual_ratio > options.residual_tolerance) {
    throw AmbiguousVelocityError(
        "implied reflectivity not real positive within tolerance (residual " +
        format_double(est.residual_ratio) + ")");
  }
  return est;
}

std::vector<ChannelOutcome> doppler_offset_channels(
    const std::vector<std::complex<double>>& series, const SlowChirpConfig& cfg,
    const std::vector<double>& offsets_hz, const EstimatorOptions& base) {
  std::set<double> distinct(offsets_hz.begin(), offsets_hz.end());
  if (distinct.size() != offsets_hz.size()) {
    throw std::invalid_argument("doppler offsets must be distinct");
  }
  std::vector<ChannelOutcome> outcomes;
  outcomes.reserve(offsets_hz.size());
  for (double offset : offsets_hz) {
    ChannelOutcome out;
    out.offset_hz = offset;
    // Mix the series down by the channel offset; the estimator adds the
    // offset back to the measured peak frequency and searches velocities
    // around the equivalent speed c * offset / (2 fc).
    std::vector<std::complex<double>> mixed(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double t = static_cast<double>(i) / cfg.sample_rate_hz;
      mixed[i] = series[i] * std::polar(1.0, -kTwoPi * offset * t);
    }
    EstimatorOptions opts = base;
    opts.f_star_offset_hz = offset;
    opts.v_center_mps = base.v_center_mps + kSpeedOfLight * offset / (2.0 * cfg.carrier_hz);
    try {
      out.estimate = estimate_range_velocity(mixed, cfg, opts);
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    outcomes.push_back(out);
  }
  return outcomes;
}

const ChannelOutcome& pick_channel(const std::vector<ChannelOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    if (o.ok) return o;
  }
  std::string diag = "all velocity channels ambiguous:";
  for (const auto& o : outcomes) {
    diag += " [offset " + format_double(o.offset_hz) + " Hz: " + o.error + "]";
  }
  throw AmbiguousVelocityError(diag);
}

std::vector<ChannelConflicts> random_channel_protocol(int num_radars,
                                                      long long num_channels,
                                                      int rounds, Rng& rng) {
  if (num_channels < 1) throw std::domain_error("need at least one channel");
  if (num_radars < 0 || rounds < 1) {
    throw std::invalid_argument("radar count must be >= 0 and rounds >= 1");
  }
  std::vector<long long> channel(static_cast<std::size_t>(num_radars), -1);
  std::vector<char> conflicted(static_cast<std::size_t>(num_radars), 1);
  std::vector<ChannelConflicts> trajectory;
  trajectory.reserve(static_cast<std::size_t>(rounds));
  for (int round = 0; round < rounds; ++round) {
    for (int i = 0; i < num_radars; ++i) {
      if (conflicted[i]) {
        channel[i] = static_cast<long long>(rng.below(static_cast<std::uint64_t>(num_channels)));
      }
    }
    std::map<long long, int> counts;
    for (int i = 0; i < num_radars; ++i) ++counts[channel[i]];
    ChannelConflicts round_result;
    for (int i = 0; i < num_radars; ++i) {
      conflicted[i] = counts[channel[i]] > 1 ? 1 : 0;
      round_result.conflicted_radars += conflicted[i];
    }
    for (const auto& [ch, n] : counts) {
      round_result.conflict_pairs += static_cast<long long>(n) * (n - 1) / 2;
    }
    trajectory.push_back(round_result);
  }
  return trajectory;
}

}  // namespace rim
