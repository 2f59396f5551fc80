#include "rim/fmcw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rim/fft.hpp"
#include "rim/units.hpp"

namespace rim {

double ChirpConfig::max_range_m() const { return kSpeedOfLight * tau_max() / 2.0; }

int ChirpConfig::num_samples_total() const {
  return static_cast<int>(std::floor(chirp_duration_s / sample_period_s)) + 1;
}

int ChirpConfig::n_max() const {
  return static_cast<int>(std::floor(tau_max() / sample_period_s));
}

int ChirpConfig::samples_per_chirp() const { return num_samples_total() - n_max(); }

double ChirpConfig::processing_gain() const {
  return static_cast<double>(num_chirps) * samples_per_chirp();
}

double ChirpConfig::unambiguous_velocity_mps() const {
  return wavelength(carrier_hz) / (4.0 * chirp_duration_s);
}

void ChirpConfig::validate() const {
  if (!(carrier_hz > 0.0)) throw std::domain_error("carrier frequency must be positive");
  if (!(sweep_bandwidth_hz > 0.0) || !(chirp_duration_s > 0.0)) {
    throw std::domain_error("chirp slope alpha = B/T must be positive");
  }
  if (interest_bandwidth_hz > sweep_bandwidth_hz) {
    throw std::domain_error("interest bandwidth Bs must not exceed sweep bandwidth B");
  }
  if (tau_max() > chirp_duration_s) {
    throw std::domain_error("tau_max = Bs/alpha must not exceed the chirp duration");
  }
  if (!(sample_period_s > 0.0)) throw std::domain_error("sample period must be positive");
  if (num_chirps < 1) throw std::domain_error("CPI needs at least one chirp");
  if (samples_per_chirp() < 2) {
    throw std::domain_error("sampling window needs at least two samples above n_max");
  }
  if (duty_cycle < 0.0 || duty_cycle > 1.0) {
    throw std::domain_error("duty cycle must lie in [0, 1]");
  }
  if (frame_duration_s > 0.0 &&
      num_chirps * chirp_duration_s > duty_cycle * frame_duration_s * (1.0 + 1e-12)) {
    throw std::domain_error("K T must not exceed duty_cycle * frame duration");
  }
}

ChirpConfig ChirpConfig::with_sample_rate_from_bandwidth(ChirpConfig cfg) {
  cfg.sample_period_s = 1.0 / cfg.interest_bandwidth_hz;
  return cfg;
}

double BeatMatrix::total_energy() const {
  double e = 0.0;
  for (const auto& s : samples) e += std::norm(s);
  return e;
}

double chirp_phase(const ChirpConfig& config, double t_s) {
  if (t_s < 0.0 || t_s > config.chirp_duration_s) {
    throw std::domain_error("time outside the chirp interval [0, T]");
  }
  return kTwoPi * (config.carrier_hz * t_s + 0.5 * config.slope() * t_s * t_s);
}

BeatMatrix synthesize_beat(const ChirpConfig& config,
                           const std::vector<TargetReturn>& targets,
                           const NoiseConfig& noise) {
  config.validate();
  noise.validate();

  struct Echo {
    double fast_freq;   // -alpha tau + fc nu
    double slow_freq;   // fc nu
    std::complex<double> gain;
  };
  std::vector<Echo> echoes;
  echoes.reserve(targets.size());
  for (const auto& tr : targets) {
    tr.target.validate();
    const double tau = 2.0 * tr.target.range_m / kSpeedOfLight;
    if (tau > config.tau_max()) {
      throw std::domain_error("target delay exceeds tau_max (outside ADC range window)");
    }
    const double nu = 2.0 * tr.target.radial_velocity_mps / kSpeedOfLight;
    Echo e;
    e.fast_freq = -config.slope() * tau + config.carrier_hz * nu;
    e.slow_freq = config.carrier_hz * nu;
    e.gain = std::polar(std::sqrt(tr.power_gain),
                        tr.phase_rad + tr.target.reflection_phase_rad);
    echoes.push_back(e);
  }

  BeatMatrix beat;
  beat.config = config;
  const int K = config.num_chirps;
  const int M = config.samples_per_chirp();
  const int n0 = config.n_max();
  beat.samples.assign(static_cast<std::size_t>(K) * M, {0.0, 0.0});

  const double Ts = config.sample_period_s;
  const double T = config.chirp_duration_s;
  for (const auto& e : echoes) {
    for (int k = 0; k < K; ++k) {
      const std::complex<double> slow =
          e.gain * std::polar(1.0, kTwoPi * e.slow_freq * k * T);
      // Per-sample rotation keeps the inner loop multiplicative.
      const std::complex<double> step = std::polar(1.0, kTwoPi * e.fast_freq * Ts);
      std::complex<double> rot = std::polar(1.0, kTwoPi * e.fast_freq * n0 * Ts);
      for (int j = 0; j < M; ++j) {
        beat.at(k, j) += slow * rot;
        rot *= step;
      }
    }
  }

  if (noise.variance_w > 0.0) {
    Rng rng(noise.rng_seed);
    for (auto& s : beat.samples) s += rng.complex_normal(noise.variance_w);
  }
  return beat;
}

namespace {

double window_weight(Window window, int j, int count) {
  if (window == Window::kRectangular) return 1.0;
  // Raised cosine (Hann) taper.
  return 0.5 - 0.5 * std::cos(kTwoPi * j / (count - 1));
}

}  // namespace

RangeDopplerMap range_doppler_map(const BeatMatrix& beat, Window window,
                                  int zero_pad_fast, int zero_pad_slow) {
  const int K = beat.rows();
  const int M = beat.cols();
  if (K < 1 || M < 1 || beat.samples.size() != static_cast<std::size_t>(K) * M) {
    throw std::invalid_argument("malformed beat matrix");
  }
  if (zero_pad_fast < 1 || zero_pad_slow < 1) {
    throw std::invalid_argument("zero-pad factors must be >= 1");
  }
  const int nfast = M * zero_pad_fast;
  const int nslow = K * zero_pad_slow;

  // Fast time: positive-exponent transform matches the e^{+j2pi alpha tau n Ts}
  // steering, so delay bin m corresponds to tau = m / (alpha nfast Ts).
  std::vector<std::vector<std::complex<double>>> stage(K);
  for (int k = 0; k < K; ++k) {
    std::vector<std::complex<double>> row(beat.samples.begin() + static_cast<std::size_t>(k) * M,
                                          beat.samples.begin() + static_cast<std::size_t>(k + 1) * M);
    for (int j = 0; j < M; ++j) row[j] *= window_weight(window, j, M);
    stage[k] = fft::inverse_padded(row, nfast);
  }

  RangeDopplerMap map;
  map.config = beat.config;
  map.num_tau = nfast;
  map.num_nu = nslow;
  map.zero_pad_fast = zero_pad_fast;
  map.zero_pad_slow = zero_pad_slow;
  map.power.assign(static_cast<std::size_t>(nfast) * nslow, 0.0);

  // Slow time: negative-exponent transform matches e^{-j2pi fc nu k T};
  // the spectrum is then centered so the nu axis is ascending.
  std::vector<std::complex<double>> col(K);
  for (int m = 0; m < nfast; ++m) {
    for (int k = 0; k < K; ++k) col[k] = stage[k][m] * window_weight(window, k, K);
    auto spec = fft::forward_padded(col, nslow);
    for (int q = 0; q < nslow; ++q) {
      const int centered = (q + nslow / 2) % nslow;   // q - nslow/2 .. nslow/2 - 1
      map.power[static_cast<std::size_t>(centered) * nfast + m] = std::norm(spec[q]);
    }
  }

  const double alpha = beat.config.slope();
  const double Ts = beat.config.sample_period_s;
  const double T = beat.config.chirp_duration_s;
  const double fc = beat.config.carrier_hz;
  map.tau_axis.resize(nfast);
  for (int m = 0; m < nfast; ++m) map.tau_axis[m] = m / (alpha * nfast * Ts);
  map.nu_axis.resize(nslow);
  for (int q = 0; q < nslow; ++q) {
    map.nu_axis[q] = (q - nslow / 2) / (fc * nslow * T);
  }
  return map;
}

namespace {

// Offset of the parabola vertex through log-power triples; clamped to
// half a bin so pathological triples cannot throw the peak off.
double parabolic_offset(double pm, double p0, double pp) {
  const double eps = 1e-300;
  const double a = std::log(std::max(pm, eps));
  const double b = std::log(std::max(p0, eps));
  const double c = std::log(std::max(pp, eps));
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0 || !std::isfinite(denom)) return 0.0;
  return std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
}

}  // namespace

MapPeak map_peak(const RangeDopplerMap& map) {
  const auto it = std::max_element(map.power.begin(), map.power.end());
  const std::size_t idx = static_cast<std::size_t>(it - map.power.begin());
  MapPeak peak;
  peak.nu_idx = static_cast<int>(idx / map.num_tau);
  peak.tau_idx = static_cast<int>(idx % map.num_tau);
  peak.power = *it;

  const int nt = map.num_tau;
  const int nn = map.num_nu;
  const auto p = [&](int q, int m) {
    return map.at(((q % nn) + nn) % nn, ((m % nt) + nt) % nt);
  };
  const double dt = parabolic_offset(p(peak.nu_idx, peak.tau_idx - 1), peak.power,
                                     p(peak.nu_idx, peak.tau_idx + 1));
  const double dn = parabolic_offset(p(peak.nu_idx - 1, peak.tau_idx), peak.power,
                                     p(peak.nu_idx + 1, peak.tau_idx));
  peak.tau_s = (peak.tau_idx + dt) * map.tau_bin_width();
  peak.nu = map.nu_axis.front() + (peak.nu_idx + dn) * map.nu_bin_width();
  return peak;
}

std::vector<Detection> cfar_detect(const RangeDopplerMap& map, const CfarConfig& cfar) {
  const int nt = map.num_tau;
  const int nn = map.num_nu;
  if (cfar.num_training < 1 || cfar.num_guard < 0) {
    throw std::invalid_argument("CFAR needs at least one training cell per side");
  }
  const int outer = cfar.num_training + cfar.num_guard;
  if (2 * outer + 1 > nt || 2 * outer + 1 > nn) {
    throw std::invalid_argument("CFAR window does not fit inside the map");
  }
  if (!(cfar.target_pfa > 0.0) || cfar.target_pfa >= 1.0) {
    throw std::invalid_argument("target false-alarm rate must lie in (0, 1)");
  }

  const int guard_span = 2 * cfar.num_guard + 1;
  const int outer_span = 2 * outer + 1;
  const int n_train = outer_span * outer_span - guard_span * guard_span;
  const double factor =
      n_train * (std::pow(cfar.target_pfa, -1.0 / n_train) - 1.0);

  // Numerical-dust floor: far below any physical dynamic range but above
  // round-off residue of a noiseless synthesis.
  const double global_max = *std::max_element(map.power.begin(), map.power.end());
  const double abs_floor = global_max * 1e-12;

  const auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
  std::vector<char> hit(map.power.size(), 0);
  for (int q = 0; q < nn; ++q) {
    for (int m = 0; m < nt; ++m) {
      const double cell = map.at(q, m);
      if (cell <= abs_floor) continue;
      double acc = 0.0;
      for (int dq = -outer; dq <= outer; ++dq) {
        for (int dm = -outer; dm <= outer; ++dm) {
          if (std::abs(dq) <= cfar.num_guard && std::abs(dm) <= cfar.num_guard) continue;
          acc += map.at(wrap(q + dq, nn), wrap(m + dm, nt));
        }
      }
      const double threshold = factor * acc / n_train;
      if (cell > threshold) hit[static_cast<std::size_t>(q) * nt + m] = 1;
    }
  }

  // Flood-fill 8-connected crossings into clusters.
  struct Cluster {
    int peak_q = 0, peak_m = 0;
    double peak_power = 0.0;
  };
  std::vector<Cluster> clusters;
  std::vector<char> seen(hit.size(), 0);
  std::vector<std::pair<int, int>> stack;
  for (int q0 = 0; q0 < nn; ++q0) {
    for (int m0 = 0; m0 < nt; ++m0) {
      const std::size_t start = static_cast<std::size_t>(q0) * nt + m0;
      if (!hit[start] || seen[start]) continue;
      Cluster cl;
      stack.clear();
      stack.emplace_back(q0, m0);
      seen[start] = 1;
      while (!stack.empty()) {
        auto [q, m] = stack.back();
        stack.pop_back();
        const double p = map.at(q, m);
        if (p > cl.peak_power) {
          cl.peak_power = p;
          cl.peak_q = q;
          cl.peak_m = m;
        }
        for (int dq = -1; dq <= 1; ++dq) {
          for (int dm = -1; dm <= 1; ++dm) {
            const int qq = wrap(q + dq, nn);
            const int mm = wrap(m + dm, nt);
            const std::size_t id = static_cast<std::size_t>(qq) * nt + mm;
            if (hit[id] && !seen[id]) {
              seen[id] = 1;
              stack.emplace_back(qq, mm);
            }
          }
        }
      }
      clusters.push_back(cl);
    }
  }

  // Merge clusters sitting within the sidelobe neighborhood of a stronger one.
  const int merge_radius =
      cfar.merge_radius >= 0 ? cfar.merge_radius
                             : 3 * std::max(map.zero_pad_fast, map.zero_pad_slow);
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.peak_power > b.peak_power; });
  const auto tor_dist = [&wrap](int a, int b, int n) {
    const int d = wrap(a - b, n);
    return std::min(d, n - d);
  };
  std::vector<Cluster> kept;
  for (const auto& cl : clusters) {
    bool absorbed = false;
    for (const auto& k : kept) {
      if (tor_dist(cl.peak_q, k.peak_q, nn) <= merge_radius &&
          tor_dist(cl.peak_m, k.peak_m, nt) <= merge_radius) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) kept.push_back(cl);
  }

  std::vector<Detection> detections;
  detections.reserve(kept.size());
  const auto p = [&](int q, int m) { return map.at(wrap(q, nn), wrap(m, nt)); };
  for (const auto& cl : kept) {
    const double dt = parabolic_offset(p(cl.peak_q, cl.peak_m - 1), cl.peak_power,
                                       p(cl.peak_q, cl.peak_m + 1));
    const double dn = parabolic_offset(p(cl.peak_q - 1, cl.peak_m), cl.peak_power,
                                       p(cl.peak_q + 1, cl.peak_m));
    Detection det;
    det.tau_hat_s = (cl.peak_m + dt) * map.tau_bin_width();
    det.nu_hat = map.nu_axis.front() + (cl.peak_q + dn) * map.nu_bin_width();
    det.peak_power = cl.peak_power;
    detections.push_back(correct_coupling(det, map.config));
  }
  std::sort(detections.begin(), detections.end(),
            [](const Detection& a, const Detection& b) { return a.peak_power > b.peak_power; });
  return detections;
}

Detection correct_coupling(Detection det, const ChirpConfig& config) {
  det.corrected_range_m =
      kSpeedOfLight * (det.tau_hat_s + config.carrier_hz * det.nu_hat / config.slope()) / 2.0;
  det.velocity_mps = kSpeedOfLight * det.nu_hat / 2.0;
  return det;
}

Resolution resolution(const ChirpConfig& config) {
  Resolution r;
  r.delta_range_m = kSpeedOfLight / (2.0 * config.sweep_bandwidth_hz);
  r.delta_velocity_mps = wavelength(config.carrier_hz) /
                         (2.0 * config.num_chirps * config.chirp_duration_s);
  return r;
}

}  // namespace rim
