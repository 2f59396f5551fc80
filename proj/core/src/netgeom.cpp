#include "rim/netgeom.hpp"

#include <cmath>
#include <stdexcept>

#include "rim/interference.hpp"
#include "rim/units.hpp"

namespace rim {

double HighwayScenario::theta_p() const { return std::min(fov_forward_rad, fov_backward_rad); }

double HighwayScenario::f_probability() const {
  return interference_probability(duty_cycle, radar.slope(), radar.tau_max(),
                                  radar.sweep_bandwidth_hz);
}

std::vector<int> HighwayScenario::lane_offsets() const {
  std::vector<int> offsets;
  offsets.reserve(num_lanes);
  for (int lane = 0; lane < num_lanes; ++lane) offsets.push_back(lane - victim_lane);
  return offsets;
}

bool HighwayScenario::is_same_direction(int lane_offset) const {
  const int lane = victim_lane + lane_offset;
  return lane < same_direction_lanes;
}

void HighwayScenario::validate() const {
  if (num_lanes < 1) throw std::domain_error("highway needs at least one lane");
  if (victim_lane < 0 || victim_lane >= num_lanes) {
    throw std::domain_error("victim lane index out of range");
  }
  if (same_direction_lanes < 1 || same_direction_lanes > num_lanes) {
    throw std::domain_error("same-direction lane count out of range");
  }
  if (victim_lane >= same_direction_lanes) {
    throw std::domain_error("victim lane must belong to the same-direction group");
  }
  if (!(lane_spacing_m > 0.0)) throw std::domain_error("lane spacing must be positive");
  if (!(mean_spacing_m > 0.0)) throw std::domain_error("mean vehicle spacing must be positive");
  if (!(fov_forward_rad > 0.0) || fov_forward_rad >= kPi ||
      !(fov_backward_rad > 0.0) || fov_backward_rad >= kPi) {
    throw std::domain_error("fields of view must lie in (0, pi)");
  }
  radar.validate();
  link.validate();
}

std::vector<double> sample_ppp_lane(double mean_spacing_m, double extent_m, Rng& rng) {
  if (!(extent_m > 0.0)) throw std::domain_error("PPP extent must be positive");
  if (!(mean_spacing_m > 0.0)) throw std::domain_error("PPP mean spacing must be positive");
  const long count = rng.poisson(extent_m / mean_spacing_m);
  std::vector<double> positions(static_cast<std::size_t>(count));
  for (auto& x : positions) x = rng.uniform(0.0, extent_m);
  return positions;
}

namespace {

double friis_prefactor(const HighwayScenario& scn) {
  const double lambda = scn.link.wavelength_m;
  return scn.link.tx_power_w * scn.link.combined_gain * lambda * lambda /
         std::pow(4.0 * kPi, 2.0);
}

/// One-sided expected lane interference through an effective mutual field
/// of view `theta`: interferers from |l| R / tan(theta/2) outward.
double one_sided_expected(const HighwayScenario& scn, int lane_offset, double theta) {
  const double f = scn.f_probability();
  const double c0 = friis_prefactor(scn);
  if (lane_offset == 0) {
    return c0 * f / (scn.mean_spacing_m * scn.mean_spacing_m);
  }
  const double l_r = std::abs(lane_offset) * scn.lane_spacing_m;
  return c0 * (f / scn.mean_spacing_m) * (theta / 2.0) / l_r;
}

}  // namespace

double expected_lane_interference(const HighwayScenario& scn, int lane_offset) {
  scn.validate();
  return one_sided_expected(scn, lane_offset, scn.theta_p());
}

double monte_carlo_aggregate(const HighwayScenario& scn, int lane_offset,
                             std::size_t trials, std::uint64_t seed) {
  scn.validate();
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  const double theta = scn.theta_p();
  const double f = scn.f_probability();
  const double c0 = friis_prefactor(scn);
  const double l_r = std::abs(lane_offset) * scn.lane_spacing_m;

  // Start of the visible road interval, and a truncation point beyond
  // which the tail integral contributes less than 0.1%.
  double x_start, x_trunc;
  if (lane_offset == 0) {
    x_start = scn.mean_spacing_m;
    x_trunc = 1000.0 * scn.mean_spacing_m;
  } else {
    x_start = l_r / std::tan(theta / 2.0);
    x_trunc = l_r / std::tan(5e-4 * theta);
  }

  Rng rng(seed);
  double acc = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto positions = sample_ppp_lane(scn.mean_spacing_m, x_trunc - x_start, rng);
    double trial = 0.0;
    for (double p : positions) {
      const double x = x_start + p;
      const double r2 = l_r * l_r + x * x;
      trial += c0 * f / r2;
    }
    acc += trial;
  }
  return acc / static_cast<double>(trials);
}

std::vector<SinrPoint> sinr_curve(const HighwayScenario& scn,
                                  const std::vector<double>& spacing_grid_m) {
  scn.validate();
  if (spacing_grid_m.empty()) throw std::invalid_argument("spacing grid must be non-empty");

  const double signal = target_power_gain(scn.link, scn.target);
  std::vector<SinrPoint> curve;
  curve.reserve(spacing_grid_m.size());
  for (double delta : spacing_grid_m) {
    HighwayScenario s = scn;
    s.mean_spacing_m = delta;
    SinrPoint pt;
    pt.mean_spacing_m = delta;
    pt.signal_w = signal;
    pt.noise_w = scn.noise_power_w;
    for (int offset : s.lane_offsets()) {
      double lane_power = 0.0;
      if (offset == 0) {
        // Own lane: road visible ahead and behind from the safety margin.
        lane_power = 2.0 * one_sided_expected(s, 0, s.theta_p());
      } else if (s.is_same_direction(offset)) {
        // Passing traffic couples front-to-rear radar both road sides:
        // the narrower of the two fields of view binds.
        lane_power = 2.0 * one_sided_expected(s, offset, s.theta_p());
      } else {
        // Oncoming traffic couples front-to-front ahead and rear-to-rear
        // behind.
        lane_power = one_sided_expected(s, offset, s.fov_forward_rad) +
                     one_sided_expected(s, offset, s.fov_backward_rad);
      }
      pt.interference_w += lane_power;
      if (s.is_same_direction(offset)) {
        pt.passing_w += lane_power;
      } else {
        pt.oncoming_w += lane_power;
      }
    }
    pt.sinr = pt.signal_w / (pt.noise_w + pt.interference_w);
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace rim
