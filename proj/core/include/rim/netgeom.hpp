#pragma once

#include <cstdint>
#include <vector>

#include "rim/fmcw.hpp"
#include "rim/scenario.hpp"

namespace rim {

/// Multi-lane highway around a victim radar. Vehicles on each lane form a
/// one-dimensional Poisson point process with intensity 1/mean_spacing.
/// Lanes are indexed by signed offset from the victim's lane; lanes with
/// offsets in `same_direction_offsets` carry traffic travelling with the
/// victim ("passing" traffic, including the victim's own lane at offset
/// 0), the remaining lanes carry oncoming traffic.
struct HighwayScenario {
  int num_lanes = 6;
  int victim_lane = 2;              // 0-based index within [0, num_lanes)
  int same_direction_lanes = 3;     // lanes 0 .. same_direction_lanes-1
  double lane_spacing_m = 4.0;      // R
  double mean_spacing_m = 50.0;     // Delta
  double fov_forward_rad = 0.0;
  double fov_backward_rad = 0.0;
  ChirpConfig radar;
  LinkBudget link;
  Target target;                    // reference target for the SINR curve
  double noise_power_w = 0.0;
  double duty_cycle = 0.2;

  /// theta_p = min(forward, backward) field of view, as used by the
  /// closed-form lane interference.
  double theta_p() const;
  /// Interference probability f = u alpha tau_max / B of one interferer.
  double f_probability() const;
  /// Signed lane offsets visible from the victim lane.
  std::vector<int> lane_offsets() const;
  bool is_same_direction(int lane_offset) const;
  void validate() const;
};

/// Poisson point process on [0, extent): Poisson-distributed count with
/// mean extent/spacing, positions i.i.d. uniform.
std::vector<double> sample_ppp_lane(double mean_spacing_m, double extent_m, Rng& rng);

/// Closed-form expected aggregate interference power from lane offset l:
///   P Gtrx lambda^2/(4 pi)^2 * (f/Delta) * theta_p/(2 |l| R)   for l != 0,
///   P Gtrx lambda^2/(4 pi)^2 * f / Delta^2                     for l == 0
/// (one-sided in road position; the own-lane form integrates from the
/// safety margin Delta outward).
double expected_lane_interference(const HighwayScenario& scn, int lane_offset);

/// Monte-Carlo estimate of the same expectation: PPP draws over the road
/// interval starting at |l| R / tan(theta_p / 2) (Delta for the own lane),
/// truncated where the tail contributes less than 0.1%.
double monte_carlo_aggregate(const HighwayScenario& scn, int lane_offset,
                             std::size_t trials, std::uint64_t seed);

struct SinrPoint {
  double mean_spacing_m = 0.0;
  double signal_w = 0.0;
  double interference_w = 0.0;      // all lanes, both travel directions
  double noise_w = 0.0;
  double sinr = 0.0;
  double passing_w = 0.0;           // same-direction lanes incl. own lane
  double oncoming_w = 0.0;
};

/// Expected SINR against mean vehicle spacing. Per lane both road sides
/// are counted, ahead through the forward field of view and behind
/// through the backward one.
std::vector<SinrPoint> sinr_curve(const HighwayScenario& scn,
                                  const std::vector<double>& spacing_grid_m);

}  // namespace rim
