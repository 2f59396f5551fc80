#pragma once

#include <cstdint>

namespace rim {

/// Point scatterer at radial distance `range_m`, receding at
/// `radial_velocity_mps` (> 0 means increasing range), with radar cross
/// section `rcs_m2`. The reflection phase is a free model parameter and
/// defaults to zero.
struct Target {
  double range_m = 0.0;
  double radial_velocity_mps = 0.0;
  double rcs_m2 = 0.0;
  double reflection_phase_rad = 0.0;

  void validate() const;
};

/// Transmit power and combined TX+RX antenna gain, kept in linear units.
/// dBm/dBi conversion happens once, at the configuration boundary.
struct LinkBudget {
  double tx_power_w = 0.0;
  double combined_gain = 1.0;   // linear, TX gain times RX gain
  double wavelength_m = 0.0;

  static LinkBudget from_db(double tx_power_dbm, double combined_gain_dbi,
                            double carrier_hz);
  void validate() const;
};

/// Complex-sample noise variance (watts) plus the RNG seed for the draws.
/// This sigma^2 is the measurement-noise power; it is unrelated to the
/// radar cross section sigma of Target.
struct NoiseConfig {
  double variance_w = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Two-way radar-equation power gain |gamma|^2 of a target return:
/// P G sigma lambda^2 / ((4 pi)^3 d^4).
double target_power_gain(const LinkBudget& link, const Target& target);

/// One-way Friis power gain |gamma_int|^2 of a direct interferer at
/// distance r: P G lambda^2 / ((4 pi)^2 r^2).
double interferer_power_gain(const LinkBudget& link, double distance_m);

/// Rectangular field-of-view gain approximation 4 pi / (phi theta) for
/// elevation beamwidth phi and azimuth beamwidth theta (radians).
double fov_antenna_gain(double elev_beamwidth_rad, double azim_beamwidth_rad);

}  // namespace rim
