#include "rim/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "rim/units.hpp"

namespace rim {

void Target::validate() const {
  if (!(range_m > 0.0)) throw std::domain_error("target range must be positive");
  if (rcs_m2 < 0.0) throw std::domain_error("target RCS must be non-negative");
}

LinkBudget LinkBudget::from_db(double tx_power_dbm, double combined_gain_dbi,
                               double carrier_hz) {
  LinkBudget lb;
  lb.tx_power_w = dbm_to_watts(tx_power_dbm);
  lb.combined_gain = dbi_to_linear(combined_gain_dbi);
  lb.wavelength_m = wavelength(carrier_hz);
  return lb;
}

void LinkBudget::validate() const {
  if (!(tx_power_w > 0.0)) throw std::domain_error("tx power must be positive");
  if (combined_gain < 1.0) throw std::domain_error("combined antenna gain must be >= 1");
  if (!(wavelength_m > 0.0)) throw std::domain_error("wavelength must be positive");
}

void NoiseConfig::validate() const {
  if (variance_w < 0.0) throw std::domain_error("noise variance must be non-negative");
}

double target_power_gain(const LinkBudget& link, const Target& target) {
  if (!(target.range_m > 0.0)) {
    throw std::domain_error("target range must be positive");
  }
  const double four_pi_cubed = std::pow(4.0 * kPi, 3.0);
  const double d4 = std::pow(target.range_m, 4.0);
  return link.tx_power_w * link.combined_gain * target.rcs_m2 *
         link.wavelength_m * link.wavelength_m / (four_pi_cubed * d4);
}

double interferer_power_gain(const LinkBudget& link, double distance_m) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("interferer distance must be positive");
  }
  const double four_pi_sq = std::pow(4.0 * kPi, 2.0);
  return link.tx_power_w * link.combined_gain * link.wavelength_m *
         link.wavelength_m / (four_pi_sq * distance_m * distance_m);
}

double fov_antenna_gain(double elev_beamwidth_rad, double azim_beamwidth_rad) {
  if (!(elev_beamwidth_rad > 0.0) || elev_beamwidth_rad > kTwoPi ||
      !(azim_beamwidth_rad > 0.0) || azim_beamwidth_rad > kTwoPi) {
    throw std::domain_error("beamwidths must be in (0, 2 pi]");
  }
  return 4.0 * kPi / (elev_beamwidth_rad * azim_beamwidth_rad);
}

}  // namespace rim
