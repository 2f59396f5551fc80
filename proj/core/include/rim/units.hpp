#pragma once

#include <cmath>

namespace rim {

inline constexpr double kSpeedOfLight = 299'792'458.0;     // m/s
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K
inline constexpr double kReferenceTemperature = 290.0;     // K
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watts_to_dbm(double w) { return linear_to_db(w) + 30.0; }
inline double dbi_to_linear(double dbi) { return db_to_linear(dbi); }

inline double wavelength(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

/// Thermal noise power kT0*bandwidth scaled by a linear noise factor.
inline double thermal_noise_watts(double bandwidth_hz, double noise_figure_db) {
  return kBoltzmann * kReferenceTemperature * bandwidth_hz * db_to_linear(noise_figure_db);
}

}  // namespace rim
