#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace rim {

/// Composite 7-point Gauss-Legendre quadrature of a complex-valued
/// integrand over [a, b] with `panels` equal panels. Panel counts should
/// scale with the number of oscillations of the integrand.
template <typename F>
std::complex<double> integrate_gl7(F&& f, double a, double b, std::size_t panels) {
  static constexpr std::array<double, 7> kNodes = {
      -0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
      0.0,
      0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
  static constexpr std::array<double, 7> kWeights = {
      0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
      0.4179591836734694,
      0.3818300505051189, 0.2797053914892767, 0.1294849661688697};
  if (panels == 0) panels = 1;
  const double h = (b - a) / static_cast<double>(panels);
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    std::complex<double> panel{0.0, 0.0};
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      panel += kWeights[i] * f(mid + 0.5 * h * kNodes[i]);
    }
    sum += panel * (0.5 * h);
  }
  return sum;
}

}  // namespace rim
