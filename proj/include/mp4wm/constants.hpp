#ifndef MP4WM_CONSTANTS_HPP
#define MP4WM_CONSTANTS_HPP

#include <numbers>

namespace mp4wm {

template <typename Real>
inline constexpr Real speed_of_light = Real(299792458);

template <typename Real>
inline constexpr Real two_pi = Real(2) * std::numbers::pi_v<Real>;

/// Ordinary frequency in MHz (quantity/2pi) to angular frequency in rad/s.
template <typename Real>
constexpr Real from_mhz(Real f_mhz) { return two_pi<Real> * f_mhz * Real(1e6); }

/// Angular frequency in rad/s to ordinary frequency in MHz.
template <typename Real>
constexpr Real to_mhz(Real w) { return w / (two_pi<Real> * Real(1e6)); }

}  // namespace mp4wm

#endif
