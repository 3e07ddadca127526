#ifndef MP4WM_PARAMS_HPP
#define MP4WM_PARAMS_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mp4wm/constants.hpp"
#include "mp4wm/errors.hpp"

namespace mp4wm {

/// Physical inputs of the double-lambda medium. Every frequency and rate is
/// angular (rad/s); the pump Rabi frequency is shared by both lambdas.
template <typename Real>
struct BasicMediumParams {
  Real omega_rabi = 0;        ///< peak pump Rabi frequency
  Real delta_raman = 0;       ///< upper-lambda (Raman) detuning
  Real delta_one = 0;         ///< lower-lambda one-photon detuning
  Real delta_two_photon = 0;  ///< bare two-photon detuning
  Real gamma = 0;             ///< atomic linewidth
  Real gamma_c = 0;           ///< ground-state decoherence rate
  Real coupling_g2n = 0;      ///< g^2 N in rad^2/s^2
  Real cell_length = 0;       ///< propagation distance in m

  template <typename Other>
  BasicMediumParams<Other> cast() const {
    return {Other(omega_rabi),       Other(delta_raman), Other(delta_one),
            Other(delta_two_photon), Other(gamma),       Other(gamma_c),
            Other(coupling_g2n),     Other(cell_length)};
  }
};

using MediumParams = BasicMediumParams<double>;

enum class DispersionMode { constant, full };

template <typename Real>
struct BasicDerivedCoefficients {
  Real eta0 = 0;             ///< slow-down factor c/v_g = 4 g^2 N / Omega^2
  Real delta_r = 0;          ///< Raman bandwidth Omega^2 / 4 Delta
  Real alpha0 = 0;           ///< cross coupling eta0 * delta_r
  Real light_shift = 0;      ///< Omega^2 / 4 Delta
  Real delta_tilde = 0;      ///< light-shifted two-photon detuning
  Real v_group = 0;          ///< bare probe group velocity c / eta0
  Real saturation_rabi = 0;  ///< 2 sqrt(Delta gamma)
};

using DerivedCoefficients = BasicDerivedCoefficients<double>;

/// g^2 N giving a prescribed slow-down factor at the given Rabi frequency.
template <typename Real>
Real coupling_from_eta0(Real eta0, Real omega_rabi) {
  return eta0 * omega_rabi * omega_rabi / Real(4);
}

/// g^2 N from microscopic quantities: g^2 = c k p^2 / (2 eps0 hbar), times
/// the atomic density. SI units throughout.
template <typename Real>
Real coupling_from_microscopic(Real wavenumber, Real dipole_moment, Real density,
                               Real epsilon0 = Real(8.8541878128e-12),
                               Real hbar = Real(1.054571817e-34)) {
  const Real g2 = speed_of_light<Real> * wavenumber * dipole_moment * dipole_moment /
                  (Real(2) * epsilon0 * hbar);
  return g2 * density;
}

template <typename Real>
void validate(const BasicMediumParams<Real>& p) {
  using std::isfinite;
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid medium parameter: ") + what);
  };
  require(isfinite(p.omega_rabi) && p.omega_rabi > 0, "omega_rabi must be finite and > 0");
  require(isfinite(p.delta_raman) && p.delta_raman > 0, "delta_raman must be finite and > 0");
  require(isfinite(p.delta_one), "delta_one must be finite");
  require(isfinite(p.delta_two_photon), "delta_two_photon must be finite");
  require(isfinite(p.gamma) && p.gamma > 0, "gamma must be finite and > 0");
  require(isfinite(p.gamma_c) && p.gamma_c >= 0, "gamma_c must be finite and >= 0");
  require(isfinite(p.coupling_g2n) && p.coupling_g2n > 0, "coupling_g2n must be finite and > 0");
  require(isfinite(p.cell_length) && p.cell_length > 0, "cell_length must be finite and > 0");
}

/// Ratio above which "a >> b" is considered satisfied by validity_warnings.
inline constexpr double much_greater_ratio = 10.0;

/// Human-readable notes for every asymptotic limit of the linear
/// coupled-mode model that the parameters do not satisfy. Empty when the
/// model is in its ideal regime. These are advisory only.
template <typename Real>
std::vector<std::string> validity_warnings(const BasicMediumParams<Real>& p) {
  using std::abs;
  std::vector<std::string> out;
  const Real k = Real(much_greater_ratio);
  if (p.delta_one != 0) {
    const Real lower_shift = p.omega_rabi * p.omega_rabi / (Real(4) * abs(p.delta_one));
    if (!(lower_shift > k * abs(p.delta_two_photon)))
      out.emplace_back("Omega^2/4Delta_1 is not >> |delta|");
    if (!(lower_shift > k * p.gamma_c))
      out.emplace_back("Omega^2/4Delta_1 is not >> gamma_c");
  }
  if (!(p.delta_raman > k * abs(p.delta_one)))
    out.emplace_back("Delta is not >> Delta_1");
  if (!(p.delta_raman > k * p.gamma))
    out.emplace_back("Delta is not >> gamma");
  const Real delta_r = p.omega_rabi * p.omega_rabi / (Real(4) * p.delta_raman);
  if (!(Real(2) * delta_r > k * p.gamma_c))
    out.emplace_back("gamma_c is not << 2 Delta_R");
  return out;
}

template <typename Real>
BasicDerivedCoefficients<Real> derive_coefficients(const BasicMediumParams<Real>& p) {
  validate(p);
  using std::sqrt;
  const Real omega2 = p.omega_rabi * p.omega_rabi;
  BasicDerivedCoefficients<Real> d;
  d.eta0 = Real(4) * p.coupling_g2n / omega2;
  d.delta_r = omega2 / (Real(4) * p.delta_raman);
  d.light_shift = d.delta_r;
  d.alpha0 = d.eta0 * d.delta_r;
  d.delta_tilde = p.delta_two_photon - d.light_shift;
  d.v_group = speed_of_light<Real> / d.eta0;
  d.saturation_rabi = Real(2) * sqrt(p.delta_raman * p.gamma);
  return d;
}

/// Slow-down factor at envelope frequency omega. The full form is
/// g^2 N / [Omega^2/4 + Delta_1 (delta + omega + i gamma_c)]; constant mode
/// returns its Delta_1 -> 0 limit 4 g^2 N / Omega^2.
template <typename Real>
std::complex<Real> eta_of_omega(const BasicMediumParams<Real>& p, Real omega,
                                DispersionMode mode = DispersionMode::full) {
  const Real quarter_omega2 = p.omega_rabi * p.omega_rabi / Real(4);
  if (mode == DispersionMode::constant) return {p.coupling_g2n / quarter_omega2, Real(0)};
  const std::complex<Real> denom{quarter_omega2 + p.delta_one * (p.delta_two_photon + omega),
                                 p.delta_one * p.gamma_c};
  return std::complex<Real>(p.coupling_g2n) / denom;
}

}  // namespace mp4wm

#endif
