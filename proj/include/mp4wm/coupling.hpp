#ifndef MP4WM_COUPLING_HPP
#define MP4WM_COUPLING_HPP

#include <cmath>
#include <complex>

#include <Eigen/Core>

#include "mp4wm/constants.hpp"
#include "mp4wm/errors.hpp"
#include "mp4wm/params.hpp"

namespace mp4wm {

/// Per-frequency coefficients of the coupled probe/conjugate equations.
template <typename Real>
struct BasicCouplingCoefficients {
  using Complex = std::complex<Real>;
  Real omega = 0;
  Complex eta;    ///< slow-down factor
  Complex sigma;  ///< (eta/2)(delta_tilde + omega + i gamma_c)
  Complex alpha;  ///< eta * Delta_R
  Complex xi;     ///< principal sqrt(alpha^2 - sigma^2)
};

using CouplingCoefficients = BasicCouplingCoefficients<double>;

/// Maps (E_p(w), E_c*(w)) at the cell entrance to the same pair at z.
template <typename Real>
using BasicTransferMatrix = Eigen::Matrix<std::complex<Real>, 2, 2>;

using TransferMatrix = BasicTransferMatrix<double>;

/// `exact` keeps the vacuum transit term; `relative` drops it so that delays
/// are measured against a vacuum reference pulse. `paper` is the large-eta
/// closed form, which coincides with `relative`.
enum class PropagationMode { exact, paper, relative };

template <typename Real>
BasicCouplingCoefficients<Real> coefficients_at(const BasicMediumParams<Real>& p, Real omega,
                                                DispersionMode mode = DispersionMode::constant) {
  using Complex = std::complex<Real>;
  BasicCouplingCoefficients<Real> k;
  const Real delta_r = p.omega_rabi * p.omega_rabi / (Real(4) * p.delta_raman);
  const Real delta_tilde = p.delta_two_photon - delta_r;
  k.omega = omega;
  k.eta = eta_of_omega(p, omega, mode);
  k.sigma = k.eta / Real(2) * Complex(delta_tilde + omega, p.gamma_c);
  k.alpha = k.eta * delta_r;
  k.xi = std::sqrt(k.alpha * k.alpha - k.sigma * k.sigma);
  return k;
}

/// Generator A of c dE/dz = A E for the pair (E_p, E_c*) at one frequency,
/// with the e^{-i w t} envelope convention.
template <typename Real>
BasicTransferMatrix<Real> generator_matrix(const BasicCouplingCoefficients<Real>& k,
                                           PropagationMode mode) {
  using Complex = std::complex<Real>;
  const Complex i{0, 1};
  BasicTransferMatrix<Real> a;
  a << Real(2) * i * k.sigma, i * k.alpha,
       -i * k.alpha, Complex(0);
  if (mode == PropagationMode::exact) a += i * k.omega * BasicTransferMatrix<Real>::Identity();
  return a;
}

/// |xi z/c| below which sinh(x)/x is replaced by its series.
inline constexpr double small_argument = 1e-6;

template <typename Real>
BasicTransferMatrix<Real> transfer_matrix(const BasicCouplingCoefficients<Real>& k, Real z,
                                          PropagationMode mode = PropagationMode::relative) {
  using Complex = std::complex<Real>;
  const Complex i{0, 1};
  const Real zc = z / speed_of_light<Real>;
  const Complex x = k.xi * zc;
  const Complex ch = std::cosh(x);
  // sinh(xi z/c)/xi, even in xi so independent of the square-root branch
  const Complex sh_over_xi = std::abs(x) < Real(small_argument)
                                 ? zc * (Real(1) + x * x / Real(6))
                                 : zc * std::sinh(x) / x;
  const Real vacuum = mode == PropagationMode::exact ? k.omega : Real(0);
  const Complex phase = std::exp(i * (vacuum + k.sigma) * zc);

  BasicTransferMatrix<Real> m;
  m << ch + i * k.sigma * sh_over_xi, i * k.alpha * sh_over_xi,
       -i * k.alpha * sh_over_xi, ch - i * k.sigma * sh_over_xi;
  return phase * m;
}

template <typename Real>
BasicTransferMatrix<Real> transfer_matrix(const BasicMediumParams<Real>& p, Real omega, Real z,
                                          PropagationMode mode = PropagationMode::relative,
                                          DispersionMode dispersion = DispersionMode::constant) {
  return transfer_matrix(coefficients_at(p, omega, dispersion), z, mode);
}

/// Probe intensity gain at delta_tilde = 0, omega = 0 from the closed form:
/// e^{-eta gc z/c} [cosh(xi z/c) - (eta gc / 2 xi) sinh(xi z/c)]^2.
template <typename Real>
Real peak_probe_gain(Real eta, Real xi, Real gamma_c, Real z) {
  const Real zc = z / speed_of_light<Real>;
  const Real loss_ratio = eta * gamma_c / (Real(2) * xi);
  const Real amp = std::cosh(xi * zc) - loss_ratio * std::sinh(xi * zc);
  return std::exp(-eta * gamma_c * zc) * amp * amp;
}

template <typename Real>
struct BasicAnalyticDelays {
  Real tau = 0;                ///< common delay eta z / 2c
  Real dtau_low_gain = 0;      ///< differential delay to first order in z
  Real dtau_locked = 0;        ///< large-gain differential delay eta / (2 xi - eta gc)
  Real linear_gain_coeff = 0;  ///< (xi - eta gc / 2) / c, per metre
  Real peak_gain = 0;          ///< probe intensity gain at the resonance
  Real loss_ratio = 0;         ///< eta gc / 2 xi
  Real eta = 0;
  Real xi = 0;
};

using AnalyticDelays = BasicAnalyticDelays<double>;

/// Analytic delays and gain at the light-shifted resonance (delta_tilde = 0,
/// omega = 0) with the constant slow-down factor.
template <typename Real>
BasicAnalyticDelays<Real> analytic_delays(const BasicMediumParams<Real>& p, Real z) {
  validate(p);
  if (!(z >= 0)) throw ConfigError("analytic_delays: z must be >= 0");
  BasicMediumParams<Real> at_resonance = p;
  at_resonance.delta_two_photon = p.omega_rabi * p.omega_rabi / (Real(4) * p.delta_raman);
  const auto k = coefficients_at(at_resonance, Real(0), DispersionMode::constant);
  const Real eta = k.eta.real();
  const Real xi = k.xi.real();
  const Real c = speed_of_light<Real>;
  if (!(Real(2) * xi > eta * p.gamma_c))
    throw NumericalError("analytic_delays: locked delay undefined, 2 xi <= eta gamma_c");

  BasicAnalyticDelays<Real> d;
  d.eta = eta;
  d.xi = xi;
  d.tau = eta * z / (Real(2) * c);
  d.dtau_low_gain = d.tau;
  d.dtau_locked = eta / (Real(2) * xi - eta * p.gamma_c);
  d.linear_gain_coeff = (xi - eta * p.gamma_c / Real(2)) / c;
  d.loss_ratio = eta * p.gamma_c / (Real(2) * xi);
  d.peak_gain = peak_probe_gain(eta, xi, p.gamma_c, z);
  return d;
}

/// Effective propagation length arccosh(sqrt(G)) inferred from a probe gain.
template <typename Real>
Real renormalized_length(Real gain) {
  if (!(gain >= Real(1)))
    throw NumericalError("renormalized_length: gain must be >= 1");
  return std::acosh(std::sqrt(gain));
}

}  // namespace mp4wm

#endif
