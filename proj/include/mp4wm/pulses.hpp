#ifndef MP4WM_PULSES_HPP
#define MP4WM_PULSES_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "mp4wm/coupling.hpp"
#include "mp4wm/params.hpp"

namespace mp4wm {

/// Uniform, periodic time grid. The matching angular-frequency grid has
/// spacing 2 pi / span and is stored in FFT order (non-negative first).
struct TimeGrid {
  std::size_t n_samples = 0;
  double t_start = 0;
  double t_step = 0;

  double span() const { return static_cast<double>(n_samples) * t_step; }
  double time(std::size_t i) const { return t_start + static_cast<double>(i) * t_step; }
  double omega_step() const;
  double angular_frequency(std::size_t k) const;
  Eigen::VectorXd times() const;
  Eigen::VectorXd angular_frequencies() const;
};

inline constexpr std::size_t min_samples = 256;

/// Grid of n samples (a power of two, at least 256) covering `window`
/// seconds starting at t_start.
TimeGrid uniform_grid(std::size_t n_samples, double window, double t_start);

/// Complex envelope sampled on a grid, E(t) with e^{-i w t} carrier sign.
struct SampledPulse {
  TimeGrid grid;
  Eigen::VectorXcd envelope;

  Eigen::VectorXd intensity() const { return envelope.cwiseAbs2(); }
  double energy() const { return envelope.squaredNorm() * grid.t_step; }
  double peak_intensity() const;
};

/// E(w) = sum_n E(t_n) e^{+i w t_n} dt, stored in FFT order.
struct Spectrum {
  TimeGrid grid;
  Eigen::VectorXcd values;

  double energy() const;  ///< (1/2pi) sum |E(w)|^2 dw
};

/// Relative intensity allowed at the window boundary.
inline constexpr double containment_level = 1e-6;
/// Relative spectral magnitude allowed at the Nyquist edge.
inline constexpr double aliasing_level = 1e-6;

/// Gaussian with intensity peak^2 exp(-4 ln2 (t - center)^2 / fwhm^2).
/// Throws ConfigError if the pulse is not contained in the grid.
SampledPulse make_gaussian_pulse(const TimeGrid& grid, double fwhm, double center,
                                 std::complex<double> peak_amplitude = 1.0);

/// Throws NumericalError when the boundary samples carry more than
/// containment_level of the peak intensity.
void check_contained(const SampledPulse& pulse, std::string_view what);

enum class BandGuard { check, skip };

Spectrum to_spectrum(const SampledPulse& pulse, BandGuard guard = BandGuard::check);
SampledPulse from_spectrum(const Spectrum& spectrum);

/// Delays a pulse by dt through a spectral phase (periodic in the window).
SampledPulse delay_pulse(const SampledPulse& pulse, double dt);

struct PropagationOptions {
  PropagationMode propagation = PropagationMode::relative;
  DispersionMode dispersion = DispersionMode::constant;
};

struct PropagatedPair {
  SampledPulse probe;
  SampledPulse conjugate;  ///< E_c(t), conjugated back from the E_c* solution
};

/// Propagates a probe envelope (no input conjugate) through the cell,
/// bin by bin with the transfer matrix.
PropagatedPair propagate_pulse(const MediumParams& p, const SampledPulse& input,
                               const PropagationOptions& options = {});

/// The input after vacuum propagation over the cell, i.e. the reference
/// pulse delays are measured against.
SampledPulse vacuum_reference(const MediumParams& p, const SampledPulse& input,
                              PropagationMode mode);

struct GaussianFit {
  double center = 0;
  double fwhm = 0;
  double peak = 0;
};

/// Weighted least-squares parabola through log-intensity on the samples
/// within 1/e^2 of the maximum. Exact for noiseless Gaussians.
GaussianFit fit_gaussian(const SampledPulse& pulse);

/// Intensity-weighted mean time.
double centroid(const SampledPulse& pulse);

struct PulseMetrics {
  double peak_time = 0;
  double fwhm_intensity = 0;
  double peak_intensity = 0;
  double energy = 0;
  double gain_peak = 0;
  double gain_energy = 0;
  double delay_vs_reference = 0;
  double broadening_fraction = 0;
  double fractional_delay = 0;
  double centroid_delay = 0;  ///< diagnostic only
};

struct PairMetrics {
  PulseMetrics probe;
  std::optional<PulseMetrics> conjugate;  ///< empty when no conjugate was generated
};

/// Metrics of the outputs measured against the reference pulse. The input
/// width is taken from the fitted reference.
PairMetrics pulse_metrics(const SampledPulse& input, const SampledPulse& reference,
                          const SampledPulse& probe_out, const SampledPulse& conjugate_out);

/// c * delay / length: the slow-down factor c/v_g implied by a delay
/// measured against a vacuum reference, in the large-index limit.
double slowdown_factor(double delay, double length);

}  // namespace mp4wm

#endif
