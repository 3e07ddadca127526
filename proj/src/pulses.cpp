#include "mp4wm/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/QR>
#include <unsupported/Eigen/FFT>

namespace mp4wm {

namespace {

constexpr double ln2 = std::numbers::ln2;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string fmt_ns(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g ns", seconds * 1e9);
  return buf;
}

Eigen::FFT<double> make_fft() {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  return fft;
}

}  // namespace

double TimeGrid::omega_step() const { return two_pi<double> / span(); }

double TimeGrid::angular_frequency(std::size_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(n_samples);
  auto signed_k = static_cast<std::ptrdiff_t>(k);
  if (signed_k >= n / 2) signed_k -= n;
  return static_cast<double>(signed_k) * omega_step();
}

Eigen::VectorXd TimeGrid::times() const {
  Eigen::VectorXd t(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) t[i] = time(i);
  return t;
}

Eigen::VectorXd TimeGrid::angular_frequencies() const {
  Eigen::VectorXd w(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) w[k] = angular_frequency(k);
  return w;
}

TimeGrid uniform_grid(std::size_t n_samples, double window, double t_start) {
  if (n_samples < min_samples || !is_power_of_two(n_samples))
    throw ConfigError("time grid: n_samples must be a power of two >= 256, got " +
                      std::to_string(n_samples));
  if (!(std::isfinite(window) && window > 0))
    throw ConfigError("time grid: window must be finite and > 0");
  if (!std::isfinite(t_start)) throw ConfigError("time grid: t_start must be finite");
  return {n_samples, t_start, window / static_cast<double>(n_samples)};
}

double SampledPulse::peak_intensity() const {
  return envelope.size() == 0 ? 0.0 : envelope.cwiseAbs2().maxCoeff();
}

double Spectrum::energy() const {
  return values.squaredNorm() * grid.omega_step() / two_pi<double>;
}

SampledPulse make_gaussian_pulse(const TimeGrid& grid, double fwhm, double center,
                                 std::complex<double> peak_amplitude) {
  if (!(std::isfinite(fwhm) && fwhm > 0)) throw ConfigError("gaussian pulse: fwhm must be > 0");
  if (!std::isfinite(center)) throw ConfigError("gaussian pulse: center must be finite");
  SampledPulse pulse{grid, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.n_samples))};
  if (peak_amplitude == 0.0) return pulse;

  // |t - center| beyond which the intensity is below containment_level
  const double half_width = fwhm * std::sqrt(std::log(1.0 / containment_level) / (4 * ln2));
  const double t_first = grid.time(0);
  const double t_last = grid.time(grid.n_samples - 1);
  if (center - half_width <= t_first || center + half_width >= t_last) {
    throw ConfigError("gaussian pulse not contained in the time window: need [" +
                      fmt_ns(center - half_width) + ", " + fmt_ns(center + half_width) +
                      "], have [" + fmt_ns(t_first) + ", " + fmt_ns(t_last) + "]");
  }
  for (std::size_t i = 0; i < grid.n_samples; ++i) {
    const double u = (grid.time(i) - center) / fwhm;
    pulse.envelope[static_cast<Eigen::Index>(i)] = peak_amplitude * std::exp(-2 * ln2 * u * u);
  }
  return pulse;
}

void check_contained(const SampledPulse& pulse, std::string_view what) {
  if (!pulse.envelope.allFinite())
    throw NumericalError(std::string(what) + ": envelope is not finite");
  const double peak = pulse.peak_intensity();
  if (peak == 0) return;
  const auto n = pulse.envelope.size();
  const double edge = std::max(std::norm(pulse.envelope[0]), std::norm(pulse.envelope[n - 1]));
  if (edge >= containment_level * peak) {
    throw NumericalError(std::string(what) +
                         ": pulse reaches the edge of the periodic time window "
                         "(wrap-around); use a larger window_ns");
  }
}

Spectrum to_spectrum(const SampledPulse& pulse, BandGuard guard) {
  const TimeGrid& g = pulse.grid;
  const auto n = static_cast<Eigen::Index>(g.n_samples);
  if (pulse.envelope.size() != n) throw ConfigError("to_spectrum: envelope/grid size mismatch");

  auto fft = make_fft();
  Eigen::VectorXcd raw(n);
  fft.inv(raw, pulse.envelope);  // unscaled sum with e^{+2 pi i k n / N}

  Spectrum s{g, Eigen::VectorXcd(n)};
  const std::complex<double> i{0, 1};
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = g.angular_frequency(static_cast<std::size_t>(k));
    s.values[k] = g.t_step * std::exp(i * w * g.t_start) * raw[k];
  }

  if (guard == BandGuard::check) {
    const double peak = s.values.cwiseAbs().maxCoeff();
    const Eigen::Index nyq = n / 2;
    const double edge = std::max({std::abs(s.values[nyq - 1]), std::abs(s.values[nyq]),
                                  std::abs(s.values[nyq + 1])});
    if (peak > 0 && edge > aliasing_level * peak)
      throw NumericalError("to_spectrum: spectrum not band-limited on this grid (aliasing); "
                           "increase n_samples");
  }
  return s;
}

SampledPulse from_spectrum(const Spectrum& spectrum) {
  const TimeGrid& g = spectrum.grid;
  const auto n = static_cast<Eigen::Index>(g.n_samples);
  const std::complex<double> i{0, 1};
  Eigen::VectorXcd shifted(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = g.angular_frequency(static_cast<std::size_t>(k));
    shifted[k] = spectrum.values[k] * std::exp(-i * w * g.t_start);
  }
  auto fft = make_fft();
  SampledPulse out{g, Eigen::VectorXcd(n)};
  fft.fwd(out.envelope, shifted);
  out.envelope /= static_cast<double>(n) * g.t_step;
  return out;
}

SampledPulse delay_pulse(const SampledPulse& pulse, double dt) {
  Spectrum s = to_spectrum(pulse, BandGuard::skip);
  const std::complex<double> i{0, 1};
  for (Eigen::Index k = 0; k < s.values.size(); ++k)
    s.values[k] *= std::exp(i * s.grid.angular_frequency(static_cast<std::size_t>(k)) * dt);
  return from_spectrum(s);
}

PropagatedPair propagate_pulse(const MediumParams& p, const SampledPulse& input,
                               const PropagationOptions& options) {
  validate(p);
  check_contained(input, "propagate_pulse input");
  const Spectrum in = to_spectrum(input, BandGuard::check);

  Spectrum probe{in.grid, Eigen::VectorXcd(in.values.size())};
  Spectrum conj_star{in.grid, Eigen::VectorXcd(in.values.size())};
  for (Eigen::Index k = 0; k < in.values.size(); ++k) {
    const double w = in.grid.angular_frequency(static_cast<std::size_t>(k));
    const TransferMatrix m =
        transfer_matrix(coefficients_at(p, w, options.dispersion), p.cell_length, options.propagation);
    probe.values[k] = m(0, 0) * in.values[k];
    conj_star.values[k] = m(1, 0) * in.values[k];
  }

  PropagatedPair out{from_spectrum(probe), from_spectrum(conj_star)};
  out.conjugate.envelope = out.conjugate.envelope.conjugate();
  check_contained(out.probe, "propagate_pulse probe output");
  check_contained(out.conjugate, "propagate_pulse conjugate output");
  return out;
}

SampledPulse vacuum_reference(const MediumParams& p, const SampledPulse& input,
                              PropagationMode mode) {
  if (mode != PropagationMode::exact) return input;
  return delay_pulse(input, p.cell_length / speed_of_light<double>);
}

namespace {

/// Weighted log-parabola fit over the contiguous region above level * e^-2.
/// The square-root weights taper to zero at the threshold, so the fit varies
/// smoothly as samples enter or leave the region under grid refinement.
GaussianFit fit_above(const SampledPulse& pulse, const Eigen::VectorXd& intensity, Eigen::Index imax,
                      double level) {
  const auto n = intensity.size();
  const double threshold = level * std::exp(-2.0);
  Eigen::Index lo = imax, hi = imax;
  while (lo > 0 && intensity[lo - 1] > threshold) --lo;
  while (hi + 1 < n && intensity[hi + 1] > threshold) ++hi;
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((i < lo || i > hi) && intensity[i] > threshold)
      throw NumericalError("fit_gaussian: no unique dominant peak within the fit window");
  }
  const Eigen::Index count = hi - lo + 1;
  if (count < 8)
    throw NumericalError("fit_gaussian: fewer than 8 samples above 1/e^2 of the peak");

  const double t_ref = pulse.grid.time(static_cast<std::size_t>(imax));
  const double scale = std::max(1.0, static_cast<double>(count) / 2) * pulse.grid.t_step;
  Eigen::MatrixXd design(count, 3);
  Eigen::VectorXd rhs(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::Index i = lo + j;
    const double u = (pulse.grid.time(static_cast<std::size_t>(i)) - t_ref) / scale;
    // log-intensity noise scales as 1/I, hence sqrt-weights ~ I
    const double s = intensity[i] / level;
    const double edge = 1 - std::exp(-2.0) / s;
    const double w = s * edge * edge;
    design(j, 0) = w;
    design(j, 1) = w * u;
    design(j, 2) = w * u * u;
    rhs[j] = w * std::log(s);
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  if (!(c[2] < 0)) throw NumericalError("fit_gaussian: non-negative curvature, not a pulse");

  const double u0 = -c[1] / (2 * c[2]);
  GaussianFit fit;
  fit.center = t_ref + scale * u0;
  fit.fwhm = 2 * scale * std::sqrt(ln2 / -c[2]);
  fit.peak = level * std::exp(c[0] - c[1] * c[1] / (4 * c[2]));
  return fit;
}

}  // namespace

GaussianFit fit_gaussian(const SampledPulse& pulse) {
  const Eigen::VectorXd intensity = pulse.intensity();
  if (intensity.size() == 0) throw NumericalError("fit_gaussian: empty pulse");
  Eigen::Index imax = 0;
  const double peak = intensity.maxCoeff(&imax);
  if (!(peak > 0) || !std::isfinite(peak)) throw NumericalError("fit_gaussian: no pulse (zero intensity)");
  // second pass sets the threshold from the fitted peak rather than the
  // largest sample, which depends on where the grid points fall
  const GaussianFit first = fit_above(pulse, intensity, imax, peak);
  if (!(first.peak >= peak) || first.peak > 2 * peak) return first;
  return fit_above(pulse, intensity, imax, first.peak);
}

double centroid(const SampledPulse& pulse) {
  const Eigen::VectorXd intensity = pulse.intensity();
  const double total = intensity.sum();
  if (!(total > 0)) throw NumericalError("centroid: zero-intensity pulse");
  return intensity.dot(pulse.grid.times()) / total;
}

namespace {

PulseMetrics measure(const SampledPulse& out, const GaussianFit& input_fit,
                     const GaussianFit& ref_fit, double ref_energy, double ref_centroid) {
  const GaussianFit f = fit_gaussian(out);
  PulseMetrics m;
  m.peak_time = f.center;
  m.fwhm_intensity = f.fwhm;
  m.peak_intensity = f.peak;
  m.energy = out.energy();
  m.gain_peak = f.peak / ref_fit.peak;
  m.gain_energy = m.energy / ref_energy;
  m.delay_vs_reference = f.center - ref_fit.center;
  m.broadening_fraction = f.fwhm / input_fit.fwhm - 1;
  m.fractional_delay = m.delay_vs_reference / input_fit.fwhm;
  m.centroid_delay = centroid(out) - ref_centroid;
  return m;
}

}  // namespace

PairMetrics pulse_metrics(const SampledPulse& input, const SampledPulse& reference,
                          const SampledPulse& probe_out, const SampledPulse& conjugate_out) {
  const GaussianFit input_fit = fit_gaussian(input);
  const GaussianFit ref_fit = fit_gaussian(reference);
  const double ref_energy = reference.energy();
  const double ref_centroid = centroid(reference);

  PairMetrics pm;
  pm.probe = measure(probe_out, input_fit, ref_fit, ref_energy, ref_centroid);
  if (conjugate_out.peak_intensity() > 0)
    pm.conjugate = measure(conjugate_out, input_fit, ref_fit, ref_energy, ref_centroid);
  return pm;
}

double slowdown_factor(double delay, double length) {
  if (!(length > 0)) throw ConfigError("slowdown_factor: length must be > 0");
  return speed_of_light<double> * delay / length;
}

}  // namespace mp4wm
