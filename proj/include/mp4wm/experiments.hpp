#ifndef MP4WM_EXPERIMENTS_HPP
#define MP4WM_EXPERIMENTS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mp4wm/params.hpp"
#include "mp4wm/pulses.hpp"

namespace mp4wm {

struct PulseConfig {
  double fwhm = 70e-9;
  double window = 2e-6;
  std::size_t n_samples = 4096;
  double center = 0;
  PropagationOptions options;

  /// Window of `window` seconds centred on the input pulse.
  TimeGrid grid() const { return uniform_grid(n_samples, window, center - window / 2); }
};

struct SingleRun {
  SampledPulse input;
  SampledPulse reference;
  SampledPulse probe;
  SampledPulse conjugate;
  PairMetrics metrics;
};

/// One Gaussian probe pulse through the cell, measured against the vacuum
/// reference.
SingleRun run_single(const MediumParams& p, const PulseConfig& pulse);

/// One row of a scan. Metrics that could not be measured are left empty.
struct ScanRecord {
  double var = 0;  ///< delta/2pi in MHz, density scale, cell length in m, or Omega/2pi in MHz
  std::optional<double> gain_peak;
  std::optional<double> gain_energy;
  std::optional<double> probe_delay;
  std::optional<double> conj_delay;
  std::optional<double> differential_delay;
  std::optional<double> probe_broadening;
  std::optional<double> conj_broadening;
  std::optional<double> renorm_length;
  std::optional<double> inferred_eta;
  std::optional<double> inferred_xi;
  std::optional<double> predicted_gain;
  bool approximation_valid = true;  ///< |delta_tilde| <= 2 Delta_R
  std::string failure;              ///< reason when the point could not be measured

  bool complete() const { return failure.empty(); }
};

enum class DeltaPolicy { track, fixed };

/// Evenly spaced values from start to stop inclusive (steps >= 2).
std::vector<double> linspace(double start, double stop, std::size_t steps);

/// Worker count from MP4WM_THREADS (unset or 0 = hardware concurrency).
std::size_t worker_count();

/// Two-photon detuning scan; `deltas` in rad/s.
std::vector<ScanRecord> scan_delta(const MediumParams& p, std::span<const double> deltas,
                                   const PulseConfig& pulse, std::size_t workers = 0);

/// Density scan: each scale multiplies g^2 N.
std::vector<ScanRecord> scan_density(const MediumParams& p, std::span<const double> scales,
                                     const PulseConfig& pulse, std::size_t workers = 0);

/// Cell-length scan, equivalent to scan_density under relative propagation.
std::vector<ScanRecord> scan_length(const MediumParams& p, std::span<const double> lengths,
                                    const PulseConfig& pulse, std::size_t workers = 0);

/// Pump Rabi-frequency scan at fixed g^2 N; `rabis` in rad/s. Under
/// `track` the two-photon detuning follows the light shift so that
/// delta_tilde keeps its initial value.
std::vector<ScanRecord> scan_pump(const MediumParams& p, std::span<const double> rabis,
                                  const PulseConfig& pulse, DeltaPolicy policy,
                                  std::size_t workers = 0);

struct EtaXi {
  double eta = 0;
  double xi = 0;
};

/// Inverts tau = eta z / 2c and dtau = eta / (2 xi - eta gc).
EtaXi infer_eta_xi(double conj_delay, double differential_delay, double z, double gamma_c);

struct GainPrediction {
  double gain = 0;
  double loss_ratio = 0;  ///< eta gc / 2 xi
};

/// Probe gain at the resonance from inferred (eta, xi).
GainPrediction predict_gain(double eta, double xi, double gamma_c, double z);

}  // namespace mp4wm

#endif
