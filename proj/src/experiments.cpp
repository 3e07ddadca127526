#include "mp4wm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>

namespace mp4wm {

SingleRun run_single(const MediumParams& p, const PulseConfig& pulse) {
  SingleRun run;
  run.input = make_gaussian_pulse(pulse.grid(), pulse.fwhm, pulse.center);
  run.reference = vacuum_reference(p, run.input, pulse.options.propagation);
  PropagatedPair out = propagate_pulse(p, run.input, pulse.options);
  run.probe = std::move(out.probe);
  run.conjugate = std::move(out.conjugate);
  run.metrics = pulse_metrics(run.input, run.reference, run.probe, run.conjugate);
  return run;
}

std::vector<double> linspace(double start, double stop, std::size_t steps) {
  if (steps < 2) throw ConfigError("linspace: steps must be >= 2");
  std::vector<double> v(steps);
  const double h = (stop - start) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) v[i] = start + h * static_cast<double>(i);
  v.back() = stop;
  return v;
}

std::size_t worker_count() {
  std::size_t n = 0;
  if (const char* env = std::getenv("MP4WM_THREADS")) n = std::strtoul(env, nullptr, 10);
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

EtaXi infer_eta_xi(double conj_delay, double differential_delay, double z, double gamma_c) {
  if (!(conj_delay > 0) || !(differential_delay > 0) || !(z > 0) || !(gamma_c >= 0))
    throw NumericalError("infer_eta_xi: delays and length must be positive");
  EtaXi r;
  r.eta = 2 * speed_of_light<double> * conj_delay / z;
  r.xi = r.eta * (1 / differential_delay + gamma_c) / 2;
  return r;
}

GainPrediction predict_gain(double eta, double xi, double gamma_c, double z) {
  if (!(2 * xi > eta * gamma_c))
    throw NumericalError("predict_gain: requires 2 xi > eta gamma_c");
  return {peak_probe_gain(eta, xi, gamma_c, z), eta * gamma_c / (2 * xi)};
}

namespace {

ScanRecord measure_point(const MediumParams& p, const PulseConfig& pulse, double var) {
  ScanRecord r;
  r.var = var;
  const double delta_r = p.omega_rabi * p.omega_rabi / (4 * p.delta_raman);
  r.approximation_valid = std::abs(p.delta_two_photon - delta_r) <= 2 * delta_r;
  try {
    const SingleRun run = run_single(p, pulse);
    const PulseMetrics& probe = run.metrics.probe;
    r.gain_peak = probe.gain_peak;
    r.gain_energy = probe.gain_energy;
    r.probe_delay = probe.delay_vs_reference;
    r.probe_broadening = probe.broadening_fraction;
    if (probe.gain_peak >= 1) r.renorm_length = renormalized_length(probe.gain_peak);
    if (const auto& conj = run.metrics.conjugate) {
      r.conj_delay = conj->delay_vs_reference;
      r.conj_broadening = conj->broadening_fraction;
      r.differential_delay = probe.delay_vs_reference - conj->delay_vs_reference;
      if (*r.conj_delay > 0 && *r.differential_delay > 0) {
        const EtaXi inferred =
            infer_eta_xi(*r.conj_delay, *r.differential_delay, p.cell_length, p.gamma_c);
        r.inferred_eta = inferred.eta;
        r.inferred_xi = inferred.xi;
        if (2 * inferred.xi > inferred.eta * p.gamma_c)
          r.predicted_gain = predict_gain(inferred.eta, inferred.xi, p.gamma_c, p.cell_length).gain;
      }
    }
  } catch (const std::exception& e) {
    r.failure = e.what();
  }
  return r;
}

/// Evaluates every point on a small pool; results land in input order.
std::vector<ScanRecord> run_points(std::size_t count, std::size_t workers,
                                   const std::function<ScanRecord(std::size_t)>& job) {
  std::vector<ScanRecord> out(count);
  if (workers == 0) workers = worker_count();
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) out[i] = job(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

std::vector<ScanRecord> scan_delta(const MediumParams& p, std::span<const double> deltas,
                                   const PulseConfig& pulse, std::size_t workers) {
  validate(p);
  return run_points(deltas.size(), workers, [&](std::size_t i) {
    MediumParams q = p;
    q.delta_two_photon = deltas[i];
    return measure_point(q, pulse, to_mhz(deltas[i]));
  });
}

std::vector<ScanRecord> scan_density(const MediumParams& p, std::span<const double> scales,
                                     const PulseConfig& pulse, std::size_t workers) {
  validate(p);
  for (double s : scales)
    if (!(s > 0)) throw ConfigError("scan_density: scales must be > 0");
  return run_points(scales.size(), workers, [&](std::size_t i) {
    MediumParams q = p;
    q.coupling_g2n = p.coupling_g2n * scales[i];
    return measure_point(q, pulse, scales[i]);
  });
}

std::vector<ScanRecord> scan_length(const MediumParams& p, std::span<const double> lengths,
                                    const PulseConfig& pulse, std::size_t workers) {
  validate(p);
  for (double z : lengths)
    if (!(z > 0)) throw ConfigError("scan_length: lengths must be > 0");
  return run_points(lengths.size(), workers, [&](std::size_t i) {
    MediumParams q = p;
    q.cell_length = lengths[i];
    return measure_point(q, pulse, lengths[i]);
  });
}

std::vector<ScanRecord> scan_pump(const MediumParams& p, std::span<const double> rabis,
                                  const PulseConfig& pulse, DeltaPolicy policy,
                                  std::size_t workers) {
  validate(p);
  for (double w : rabis)
    if (!(w > 0)) throw ConfigError("scan_pump: Rabi frequencies must be > 0");
  const double delta_tilde = derive_coefficients(p).delta_tilde;
  return run_points(rabis.size(), workers, [&](std::size_t i) {
    MediumParams q = p;
    q.omega_rabi = rabis[i];
    if (policy == DeltaPolicy::track)
      q.delta_two_photon = q.omega_rabi * q.omega_rabi / (4 * q.delta_raman) + delta_tilde;
    return measure_point(q, pulse, to_mhz(rabis[i]));
  });
}

}  // namespace mp4wm
