#include "mp4wm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <optional>

namespace mp4wm {

std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round_sig9(double v) { return std::strtod(format_sig9(v).c_str(), nullptr); }

namespace {

std::string field(const std::optional<double>& v, double scale = 1) {
  return v ? format_sig9(*v * scale) : std::string();
}

nlohmann::json optional_json(const std::optional<double>& v, double scale = 1) {
  return v ? nlohmann::json(round_sig9(*v * scale)) : nlohmann::json(nullptr);
}

nlohmann::json pulse_json(const PulseMetrics& m) {
  return {
      {"peak_time_ns", round_sig9(m.peak_time * 1e9)},
      {"fwhm_ns", round_sig9(m.fwhm_intensity * 1e9)},
      {"peak_intensity", round_sig9(m.peak_intensity)},
      {"energy", round_sig9(m.energy)},
      {"gain_peak", round_sig9(m.gain_peak)},
      {"gain_energy", round_sig9(m.gain_energy)},
      {"delay_ns", round_sig9(m.delay_vs_reference * 1e9)},
      {"broadening_fraction", round_sig9(m.broadening_fraction)},
      {"fractional_delay", round_sig9(m.fractional_delay)},
      {"centroid_delay_ns", round_sig9(m.centroid_delay * 1e9)},
  };
}

}  // namespace

void write_trace_csv(std::ostream& os, const SingleRun& run) {
  const double norm = run.reference.peak_intensity();
  const double scale = norm > 0 ? 1 / norm : 1;
  os << trace_csv_header << '\n';
  const auto& g = run.input.grid;
  for (std::size_t i = 0; i < g.n_samples; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    os << format_sig9(g.time(i) * 1e9) << ',' << format_sig9(std::norm(run.reference.envelope[k]) * scale)
       << ',' << format_sig9(std::norm(run.probe.envelope[k]) * scale) << ','
       << format_sig9(std::norm(run.conjugate.envelope[k]) * scale) << '\n';
  }
}

void write_scan_csv(std::ostream& os, std::span<const ScanRecord> records) {
  os << scan_csv_header << '\n';
  for (const ScanRecord& r : records) {
    os << format_sig9(r.var) << ',' << field(r.gain_peak) << ',' << field(r.gain_energy) << ','
       << field(r.probe_delay, 1e9) << ',' << field(r.conj_delay, 1e9) << ','
       << field(r.differential_delay, 1e9) << ',' << field(r.probe_broadening) << ','
       << field(r.conj_broadening) << ',' << field(r.renorm_length) << ','
       << field(r.inferred_eta) << ',' << field(r.inferred_xi) << ',' << field(r.predicted_gain)
       << '\n';
  }
}

nlohmann::json metrics_json(const PairMetrics& metrics) {
  nlohmann::json j;
  j["probe"] = pulse_json(metrics.probe);
  j["conjugate"] = metrics.conjugate ? pulse_json(*metrics.conjugate) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json scan_json(std::span<const ScanRecord> records) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRecord& r : records) {
    rows.push_back({
        {"var", round_sig9(r.var)},
        {"gain_peak", optional_json(r.gain_peak)},
        {"gain_energy", optional_json(r.gain_energy)},
        {"probe_delay_ns", optional_json(r.probe_delay, 1e9)},
        {"conj_delay_ns", optional_json(r.conj_delay, 1e9)},
        {"dtau_ns", optional_json(r.differential_delay, 1e9)},
        {"probe_broad", optional_json(r.probe_broadening)},
        {"conj_broad", optional_json(r.conj_broadening)},
        {"L", optional_json(r.renorm_length)},
        {"eta_inf", optional_json(r.inferred_eta)},
        {"xi_inf_per_s", optional_json(r.inferred_xi)},
        {"gain_pred", optional_json(r.predicted_gain)},
        {"approximation_valid", r.approximation_valid},
        {"failure", r.failure.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.failure)},
    });
  }
  return rows;
}

nlohmann::json derived_json(const DerivedCoefficients& d) {
  return {
      {"eta0", round_sig9(d.eta0)},
      {"delta_r_mhz", round_sig9(to_mhz(d.delta_r))},
      {"light_shift_mhz", round_sig9(to_mhz(d.light_shift))},
      {"v_group_m_s", round_sig9(d.v_group)},
      {"saturation_rabi_mhz", round_sig9(to_mhz(d.saturation_rabi))},
  };
}

}  // namespace mp4wm
