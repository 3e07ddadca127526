#ifndef MP4WM_IO_HPP
#define MP4WM_IO_HPP

#include <ostream>
#include <span>
#include <string>

#include "json.hpp"

#include "mp4wm/experiments.hpp"
#include "mp4wm/params.hpp"
#include "mp4wm/pulses.hpp"

namespace mp4wm {

/// printf "%.9g": the fixed numeric format of every CSV field.
std::string format_sig9(double v);

/// v rounded to 9 significant digits (the value format_sig9 denotes).
double round_sig9(double v);

inline constexpr const char* trace_csv_header = "t_ns,ref,probe,conj";
inline constexpr const char* scan_csv_header =
    "var,gain_peak,gain_energy,probe_delay_ns,conj_delay_ns,dtau_ns,probe_broad,conj_broad,L,"
    "eta_inf,xi_inf_per_s,gain_pred";

/// One row per sample; intensities normalised to the reference peak.
void write_trace_csv(std::ostream& os, const SingleRun& run);

/// One row per scan point in input order; absent values are empty fields.
void write_scan_csv(std::ostream& os, std::span<const ScanRecord> records);

nlohmann::json metrics_json(const PairMetrics& metrics);
nlohmann::json scan_json(std::span<const ScanRecord> records);

/// Keys: eta0, delta_r_mhz, light_shift_mhz, v_group_m_s, saturation_rabi_mhz.
nlohmann::json derived_json(const DerivedCoefficients& d);

}  // namespace mp4wm

#endif
