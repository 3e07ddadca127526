#include "mp4wm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mp4wm {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string at_line(int line, const std::string& msg) {
  return "config line " + std::to_string(line) + ": " + msg;
}

class Entries {
 public:
  explicit Entries(std::map<std::string, Entry> e) : entries_(std::move(e)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  double number(const std::string& key) const {
    const Entry& e = entries_.at(key);
    double v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
      throw ConfigError(at_line(e.line, "malformed number '" + e.value + "' for " + key));
    return v;
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key) const {
    const Entry& e = entries_.at(key);
    std::size_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
      throw ConfigError(at_line(e.line, "malformed integer '" + e.value + "' for " + key));
    return v;
  }

  const std::string& word(const std::string& key) const { return entries_.at(key).value; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

 private:
  std::map<std::string, Entry> entries_;
};

void exclusive(const Entries& e, const std::string& a, const std::string& b, bool required) {
  if (e.has(a) && e.has(b))
    throw ConfigError(at_line(e.line(b), "'" + a + "' and '" + b + "' are mutually exclusive"));
  if (required && !e.has(a) && !e.has(b))
    throw ConfigError("config: missing coupling, set exactly one of '" + a + "' or '" + b + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "omega_rabi_mhz",  "delta_raman_mhz",      "delta_one_mhz",    "delta_two_photon_mhz",
      "delta_tilde_mhz", "gamma_mhz",            "gamma_c_over_gamma", "gamma_c_mhz",
      "eta0",            "g2n",                  "cell_length_cm",   "fwhm_ns",
      "window_ns",       "center_ns",            "n_samples",        "dispersion_mode",
      "propagation_mode", "scan_start",          "scan_stop",        "scan_steps",
      "delta_policy"};
  return keys;
}

Config parse_config(std::string_view text) {
  std::map<std::string, Entry> raw;
  const auto& keys = config_keys();
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(at_line(line_no, "expected 'key = value'"));
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty() || value.empty()) throw ConfigError(at_line(line_no, "expected 'key = value'"));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(at_line(line_no, "unknown key '" + key + "'"));
    if (raw.count(key))
      throw ConfigError(at_line(line_no, "duplicate key '" + key + "' (first set on line " +
                                             std::to_string(raw[key].line) + ")"));
    raw[key] = {value, line_no};
  }
  const Entries e(std::move(raw));

  std::string missing;
  for (const char* k : {"omega_rabi_mhz", "delta_raman_mhz", "delta_one_mhz", "cell_length_cm"})
    if (!e.has(k)) missing += std::string(missing.empty() ? "" : ", ") + k;
  if (!missing.empty()) throw ConfigError("config: missing required key(s): " + missing);
  exclusive(e, "eta0", "g2n", true);
  if (e.has("delta_two_photon_mhz") && e.has("delta_tilde_mhz"))
    throw ConfigError(at_line(e.line("delta_tilde_mhz"),
                              "'delta_two_photon_mhz' and 'delta_tilde_mhz' are mutually exclusive"));
  if (!e.has("delta_two_photon_mhz") && !e.has("delta_tilde_mhz"))
    throw ConfigError("config: missing detuning, set 'delta_two_photon_mhz' or 'delta_tilde_mhz'");
  exclusive(e, "gamma_c_over_gamma", "gamma_c_mhz", false);

  Config cfg;
  MediumParams& m = cfg.medium;
  m.omega_rabi = from_mhz(e.number("omega_rabi_mhz"));
  m.delta_raman = from_mhz(e.number("delta_raman_mhz"));
  m.delta_one = from_mhz(e.number("delta_one_mhz"));
  m.gamma = from_mhz(e.number_or("gamma_mhz", 6.0));
  m.gamma_c = e.has("gamma_c_mhz") ? from_mhz(e.number("gamma_c_mhz"))
                                   : e.number_or("gamma_c_over_gamma", 0.5) * m.gamma;
  m.cell_length = e.number("cell_length_cm") * 1e-2;
  if (e.has("eta0")) {
    const double eta0 = e.number("eta0");
    if (!(eta0 > 0)) throw ConfigError(at_line(e.line("eta0"), "eta0 must be > 0"));
    m.coupling_g2n = coupling_from_eta0(eta0, m.omega_rabi);
  } else {
    const double unit = from_mhz(1.0);
    m.coupling_g2n = e.number("g2n") * unit * unit;
  }
  const double light_shift = m.omega_rabi * m.omega_rabi / (4 * m.delta_raman);
  m.delta_two_photon = e.has("delta_two_photon_mhz")
                           ? from_mhz(e.number("delta_two_photon_mhz"))
                           : light_shift + from_mhz(e.number("delta_tilde_mhz"));
  validate(m);

  PulseConfig& p = cfg.pulse;
  p.fwhm = e.number_or("fwhm_ns", 70.0) * 1e-9;
  p.window = e.number_or("window_ns", 2000.0) * 1e-9;
  p.center = e.number_or("center_ns", 0.0) * 1e-9;
  if (e.has("n_samples")) {
    p.n_samples = e.count("n_samples");
    const bool pow2 = p.n_samples != 0 && (p.n_samples & (p.n_samples - 1)) == 0;
    if (!pow2 || p.n_samples < min_samples)
      throw ConfigError(at_line(e.line("n_samples"), "n_samples must be a power of two >= 256"));
  }
  if (!(p.fwhm > 0)) throw ConfigError(at_line(e.line("fwhm_ns"), "fwhm_ns must be > 0"));
  if (!(p.window > 0)) throw ConfigError(at_line(e.line("window_ns"), "window_ns must be > 0"));
  if (e.has("dispersion_mode")) {
    const auto& w = e.word("dispersion_mode");
    if (w == "constant") p.options.dispersion = DispersionMode::constant;
    else if (w == "full") p.options.dispersion = DispersionMode::full;
    else throw ConfigError(at_line(e.line("dispersion_mode"), "dispersion_mode must be constant|full"));
  }
  if (e.has("propagation_mode")) {
    const auto& w = e.word("propagation_mode");
    if (w == "exact") p.options.propagation = PropagationMode::exact;
    else if (w == "paper") p.options.propagation = PropagationMode::paper;
    else if (w == "relative") p.options.propagation = PropagationMode::relative;
    else throw ConfigError(at_line(e.line("propagation_mode"), "propagation_mode must be exact|paper|relative"));
  }

  const bool any_scan = e.has("scan_start") || e.has("scan_stop") || e.has("scan_steps") ||
                        e.has("delta_policy");
  if (any_scan) {
    for (const char* k : {"scan_start", "scan_stop", "scan_steps"})
      if (!e.has(k)) throw ConfigError(std::string("config: scan block is missing '") + k + "'");
    ScanConfig s;
    s.start = e.number("scan_start");
    s.stop = e.number("scan_stop");
    s.steps = e.count("scan_steps");
    if (s.steps < 2) throw ConfigError(at_line(e.line("scan_steps"), "scan_steps must be >= 2"));
    if (e.has("delta_policy")) {
      const auto& w = e.word("delta_policy");
      if (w == "track") s.delta_policy = DeltaPolicy::track;
      else if (w == "fixed") s.delta_policy = DeltaPolicy::fixed;
      else throw ConfigError(at_line(e.line("delta_policy"), "delta_policy must be track|fixed"));
    }
    cfg.scan = s;
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mp4wm
