// mp4wm: matched-pulse four-wave-mixing propagation from the command line.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mp4wm/config.hpp"
#include "mp4wm/experiments.hpp"
#include "mp4wm/io.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::string metrics;
  std::string format = "csv";
};

/// Writes to the named file, or stdout when the name is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw mp4wm::ConfigError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void warn_validity(const mp4wm::MediumParams& p) {
  for (const auto& w : mp4wm::validity_warnings(p)) std::cerr << "warning: " << w << '\n';
}

const mp4wm::ScanConfig& require_scan(const mp4wm::Config& cfg) {
  if (!cfg.scan) throw mp4wm::ConfigError("config: scan_start, scan_stop and scan_steps are required for scans");
  return *cfg.scan;
}

void emit_scan(const Options& o, const std::vector<mp4wm::ScanRecord>& records) {
  Sink sink(o.out);
  if (o.format == "json") sink.stream() << mp4wm::scan_json(records).dump(2) << '\n';
  else mp4wm::write_scan_csv(sink.stream(), records);
  for (const auto& r : records)
    if (!r.complete()) std::cerr << "warning: point " << mp4wm::format_sig9(r.var) << ": " << r.failure << '\n';
}

int cmd_derive(const Options& o) {
  const auto cfg = mp4wm::load_config(o.config);
  warn_validity(cfg.medium);
  Sink sink(o.out);
  sink.stream() << mp4wm::derived_json(mp4wm::derive_coefficients(cfg.medium)).dump(2) << '\n';
  return 0;
}

int cmd_run(const Options& o) {
  const auto cfg = mp4wm::load_config(o.config);
  warn_validity(cfg.medium);
  const auto run = mp4wm::run_single(cfg.medium, cfg.pulse);
  const std::string metrics = mp4wm::metrics_json(run.metrics).dump(2);
  if (o.format == "json") {
    Sink sink(o.out);
    sink.stream() << metrics << '\n';
    return 0;
  }
  if (o.out.empty()) throw mp4wm::ConfigError("run: --out <path> is required for the trace CSV");
  Sink traces(o.out);
  mp4wm::write_trace_csv(traces.stream(), run);
  Sink m(o.metrics);
  m.stream() << metrics << '\n';
  return 0;
}

int cmd_scan_delta(const Options& o) {
  const auto cfg = mp4wm::load_config(o.config);
  warn_validity(cfg.medium);
  const auto& s = require_scan(cfg);
  std::vector<double> deltas = mp4wm::linspace(s.start, s.stop, s.steps);
  for (double& d : deltas) d = mp4wm::from_mhz(d);
  emit_scan(o, mp4wm::scan_delta(cfg.medium, deltas, cfg.pulse));
  return 0;
}

int cmd_scan_density(const Options& o) {
  const auto cfg = mp4wm::load_config(o.config);
  warn_validity(cfg.medium);
  const auto& s = require_scan(cfg);
  if (!(s.start > 0) || !(s.stop > 0)) throw mp4wm::ConfigError("scan-density: scales must be > 0");
  emit_scan(o, mp4wm::scan_density(cfg.medium, mp4wm::linspace(s.start, s.stop, s.steps), cfg.pulse));
  return 0;
}

int cmd_scan_pump(const Options& o) {
  const auto cfg = mp4wm::load_config(o.config);
  warn_validity(cfg.medium);
  const auto& s = require_scan(cfg);
  if (!(s.start > 0) || !(s.stop > 0)) throw mp4wm::ConfigError("scan-pump: Rabi frequencies must be > 0");
  std::vector<double> rabis = mp4wm::linspace(s.start, s.stop, s.steps);
  for (double& w : rabis) w = mp4wm::from_mhz(w);
  emit_scan(o, mp4wm::scan_pump(cfg.medium, rabis, cfg.pulse, s.delta_policy));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matched-pulse propagation in double-lambda four-wave mixing"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
  };
  const std::vector<Command> commands = {
      {"run", "propagate one pulse; trace CSV to --out, metrics JSON to stdout", cmd_run},
      {"scan-delta", "scan the two-photon detuning (scan_* in MHz)", cmd_scan_delta},
      {"scan-density", "scan the atomic density scale factor", cmd_scan_density},
      {"scan-pump", "scan the pump Rabi frequency (scan_* in MHz)", cmd_scan_pump},
      {"derive", "print the derived coefficients as JSON", cmd_derive},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", o.config, "configuration file")->required();
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (std::string(c.name) == "run") sub->add_option("--metrics", o.metrics, "metrics JSON file (default stdout)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    for (std::size_t i = 0; i < commands.size(); ++i)
      if (subs[i]->parsed()) return commands[i].fn(o);
  } catch (const mp4wm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_config;
}
