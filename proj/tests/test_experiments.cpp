#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "mp4wm/experiments.hpp"
#include "support/fixtures.hpp"

using namespace mp4wm;
using mp4wm::testing::lossless;
using mp4wm::testing::operating_point;
using mp4wm::testing::rel_err;

namespace {

constexpr double ns = 1e-9;
constexpr double c_light = speed_of_light<double>;

PulseConfig narrowband() {
  PulseConfig cfg;
  cfg.fwhm = 600 * ns;
  cfg.window = 8000 * ns;
  cfg.n_samples = 8192;
  return cfg;
}

double xi_z(const MediumParams& p) { return coefficients_at(p, 0.0).xi.real() * p.cell_length / c_light; }

/// eta0 giving the requested resonant probe gain at the experimental operating point.
double eta_for_gain(double target) {
  double lo = 1, hi = 2000;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto p = operating_point(mid);
    (analytic_delays(p, p.cell_length).peak_gain < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool same_bits(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::memcmp(&*a, &*b, sizeof(double)) == 0;
}

bool same_record(const ScanRecord& a, const ScanRecord& b) {
  return a.var == b.var && same_bits(a.gain_peak, b.gain_peak) && same_bits(a.gain_energy, b.gain_energy) &&
         same_bits(a.probe_delay, b.probe_delay) && same_bits(a.conj_delay, b.conj_delay) &&
         same_bits(a.differential_delay, b.differential_delay) &&
         same_bits(a.probe_broadening, b.probe_broadening) && same_bits(a.conj_broadening, b.conj_broadening) &&
         same_bits(a.renorm_length, b.renorm_length) && same_bits(a.inferred_eta, b.inferred_eta) &&
         same_bits(a.inferred_xi, b.inferred_xi) && same_bits(a.predicted_gain, b.predicted_gain) &&
         a.approximation_valid == b.approximation_valid && a.failure == b.failure;
}

}  // namespace

TEST_CASE("run_single") {
  SUBCASE("locked regime differential delay") {
    const auto p = lossless(operating_point());
    REQUIRE(xi_z(p) >= 3);
    const auto m = run_single(p, PulseConfig{}).metrics;
    const double dtau = m.probe.delay_vs_reference - m.conjugate->delay_vs_reference;
    CHECK(rel_err(dtau, analytic_delays(p, p.cell_length).dtau_locked) < 0.05);
  }

  SUBCASE("conjugate precedes the probe at G = 13") {
    const auto p = operating_point(eta_for_gain(13));
    CHECK(analytic_delays(p, p.cell_length).peak_gain == doctest::Approx(13).epsilon(1e-9));
    const auto m = run_single(p, PulseConfig{}).metrics;
    CHECK(m.conjugate->delay_vs_reference < m.probe.delay_vs_reference);
  }
}

TEST_CASE("ScanRecord invariants") {
  const auto records = scan_density(operating_point(), linspace(0.2, 1.5, 6), PulseConfig{}, 1);
  for (const auto& r : records) {
    REQUIRE(r.complete());
    CHECK(*r.differential_delay == *r.probe_delay - *r.conj_delay);
    CHECK(*r.renorm_length == std::acosh(std::sqrt(*r.gain_peak)));
  }
}

TEST_CASE("scan_delta") {
  SUBCASE("gain peaks at the light shift") {
    for (const auto& p : {lossless(operating_point()), operating_point()}) {
      const double ls = derive_coefficients(p).light_shift;
      std::vector<double> deltas;
      for (int k = -10; k <= 10; ++k) deltas.push_back(ls + k * from_mhz(0.5));
      const auto rec = scan_delta(p, deltas, PulseConfig{}, 1);
      std::size_t best = 0;
      for (std::size_t i = 0; i < rec.size(); ++i) {
        REQUIRE(rec[i].complete());
        if (*rec[i].gain_peak > *rec[best].gain_peak) best = i;
      }
      CHECK(best == 10);
      CHECK(rec[10].var == doctest::Approx(11.025).epsilon(1e-12));
    }
  }

  SUBCASE("approximation flag for |delta_tilde| > 2 Delta_R") {
    const auto p = operating_point();
    const double ls = derive_coefficients(p).light_shift;
    const std::vector<double> deltas = {ls - 3 * ls, ls - 1.9 * ls, ls, ls + 1.9 * ls, ls + 2.1 * ls};
    const auto rec = scan_delta(p, deltas, PulseConfig{}, 1);
    CHECK_FALSE(rec[0].approximation_valid);
    CHECK(rec[1].approximation_valid);
    CHECK(rec[2].approximation_valid);
    CHECK(rec[3].approximation_valid);
    CHECK_FALSE(rec[4].approximation_valid);
  }
}

TEST_CASE("scan_density") {
  const auto p = lossless(operating_point());
  const double x0 = xi_z(p);

  SUBCASE("vanishing density") {
    const auto r = scan_density(p, std::vector<double>{1e-4, 2e-4}, PulseConfig{}, 1)[0];
    REQUIRE(r.complete());
    CHECK(std::abs(*r.probe_delay) < 0.05 * ns);
    CHECK(std::abs(*r.conj_delay) < 0.05 * ns);
    CHECK(*r.gain_peak == doctest::Approx(1).epsilon(1e-3));
    CHECK(*r.renorm_length < 0.01);
  }

  SUBCASE("probe delay is twice the conjugate delay at small L") {
    const double s = 0.2 / x0;
    const auto r = scan_density(p, std::vector<double>{s, 2 * s}, PulseConfig{}, 1)[0];
    CHECK(*r.probe_delay / *r.conj_delay == doctest::Approx(2).epsilon(0.05));
  }

  SUBCASE("differential delay plateau for L >= 3") {
    const auto rec = scan_density(p, std::vector<double>{3 / x0, 4 / x0, 1.0}, PulseConfig{}, 1);
    for (const auto& r : rec) {
      REQUIRE(r.complete());
      auto q = p;
      q.coupling_g2n *= r.var;
      CHECK(rel_err(*r.differential_delay, analytic_delays(q, q.cell_length).dtau_locked) < 0.05);
    }
  }

  SUBCASE("gain and L increase strictly with density") {
    const auto rec = scan_density(operating_point(), linspace(0.1, 1.2, 12), PulseConfig{}, 1);
    for (std::size_t i = 1; i < rec.size(); ++i) {
      CHECK(*rec[i].gain_peak > *rec[i - 1].gain_peak);
      CHECK(*rec[i].renorm_length > *rec[i - 1].renorm_length);
    }
  }

  SUBCASE("a failing point does not stop the scan") {
    // s = 25 pushes the pulses ~1 us late, past the edge of a 2 us window
    const auto rec = scan_density(operating_point(), std::vector<double>{0.5, 25, 1.0}, PulseConfig{}, 1);
    CHECK(rec[0].complete());
    CHECK_FALSE(rec[1].complete());
    CHECK_FALSE(rec[1].gain_peak.has_value());
    CHECK(rec[1].var == 25);
    CHECK(rec[2].complete());
  }

  CHECK_THROWS_AS(scan_density(p, std::vector<double>{1.0, 0.0}, PulseConfig{}), ConfigError);
}

TEST_CASE("density and length scans agree when s z matches") {
  const auto p = operating_point();
  const std::vector<double> scales = {0.15, 0.6, 1.0, 1.7};
  std::vector<double> lengths;
  for (double s : scales) lengths.push_back(s * p.cell_length);
  const auto a = scan_density(p, scales, PulseConfig{}, 1);
  const auto b = scan_length(p, lengths, PulseConfig{}, 1);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    REQUIRE(a[i].complete());
    REQUIRE(b[i].complete());
    CHECK(rel_err(*b[i].gain_peak, *a[i].gain_peak) < 1e-9);
    CHECK(rel_err(*b[i].gain_energy, *a[i].gain_energy) < 1e-9);
    CHECK(rel_err(*b[i].probe_delay, *a[i].probe_delay) < 1e-9);
    CHECK(rel_err(*b[i].conj_delay, *a[i].conj_delay) < 1e-9);
    CHECK(rel_err(*b[i].differential_delay, *a[i].differential_delay) < 1e-9);
    CHECK(rel_err(1 + *b[i].probe_broadening, 1 + *a[i].probe_broadening) < 1e-9);
    CHECK(rel_err(1 + *b[i].conj_broadening, 1 + *a[i].conj_broadening) < 1e-9);
    CHECK(rel_err(*b[i].renorm_length, *a[i].renorm_length) < 1e-9);
  }
}

TEST_CASE("scan results do not depend on the worker count") {
  const auto p = operating_point();
  const auto scales = linspace(0.1, 1.5, 9);
  const auto one = scan_density(p, scales, PulseConfig{}, 1);
  for (std::size_t workers : {2u, 3u, 16u}) {
    const auto many = scan_density(p, scales, PulseConfig{}, workers);
    REQUIRE(many.size() == one.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(same_record(one[i], many[i]));
  }
}

TEST_CASE("scan_pump") {
  SUBCASE("alpha is invariant under Omega at fixed g2N") {
    const auto p = operating_point();
    auto q = p;
    q.omega_rabi *= 2;
    const auto d = derive_coefficients(p);
    const auto e = derive_coefficients(q);
    CHECK(rel_err(e.delta_r, 4 * d.delta_r) < 1e-15);
    CHECK(rel_err(e.eta0, d.eta0 / 4) < 1e-15);
    CHECK(rel_err(e.alpha0, d.alpha0) < 1e-15);
  }

  SUBCASE("differential delay grows as the pump weakens") {
    const auto p = lossless(operating_point());
    PulseConfig cfg;
    cfg.fwhm = 200 * ns;
    cfg.window = 4000 * ns;
    cfg.n_samples = 8192;
    const std::vector<double> rabis = {from_mhz(600.0), from_mhz(420.0), from_mhz(300.0)};
    const auto rec = scan_pump(p, rabis, cfg, DeltaPolicy::track, 1);
    for (std::size_t i = 0; i < rec.size(); ++i) {
      REQUIRE(rec[i].complete());
      CHECK(rel_err(*rec[i].differential_delay, 2 * p.delta_raman / (rabis[i] * rabis[i])) < 0.05);
      if (i > 0) CHECK(*rec[i].differential_delay > *rec[i - 1].differential_delay);
    }
    CHECK(rec[1].var == doctest::Approx(420.0).epsilon(1e-14));
  }

  SUBCASE("track keeps delta_tilde, fixed does not") {
    const auto p = operating_point();
    const std::vector<double> rabis = {from_mhz(300.0), from_mhz(420.0)};
    const auto tracked = scan_pump(p, rabis, PulseConfig{}, DeltaPolicy::track, 1);
    const auto fixed = scan_pump(p, rabis, PulseConfig{}, DeltaPolicy::fixed, 1);
    CHECK(same_record(tracked[1], fixed[1]));
    CHECK(*tracked[0].gain_peak > *fixed[0].gain_peak);
  }

  SUBCASE("G(Omega^2) changes curvature near the saturation Rabi frequency") {
    const auto p = operating_point();
    const double sat = derive_coefficients(p).saturation_rabi;
    std::vector<double> om2, gain;
    for (double mhz = 100; mhz <= 1500; mhz += 5) {
      auto q = p;
      q.omega_rabi = from_mhz(mhz);
      om2.push_back(q.omega_rabi * q.omega_rabi);
      gain.push_back(analytic_delays(q, q.cell_length).peak_gain);
    }
    std::vector<double> flips;
    for (std::size_t i = 2; i + 1 < gain.size(); ++i) {
      const auto curv = [&](std::size_t k) {
        return (gain[k + 1] - gain[k]) / (om2[k + 1] - om2[k]) - (gain[k] - gain[k - 1]) / (om2[k] - om2[k - 1]);
      };
      if ((curv(i) > 0) != (curv(i - 1) > 0)) flips.push_back(std::sqrt(om2[i]));
    }
    REQUIRE(flips.size() == 1);
    CHECK(flips[0] / sat > 1 / 1.5);
    CHECK(flips[0] / sat < 1.5);
  }
}

TEST_CASE("infer_eta_xi and predict_gain") {
  SUBCASE("40 ns over 2.5 cm") {
    CHECK(infer_eta_xi(40 * ns, 7 * ns, 0.025, 0).eta == doctest::Approx(959.34).epsilon(1e-4));
  }

  SUBCASE("exact inversion of the analytic delays") {
    auto g = mp4wm::testing::rng(3);
    for (int i = 0; i < 50; ++i) {
      auto p = operating_point(mp4wm::testing::uniform(g, 100, 2000));
      p.gamma_c = mp4wm::testing::uniform(g, 0, 1) * p.gamma;
      const auto d = analytic_delays(p, p.cell_length);
      const auto r = infer_eta_xi(d.tau, d.dtau_locked, p.cell_length, p.gamma_c);
      CHECK(rel_err(r.eta, d.eta) < 1e-12);
      CHECK(rel_err(r.xi, d.xi) < 1e-12);
    }
  }

  SUBCASE("simulate, fit, infer") {
    for (double eta0 : {700.0, 960.0, 1400.0}) {
      const auto p = lossless(operating_point(eta0));
      REQUIRE(xi_z(p) >= 3);
      const auto m = run_single(p, PulseConfig{}).metrics;
      const double tau = m.conjugate->delay_vs_reference;
      const auto r = infer_eta_xi(tau, m.probe.delay_vs_reference - tau, p.cell_length, p.gamma_c);
      const auto k = coefficients_at(p, 0.0);
      CHECK(rel_err(r.eta, k.eta.real()) < 0.02);
      CHECK(rel_err(r.xi, k.xi.real()) < 0.02);
    }
  }

  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(infer_eta_xi(0, 7 * ns, 0.025, 0), NumericalError);
    CHECK_THROWS_AS(infer_eta_xi(40 * ns, -1 * ns, 0.025, 0), NumericalError);
    CHECK_THROWS_AS(infer_eta_xi(40 * ns, 7 * ns, 0, 0), NumericalError);
    CHECK_THROWS_AS(predict_gain(960, 1e9, 1e8, 0.025), NumericalError);
  }

  SUBCASE("no decoherence gives cosh^2") {
    const auto r = predict_gain(960, 6.65e10, 0, 0.025);
    CHECK(rel_err(r.gain, std::pow(std::cosh(6.65e10 * 0.025 / c_light), 2)) < 1e-14);
    CHECK(r.loss_ratio == 0);
  }

  SUBCASE("loss ratio at the operating point") {
    const auto p = operating_point();
    const auto k = coefficients_at(p, 0.0);
    CHECK(predict_gain(k.eta.real(), k.xi.real(), p.gamma_c, p.cell_length).loss_ratio ==
          doctest::Approx(0.1348).epsilon(1e-3));
  }

  SUBCASE("matches the pipeline gain for narrowband pulses") {
    for (double eta0 : {300.0, 600.0}) {
      const auto p = operating_point(eta0);
      const auto k = coefficients_at(p, 0.0);
      const double predicted = predict_gain(k.eta.real(), k.xi.real(), p.gamma_c, p.cell_length).gain;
      CHECK(rel_err(run_single(p, narrowband()).metrics.probe.gain_peak, predicted) < 0.03);
    }
  }
}

TEST_CASE("linspace and worker_count") {
  const auto v = linspace(-2, 3, 11);
  CHECK(v.size() == 11);
  CHECK(v.front() == -2);
  CHECK(v.back() == 3);
  CHECK(v[5] == doctest::Approx(0.5));
  CHECK_THROWS_AS(linspace(0, 1, 1), ConfigError);

  ::setenv("MP4WM_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  ::setenv("MP4WM_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("MP4WM_THREADS");
}
