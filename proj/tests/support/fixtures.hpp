#ifndef MP4WM_TESTS_FIXTURES_HPP
#define MP4WM_TESTS_FIXTURES_HPP

#include <cmath>
#include <complex>
#include <random>

#include "mp4wm/params.hpp"

namespace mp4wm::testing {

/// Operating point of the rubidium experiment: Omega/2pi = 420 MHz,
/// Delta/2pi = 4 GHz, Delta_1/2pi = 850 MHz, gamma/2pi = 6 MHz,
/// gamma_c = gamma/2, 2.5 cm cell, eta0 = 960, at the light-shifted resonance.
inline MediumParams operating_point(double eta0 = 960.0) {
  MediumParams p;
  p.omega_rabi = from_mhz(420.0);
  p.delta_raman = from_mhz(4000.0);
  p.delta_one = from_mhz(850.0);
  p.gamma = from_mhz(6.0);
  p.gamma_c = 0.5 * p.gamma;
  p.cell_length = 0.025;
  p.coupling_g2n = coupling_from_eta0(eta0, p.omega_rabi);
  p.delta_two_photon = p.omega_rabi * p.omega_rabi / (4 * p.delta_raman);
  return p;
}

inline MediumParams lossless(MediumParams p) {
  p.gamma_c = 0;
  return p;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename Real>
Real rel_err(std::complex<Real> a, std::complex<Real> b) {
  using std::abs;
  return abs(a - b) / std::max(abs(b), Real(1e-300));
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace mp4wm::testing

#endif
