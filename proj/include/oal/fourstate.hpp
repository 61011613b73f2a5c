#pragma once

#include "oal/model.hpp"

namespace oal {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Convert a rate quoted as "2*pi x MHz" into rad/us. All rates and detunings
// are stored as angular frequencies in rad/us; this is the single conversion
// point.
inline double two_pi_mhz(double mhz) { return kTwoPi * mhz; }

// Parameters for the four-state one-atom-laser model. All rates in rad/us.
struct FourStateParams {
  double g43 = 0.0;       // coherent coupling on e3 <-> g4
  double kappa = 0.0;     // cavity field decay
  double gamma = 0.0;     // atomic amplitude decay unit
  // (gamma33, gamma43, gamma44, gamma34), amplitude rates.
  double gamma33 = 0.0;
  double gamma43 = 0.0;
  double gamma44 = 0.0;
  double gamma34 = 0.0;
  double Omega3 = 0.0;    // pump Rabi frequency, g3 <-> e3
  double Omega4 = 0.0;    // recycling Rabi frequency, g4 <-> e4
  double Delta_AC = 0.0;  // cavity-atom detuning
  double Delta3 = 0.0;    // pump detuning
  double Delta4 = 0.0;    // recycling detuning
  int fock_truncation = 15;

  // Cs D2 defaults: gamma = 2pi*2.6 MHz, kappa = 2pi*4.2 MHz,
  // g43 = 2pi*16 MHz, branching (3/4, 1/4, 7/12, 5/12)*gamma.
  static FourStateParams cs_defaults();

  // Pump intensities I = (Omega / 2 gamma)^2.
  void set_I3(double I3);
  void set_I4(double I4);
  double I3() const;
  double I4() const;

  void validate() const;
};

struct CriticalNumbers {
  double n0 = 0.0;  // saturation photon number, gamma^2 / (2 g^2)
  double N0 = 0.0;  // critical atom number, 2 kappa gamma / g^2
  double C1 = 0.0;  // single-atom cooperativity, 1 / N0
};

CriticalNumbers critical_numbers(const FourStateParams& p);

// Cavity length scaling l -> f*l at constant waist and mirror reflectivity:
// g -> g/sqrt(f), kappa -> kappa/f, gamma unchanged.
FourStateParams scale_cavity(const FourStateParams& p, double f);

// Default Fock truncation for a given parameter set: N = 15 when
// n0f <= 10*n0(Cs), otherwise ceil(3*n0f + 10).
int default_truncation(const FourStateParams& p);

// Four-state model: space = 4-level atom (g3, g4, e3, e4) x Fock(N).
ModelSpec build_four_state(const FourStateParams& p);

// Raman variant: 3-level atom (g3, g4, e3) x Fock(N); level e4 and the
// Omega4 recycling path replaced by direct incoherent decay g4 -> g3 at
// amplitude rate beta34.
ModelSpec build_raman_variant(const FourStateParams& p, double beta34);

}  // namespace oal
