#pragma once

#include <variant>

#include "oal/fourstate.hpp"
#include "oal/model.hpp"

namespace oal {

// Cs D2 line, 6S_{1/2} (F = 3, 4) to 6P_{3/2} (F' = 3, 4): 7 + 9 + 7 + 9 = 32
// Zeeman states. Levels are ordered ground before excited, F ascending,
// m_F ascending within a level.
enum class ZLevel { g3, g4, e3, e4 };

inline int zlevel_F(ZLevel l) {
  return (l == ZLevel::g3 || l == ZLevel::e3) ? 3 : 4;
}
inline bool zlevel_excited(ZLevel l) {
  return l == ZLevel::e3 || l == ZLevel::e4;
}

// Pump-beam wave number 2*pi / 0.8523 um (Cs D2 wavelength), 1/um.
inline constexpr double kPumpWaveNumber = 2.0 * 3.14159265358979323846 / 0.8523;
// Bohr magneton as a Zeeman angular frequency per Gauss: 2*pi * 1.399624
// rad/us/G (mu_B/h = 1.399624 MHz/G).
inline constexpr double kMuB = 2.0 * 3.14159265358979323846 * 1.399624;

// Stationary pump polarization pattern: all four phases equal to theta.
struct ConstantPhase {
  double theta = 0.5 * 3.14159265358979323846;
};

// Atom drifting at constant transverse velocity: theta(t) = theta0 + k*v*t.
struct ConstantVelocity {
  double theta0_3x = 0.0, theta0_3z = 0.0;
  double theta0_4x = 0.0, theta0_4z = 0.0;
  double v_x = 0.15, v_z = 0.15;  // um/us (0.15 um/us = 15 cm/s)
};

using PhaseModel = std::variant<ConstantPhase, ConstantVelocity>;

struct ZeemanParams {
  double g0 = 0.0;     // peak atom-cavity coupling, rad/us
  double kappa = 0.0;  // cavity field decay, rad/us
  double gamma = 0.0;  // atomic dipole decay, rad/us

  // Branching rates gamma_{ground,excited}, rad/us.
  double gamma33 = 0.0, gamma43 = 0.0, gamma44 = 0.0, gamma34 = 0.0;

  double Omega3 = 0.0, Omega4 = 0.0;  // pump Rabi frequencies, rad/us
  double Delta_AC = 0.0, Delta3 = 0.0, Delta4 = 0.0;

  int fock_truncation = 2;  // per mode, {|0>,|1>,|2>} by default
  double B_pseudo = 0.75;   // pseudo-field along the cavity axis, Gauss
  bool include_offresonant_e4 = true;
  double offres_detuning = 0.0;  // e4 manifold offset from cavity resonance

  PhaseModel phase_model = ConstantPhase{};

  static ZeemanParams cs_defaults();

  void set_I3(double I3) { Omega3 = 2.0 * gamma * std::sqrt(I3); }
  void set_I4(double I4) { Omega4 = 2.0 * gamma * std::sqrt(I4); }
};

// The 32-level atomic factor; labels look like "g3:-2" or "e4:+4".
Factor zeeman_atomic_factor();
// atom (x) mode a (x) mode b.
SpacePtr zeeman_space(int fock_truncation);

// Lowering operator of polarization q in {-1, 0, +1} between a ground and an
// excited level, with Clebsch-Gordan matrix elements
// <Fg, m; 1, q | Fe, m+q> on |Fg,m><Fe,m+q|. Acts on the atomic factor of
// `space` (its factor 0 must be the 32-level atom).
Operator sigma_q(const SpacePtr& space, ZLevel ground, ZLevel excited, int q);

// Cartesian dipole components: x = -(S(+1) - S(-1))/sqrt(2),
// y = i (S(+1) + S(-1))/sqrt(2), z = S(0).
Operator sigma_cartesian(const SpacePtr& space, ZLevel ground, ZLevel excited,
                         char axis);

// Pump term for a pair of counter-propagating beam sets along x and z with
// helical linear polarization:
//   (Omega/(2 sqrt 2)) [(S^z + h.c.) sin(theta_x) + (S^x + h.c.) sin(theta_z)]
// + (Omega/2) (S^y + h.c.) (cos(theta_x) + cos(theta_z)).
Operator pump_hamiltonian(const SpacePtr& space, double omega, ZLevel ground,
                          ZLevel excited, double theta_x, double theta_z);

// Resonant coupling of the two orthogonally polarized cavity modes to the
// lasing transition: mode a to the x dipole and mode b to the z dipole of
// g4<->e3 (both transverse to the cavity axis y).
Operator cavity_coupling(const SpacePtr& space, double g0);

// Zeeman interaction mu_B g_F B F_y for the field along the cavity axis y.
// g_F = -1/4 (F=3), +1/4 (F=4), 0 (F'=3), 0.2668 (F'=4).
Operator pseudo_field_hamiltonian(const SpacePtr& space, double B_gauss);

// Full 288-dimensional (at default truncation) model: pump terms per the
// phase model, cavity coupling including the off-resonant e4 manifold,
// pseudo-field, detunings, and all sigma+-/pi decay paths plus both cavity
// decays.
ModelSpec build_zeeman(const ZeemanParams& p);

}  // namespace oal
