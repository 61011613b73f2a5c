#include "oal/zeeman.hpp"

#include <cmath>

namespace oal {

namespace {

const char* zlevel_name(ZLevel l) {
  switch (l) {
    case ZLevel::g3: return "g3";
    case ZLevel::g4: return "g4";
    case ZLevel::e3: return "e3";
    case ZLevel::e4: return "e4";
  }
  return "";
}

std::string zstate_label(ZLevel l, int m) {
  return std::string(zlevel_name(l)) + ":" + (m >= 0 ? "+" : "") + std::to_string(m);
}

constexpr ZLevel kLevels[4] = {ZLevel::g3, ZLevel::g4, ZLevel::e3, ZLevel::e4};

// Lande factors for the Cs D2 hyperfine levels. Ground: +-1/4; excited from
// g_J(6P_{3/2}) = 1.334, so F'=3 -> 0 and F'=4 -> 1.334 * 8/40.
double zlevel_gF(ZLevel l) {
  switch (l) {
    case ZLevel::g3: return -0.25;
    case ZLevel::g4: return 0.25;
    case ZLevel::e3: return 0.0;
    case ZLevel::e4: return 1.334 * 8.0 / 40.0;
  }
  return 0.0;
}

int atomic_index(const Factor& atom, ZLevel l, int m) {
  return atom.index_of(zstate_label(l, m));
}

void check_zeeman_space(const SpacePtr& space) {
  if (!space || space->num_factors() < 1 || space->factor(0).dim() != 32)
    throw DimensionError("zeeman: factor 0 of the space must be the 32-level atom");
}

// Embed a 32x32 atomic matrix into the full space.
Operator embed_atomic(const SpacePtr& space, const MatrixCd& m) {
  Operator op = make_operator(single_factor_space(zeeman_atomic_factor()), m);
  if (space->num_factors() == 1) return op;
  return embed(op, 0, space);
}

Operator mode_destroy(const SpacePtr& space, int mode_factor) {
  const Factor& f = space->factor(mode_factor);
  return embed(fock_destroy(f.fock_truncation), mode_factor, space);
}

}  // namespace

ZeemanParams ZeemanParams::cs_defaults() {
  ZeemanParams p;
  p.g0 = two_pi_mhz(16.0);
  p.kappa = two_pi_mhz(4.2);
  p.gamma = two_pi_mhz(2.6);
  p.gamma33 = 0.75 * p.gamma;
  p.gamma43 = 0.25 * p.gamma;
  p.gamma44 = (7.0 / 12.0) * p.gamma;
  p.gamma34 = (5.0 / 12.0) * p.gamma;
  p.offres_detuning = two_pi_mhz(200.0);
  return p;
}

Factor zeeman_atomic_factor() {
  std::vector<std::string> labels;
  labels.reserve(32);
  for (ZLevel l : kLevels) {
    int F = zlevel_F(l);
    for (int m = -F; m <= F; ++m) labels.push_back(zstate_label(l, m));
  }
  return Factor::atomic(std::move(labels));
}

SpacePtr zeeman_space(int fock_truncation) {
  if (fock_truncation < 1)
    throw DomainError("zeeman_space: Fock truncation must be at least 1");
  return make_space({zeeman_atomic_factor(), Factor::fock(fock_truncation),
                     Factor::fock(fock_truncation)});
}

Operator sigma_q(const SpacePtr& space, ZLevel ground, ZLevel excited, int q) {
  check_zeeman_space(space);
  if (zlevel_excited(ground) || !zlevel_excited(excited))
    throw DomainError("sigma_q: needs a (ground, excited) level pair");
  if (q < -1 || q > 1) throw DomainError("sigma_q: q must be -1, 0, or +1");

  Factor atom = zeeman_atomic_factor();
  const int Fg = zlevel_F(ground), Fe = zlevel_F(excited);
  MatrixCd m = MatrixCd::Zero(32, 32);
  for (int mg = -Fg; mg <= Fg; ++mg) {
    int me = mg + q;
    if (me < -Fe || me > Fe) continue;
    double cg = clebsch_gordan(Fg, mg, 1, q, Fe, me);
    if (cg == 0.0) continue;
    m(atomic_index(atom, ground, mg), atomic_index(atom, excited, me)) = cg;
  }
  return embed_atomic(space, m);
}

Operator sigma_cartesian(const SpacePtr& space, ZLevel ground, ZLevel excited,
                         char axis) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Operator plus = sigma_q(space, ground, excited, +1);
  Operator minus = sigma_q(space, ground, excited, -1);
  switch (axis) {
    case 'x': return Complex(-inv_sqrt2, 0.0) * (plus - minus);
    case 'y': return Complex(0.0, inv_sqrt2) * (plus + minus);
    case 'z': return sigma_q(space, ground, excited, 0);
  }
  throw DomainError("sigma_cartesian: axis must be 'x', 'y', or 'z'");
}

Operator pump_hamiltonian(const SpacePtr& space, double omega, ZLevel ground,
                          ZLevel excited, double theta_x, double theta_z) {
  Operator sx = sigma_cartesian(space, ground, excited, 'x');
  Operator sy = sigma_cartesian(space, ground, excited, 'y');
  Operator sz = sigma_cartesian(space, ground, excited, 'z');
  double wxz = omega / (2.0 * std::sqrt(2.0));
  double wy = omega / 2.0;
  return (wxz * std::sin(theta_x)) * (sz + sz.adjoint()) +
         (wxz * std::sin(theta_z)) * (sx + sx.adjoint()) +
         (wy * (std::cos(theta_x) + std::cos(theta_z))) * (sy + sy.adjoint());
}

Operator cavity_coupling(const SpacePtr& space, double g0) {
  if (g0 <= 0.0) throw DomainError("cavity_coupling: g0 must be positive");
  Operator a = mode_destroy(space, 1);
  Operator b = mode_destroy(space, 2);
  Operator sx = sigma_cartesian(space, ZLevel::g4, ZLevel::e3, 'x');
  Operator sz = sigma_cartesian(space, ZLevel::g4, ZLevel::e3, 'z');
  Operator h = a.adjoint() * sx + b.adjoint() * sz;
  return g0 * (h + h.adjoint());
}

Operator pseudo_field_hamiltonian(const SpacePtr& space, double B_gauss) {
  check_zeeman_space(space);
  if (B_gauss < 0.0) throw DomainError("pseudo_field_hamiltonian: B must be >= 0");
  Factor atom = zeeman_atomic_factor();
  MatrixCd m = MatrixCd::Zero(32, 32);
  for (ZLevel l : kLevels) {
    double scale = kMuB * zlevel_gF(l) * B_gauss;
    if (scale == 0.0) continue;
    int F = zlevel_F(l);
    // F_y = (F_+ - F_-) / 2i with <F,m+1|F_+|F,m> = sqrt(F(F+1) - m(m+1))
    for (int mm = -F; mm < F; ++mm) {
      double amp = std::sqrt(F * (F + 1.0) - mm * (mm + 1.0)) / 2.0;
      int lo = atomic_index(atom, l, mm), hi = atomic_index(atom, l, mm + 1);
      m(hi, lo) += scale * Complex(0.0, -amp);
      m(lo, hi) += scale * Complex(0.0, amp);
    }
  }
  return embed_atomic(space, m);
}

ModelSpec build_zeeman(const ZeemanParams& p) {
  if (p.fock_truncation < 1)
    throw DomainError("build_zeeman: Fock truncation must be at least 1");
  SpacePtr space = zeeman_space(p.fock_truncation);
  ModelSpec m;
  m.space = space;

  Operator a = mode_destroy(space, 1);
  Operator b = mode_destroy(space, 2);
  Operator n_a = a.adjoint() * a;
  Operator n_b = b.adjoint() * b;

  Factor atom = zeeman_atomic_factor();
  auto manifold_projector = [&](ZLevel l) {
    MatrixCd proj = MatrixCd::Zero(32, 32);
    int F = zlevel_F(l);
    for (int mm = -F; mm <= F; ++mm) {
      int i = atomic_index(atom, l, mm);
      proj(i, i) = 1.0;
    }
    return embed_atomic(space, proj);
  };

  // Detunings, in the frame rotating with the pumps and the cavity.
  Operator h_det = p.Delta3 * manifold_projector(ZLevel::e3) +
                   p.Delta4 * manifold_projector(ZLevel::e4) +
                   (p.Delta_AC + p.Delta3) * (n_a + n_b);
  m.hamiltonian_terms.push_back({h_det, TimeDep::constant(), "detunings"});

  // Pump terms for Omega3 on g3<->e3 and Omega4 on g4<->e4.
  auto add_pump = [&](double omega, ZLevel gl, ZLevel el, double th_x, double th_z,
                      double om_x, double om_z, const std::string& tag) {
    if (omega == 0.0) return;
    if (om_x == 0.0 && om_z == 0.0) {
      m.hamiltonian_terms.push_back(
          {pump_hamiltonian(space, omega, gl, el, th_x, th_z),
           TimeDep::constant(), "pump_" + tag});
      return;
    }
    Operator sx = sigma_cartesian(space, gl, el, 'x');
    Operator sy = sigma_cartesian(space, gl, el, 'y');
    Operator sz = sigma_cartesian(space, gl, el, 'z');
    double wxz = omega / (2.0 * std::sqrt(2.0));
    double wy = omega / 2.0;
    m.hamiltonian_terms.push_back({wxz * (sz + sz.adjoint()),
                                   TimeDep::sin_phase(th_x, om_x), "pump_" + tag + "_zx"});
    m.hamiltonian_terms.push_back({wxz * (sx + sx.adjoint()),
                                   TimeDep::sin_phase(th_z, om_z), "pump_" + tag + "_xz"});
    m.hamiltonian_terms.push_back({wy * (sy + sy.adjoint()),
                                   TimeDep::cos_phase(th_x, om_x), "pump_" + tag + "_yx"});
    m.hamiltonian_terms.push_back({wy * (sy + sy.adjoint()),
                                   TimeDep::cos_phase(th_z, om_z), "pump_" + tag + "_yz"});
  };
  if (const auto* cp = std::get_if<ConstantPhase>(&p.phase_model)) {
    add_pump(p.Omega3, ZLevel::g3, ZLevel::e3, cp->theta, cp->theta, 0.0, 0.0, "3");
    add_pump(p.Omega4, ZLevel::g4, ZLevel::e4, cp->theta, cp->theta, 0.0, 0.0, "4");
  } else {
    const auto& cv = std::get<ConstantVelocity>(p.phase_model);
    double om_x = kPumpWaveNumber * cv.v_x;
    double om_z = kPumpWaveNumber * cv.v_z;
    add_pump(p.Omega3, ZLevel::g3, ZLevel::e3, cv.theta0_3x, cv.theta0_3z, om_x, om_z, "3");
    add_pump(p.Omega4, ZLevel::g4, ZLevel::e4, cv.theta0_4x, cv.theta0_4z, om_x, om_z, "4");
  }

  m.hamiltonian_terms.push_back({cavity_coupling(space, p.g0), TimeDep::constant(),
                                 "cavity_coupling"});

  if (p.include_offresonant_e4) {
    // The e4<->g4 dipole also couples to the cavity, detuned by the excited
    // hyperfine splitting: A exp(-i delta t) + h.c. split into Hermitian
    // cos/sin pieces. Coupling scaled by the dipole-strength ratio.
    double g_off = p.g0 * std::sqrt(p.gamma44 / p.gamma43);
    Operator sx = sigma_cartesian(space, ZLevel::g4, ZLevel::e4, 'x');
    Operator sz = sigma_cartesian(space, ZLevel::g4, ZLevel::e4, 'z');
    Operator A = g_off * (a.adjoint() * sx + b.adjoint() * sz);
    Operator cos_part = A + A.adjoint();
    Operator sin_part = Complex(0.0, -1.0) * (A - A.adjoint());
    m.hamiltonian_terms.push_back({cos_part, TimeDep::cos_phase(0.0, p.offres_detuning),
                                   "offres_e4_cos"});
    m.hamiltonian_terms.push_back({sin_part, TimeDep::sin_phase(0.0, p.offres_detuning),
                                   "offres_e4_sin"});
  }

  if (p.B_pseudo > 0.0)
    m.hamiltonian_terms.push_back({pseudo_field_hamiltonian(space, p.B_pseudo),
                                   TimeDep::constant(), "pseudo_field"});

  // Decay: both cavity modes plus every sigma+-/pi spontaneous path.
  m.add_channel(std::sqrt(2.0 * p.kappa) * a, "cavity_a");
  m.add_channel(std::sqrt(2.0 * p.kappa) * b, "cavity_b");
  const struct { ZLevel g, e; double rate; } paths[4] = {
      {ZLevel::g3, ZLevel::e3, p.gamma33},
      {ZLevel::g4, ZLevel::e3, p.gamma43},
      {ZLevel::g3, ZLevel::e4, p.gamma34},
      {ZLevel::g4, ZLevel::e4, p.gamma44},
  };
  for (const auto& path : paths)
    for (int q = -1; q <= 1; ++q)
      m.add_channel(std::sqrt(2.0 * path.rate) * sigma_q(space, path.g, path.e, q),
                    std::string("gamma_") + zlevel_name(path.g) + "_" +
                        zlevel_name(path.e) + "_q" + std::to_string(q));

  m.add_observable("a", a);
  m.add_observable("b", b);
  m.add_observable("n_a", n_a);
  m.add_observable("n_b", n_b);
  m.add_observable("n", n_a + n_b);
  m.add_observable("pop_g3", manifold_projector(ZLevel::g3));
  m.add_observable("pop_g4", manifold_projector(ZLevel::g4));
  m.add_observable("pop_e3", manifold_projector(ZLevel::e3));
  m.add_observable("pop_e4", manifold_projector(ZLevel::e4));
  return m;
}

}  // namespace oal
