#include "oal/fourstate.hpp"

#include <cmath>

namespace oal {

FourStateParams FourStateParams::cs_defaults() {
  FourStateParams p;
  p.gamma = two_pi_mhz(2.6);
  p.kappa = two_pi_mhz(4.2);
  p.g43 = two_pi_mhz(16.0);
  p.gamma33 = 3.0 / 4.0 * p.gamma;
  p.gamma43 = 1.0 / 4.0 * p.gamma;
  p.gamma44 = 7.0 / 12.0 * p.gamma;
  p.gamma34 = 5.0 / 12.0 * p.gamma;
  return p;
}

void FourStateParams::set_I3(double I3) {
  if (I3 < 0) throw DomainError("pump intensity I3 must be >= 0");
  Omega3 = 2.0 * gamma * std::sqrt(I3);
}

void FourStateParams::set_I4(double I4) {
  if (I4 < 0) throw DomainError("recycling intensity I4 must be >= 0");
  Omega4 = 2.0 * gamma * std::sqrt(I4);
}

double FourStateParams::I3() const {
  double r = Omega3 / (2.0 * gamma);
  return r * r;
}

double FourStateParams::I4() const {
  double r = Omega4 / (2.0 * gamma);
  return r * r;
}

void FourStateParams::validate() const {
  if (g43 < 0 || kappa < 0 || gamma < 0 || gamma33 < 0 || gamma43 < 0 ||
      gamma44 < 0 || gamma34 < 0)
    throw DomainError("decay rates and couplings must be nonnegative");
  if (fock_truncation < 1) throw DomainError("Fock truncation must be >= 1");
}

CriticalNumbers critical_numbers(const FourStateParams& p) {
  if (p.g43 <= 0) throw DomainError("critical numbers require g43 > 0");
  CriticalNumbers c;
  c.N0 = 2.0 * p.kappa * p.gamma / (p.g43 * p.g43);
  c.n0 = p.gamma * p.gamma / (2.0 * p.g43 * p.g43);
  c.C1 = 1.0 / c.N0;
  return c;
}

FourStateParams scale_cavity(const FourStateParams& p, double f) {
  if (f <= 0) throw DomainError("cavity scale factor must be positive");
  FourStateParams q = p;
  q.g43 = p.g43 / std::sqrt(f);
  q.kappa = p.kappa / f;
  return q;
}

int default_truncation(const FourStateParams& p) {
  double n0f = critical_numbers(p).n0;
  double n0_cs = critical_numbers(FourStateParams::cs_defaults()).n0;
  if (n0f <= 10.0 * n0_cs) return 15;
  return static_cast<int>(std::ceil(3.0 * n0f + 10.0));
}

namespace {

Factor four_state_atom() { return Factor::atomic({"g3", "g4", "e3", "e4"}); }

}  // namespace

ModelSpec build_four_state(const FourStateParams& p) {
  p.validate();
  Factor atom = four_state_atom();
  SpacePtr space = make_space({atom, Factor::fock(p.fock_truncation)});

  auto sig = [&](const std::string& i, const std::string& j) {
    return embed(projector(atom, i, j), 0, space);
  };
  Operator a = embed(fock_destroy(p.fock_truncation), 1, space);
  Operator adag = a.adjoint();

  ModelSpec m;
  m.space = space;

  // H1 = g43 (a^dag sigma_{g4,e3} + sigma_{e3,g4} a)
  m.hamiltonian_terms.push_back(
      {p.g43 * (adag * sig("g4", "e3") + sig("e3", "g4") * a), TimeDep::constant(), "H1"});
  if (p.Omega3 != 0.0)
    m.hamiltonian_terms.push_back(
        {0.5 * p.Omega3 * (sig("g3", "e3") + sig("e3", "g3")), TimeDep::constant(), "H2"});
  // Eq. 1 as printed repeats the g3<->e3 projectors in H3; the text and the
  // level scheme have Omega4 driving g4<->e4, which is what we build.
  if (p.Omega4 != 0.0)
    m.hamiltonian_terms.push_back(
        {0.5 * p.Omega4 * (sig("g4", "e4") + sig("e4", "g4")), TimeDep::constant(), "H3"});
  // The photon-number detuning carries Delta3, not Delta4: in the frame
  // where g3 and g4 sit at zero and e3 at Delta3, the cavity photon of the
  // g3 -> e3 -> g4 emission chain rotates at Delta_AC + Delta3. Any other
  // choice breaks the |e3,0> / |g4,1> degeneracy away from Delta3 = 0 and
  // erases the vacuum-Rabi doublet in the pump-detuning scan.
  if (p.Delta_AC + p.Delta3 != 0.0)
    m.hamiltonian_terms.push_back(
        {(p.Delta_AC + p.Delta3) * (adag * a), TimeDep::constant(), "H4"});
  if (p.Delta3 != 0.0 || p.Delta4 != 0.0)
    m.hamiltonian_terms.push_back(
        {p.Delta3 * sig("e3", "e3") + p.Delta4 * sig("e4", "e4"), TimeDep::constant(), "H5"});

  // Collapse channels, amplitude convention sqrt(2*rate)*c so that
  // D[c]rho = c rho c^dag - {c^dag c, rho}/2 reproduces L1..L5.
  m.add_channel(std::sqrt(2.0 * p.kappa) * a, "cavity");
  m.add_channel(std::sqrt(2.0 * p.gamma33) * sig("g3", "e3"), "gamma33");
  m.add_channel(std::sqrt(2.0 * p.gamma43) * sig("g4", "e3"), "gamma43");
  m.add_channel(std::sqrt(2.0 * p.gamma34) * sig("g3", "e4"), "gamma34");
  m.add_channel(std::sqrt(2.0 * p.gamma44) * sig("g4", "e4"), "gamma44");

  m.add_observable("a", a);
  m.add_observable("n", adag * a);
  for (const auto& lvl : atom.labels)
    m.add_observable("pop_" + lvl, sig(lvl, lvl));
  return m;
}

ModelSpec build_raman_variant(const FourStateParams& p, double beta34) {
  p.validate();
  if (beta34 <= 0) throw DomainError("beta34 must be positive");
  Factor atom = Factor::atomic({"g3", "g4", "e3"});
  SpacePtr space = make_space({atom, Factor::fock(p.fock_truncation)});

  auto sig = [&](const std::string& i, const std::string& j) {
    return embed(projector(atom, i, j), 0, space);
  };
  Operator a = embed(fock_destroy(p.fock_truncation), 1, space);
  Operator adag = a.adjoint();

  ModelSpec m;
  m.space = space;
  m.hamiltonian_terms.push_back(
      {p.g43 * (adag * sig("g4", "e3") + sig("e3", "g4") * a), TimeDep::constant(), "H1"});
  if (p.Omega3 != 0.0)
    m.hamiltonian_terms.push_back(
        {0.5 * p.Omega3 * (sig("g3", "e3") + sig("e3", "g3")), TimeDep::constant(), "H2"});
  if (p.Delta_AC + p.Delta3 != 0.0)
    m.hamiltonian_terms.push_back(
        {(p.Delta_AC + p.Delta3) * (adag * a), TimeDep::constant(), "H4"});
  if (p.Delta3 != 0.0)
    m.hamiltonian_terms.push_back({p.Delta3 * sig("e3", "e3"), TimeDep::constant(), "H5"});

  m.add_channel(std::sqrt(2.0 * p.kappa) * a, "cavity");
  m.add_channel(std::sqrt(2.0 * p.gamma33) * sig("g3", "e3"), "gamma33");
  m.add_channel(std::sqrt(2.0 * p.gamma43) * sig("g4", "e3"), "gamma43");
  m.add_channel(std::sqrt(2.0 * beta34) * sig("g3", "g4"), "beta34");

  m.add_observable("a", a);
  m.add_observable("n", adag * a);
  for (const auto& lvl : atom.labels)
    m.add_observable("pop_" + lvl, sig(lvl, lvl));
  return m;
}

}  // namespace oal
