#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "oal/hilbert.hpp"

namespace oal {

// Scalar time dependence of a Hamiltonian term. Operators stay constant and
// sparse; the integrators consume the decomposition H(t) = sum_k f_k(t) H_k
// with f_k in {1, sin(theta0 + omega t), cos(theta0 + omega t)}.
struct TimeDep {
  enum class Kind { Constant, Sin, Cos };
  Kind kind = Kind::Constant;
  double theta0 = 0.0;  // rad
  double omega = 0.0;   // rad/us

  static TimeDep constant() { return {}; }
  static TimeDep sin_phase(double theta0, double omega) {
    return {Kind::Sin, theta0, omega};
  }
  static TimeDep cos_phase(double theta0, double omega) {
    return {Kind::Cos, theta0, omega};
  }

  bool is_constant() const {
    return kind == Kind::Constant || omega == 0.0;
  }
  double eval(double t) const {
    switch (kind) {
      case Kind::Constant: return 1.0;
      case Kind::Sin: return std::sin(theta0 + omega * t);
      case Kind::Cos: return std::cos(theta0 + omega * t);
    }
    return 1.0;
  }
};

struct HamiltonianTerm {
  Operator op;
  TimeDep dep;
  std::string name;
};

struct CollapseChannel {
  Operator op;          // amplitude convention: sqrt(2*rate) * jump operator
  std::string label;    // unique per model
};

// A complete open system: Hamiltonian terms (possibly time-dependent),
// collapse operators, and named observables.
struct ModelSpec {
  SpacePtr space;
  std::vector<HamiltonianTerm> hamiltonian_terms;
  std::vector<CollapseChannel> collapse_ops;
  std::map<std::string, Operator> observables;

  int dim() const { return space->total_dim(); }
  bool time_independent() const {
    for (const auto& h : hamiltonian_terms)
      if (!h.dep.is_constant()) return false;
    return true;
  }
  // Total Hamiltonian at time t (dense coefficients, sparse sum).
  SparseCd hamiltonian_at(double t) const;
  // Sum of constant terms only; throws if a time-dependent term is present.
  SparseCd constant_hamiltonian() const;

  const Operator& observable(const std::string& name) const;
  void add_observable(const std::string& name, Operator op) {
    observables.emplace(name, std::move(op));
  }
  void add_channel(Operator op, const std::string& label);
};

}  // namespace oal
