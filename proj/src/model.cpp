#include "oal/model.hpp"

namespace oal {

SparseCd ModelSpec::hamiltonian_at(double t) const {
  SparseCd h(dim(), dim());
  for (const auto& term : hamiltonian_terms) {
    double c = term.dep.is_constant() ? 1.0 : term.dep.eval(t);
    if (term.dep.is_constant() && term.dep.kind != TimeDep::Kind::Constant)
      c = term.dep.eval(0.0);  // frozen phase, omega == 0
    h += c * term.op.mat;
  }
  return h;
}

SparseCd ModelSpec::constant_hamiltonian() const {
  if (!time_independent())
    throw DomainError("model has time-dependent Hamiltonian terms");
  return hamiltonian_at(0.0);
}

const Operator& ModelSpec::observable(const std::string& name) const {
  auto it = observables.find(name);
  if (it == observables.end()) throw LabelError("unknown observable '" + name + "'");
  return it->second;
}

void ModelSpec::add_channel(Operator op, const std::string& label) {
  for (const auto& c : collapse_ops)
    if (c.label == label) throw LabelError("duplicate collapse channel label '" + label + "'");
  collapse_ops.push_back({std::move(op), label});
}

}  // namespace oal
