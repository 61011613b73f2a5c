#pragma once

#include <optional>

#include "oal/fourstate.hpp"
#include "oal/model.hpp"

namespace oal {

// Superoperator acting on column-major vectorized rho.
struct Liouvillian {
  SparseCd superop;  // d^2 x d^2
  int dim = 0;       // d

  // L applied to a density matrix (convenience for tests/integrators).
  MatrixCd apply(const MatrixCd& rho) const;
};

// Build the generator -i[H, rho] + sum_i D[c_i] rho from the constant parts
// of a model. Throws DomainError for time-dependent models.
Liouvillian liouvillian(const ModelSpec& model);

// Superoperator of -i[H, .] on column-major vec(rho).
SparseCd commutator_superop(const SparseCd& H);
// Superoperator of D[c]rho = c rho c^dag - {c^dag c, rho}/2.
SparseCd dissipator_superop(const SparseCd& c);

struct SteadyOptions {
  double residual_tol = 1e-10;      // relative to ||L||_F
  double positivity_floor = -1e-10; // eigenvalues below this abort
  double max_clipped_mass = 1e-8;
};

// rho_ss with L(rho_ss) = 0, trace one, Hermitian, positive up to clipping.
// Throws DegenerateSteadyStateError when the null space is not
// one-dimensional (detected via closed subspaces or a singular solve).
MatrixCd steady_state(const ModelSpec& model, const SteadyOptions& opts = {});

struct SteadyObservables {
  double n_bar = 0.0;                      // total over modes
  std::map<std::string, double> n_per_mode;
  std::map<std::string, double> populations;
  std::optional<double> mandel_Q;          // undefined when n_bar == 0
  std::optional<double> g2_0;
  double ratio_R = 0.0;                    // kappa_f n_bar / (gamma43 sigma_e3e3)
  double beta_43 = 0.0;                    // 2 C1^(43) / (1 + 2 C1^(43))
};

// Derived steady-state quantities. Photon flux in R follows the kappa*n_bar
// convention. Q and g2 are computed for the total photon number.
SteadyObservables steady_observables(const MatrixCd& rho, const ModelSpec& model,
                                     const FourStateParams& params);

struct AdaptiveSteadyResult {
  MatrixCd rho;
  ModelSpec model;
  FourStateParams params;  // with the accepted truncation
  SteadyObservables obs;
  int truncation = 0;
};

// Solve the four-state (or Raman) steady state with the Fock truncation grown
// in steps of 5 until n_bar changes by less than rel_tol.
AdaptiveSteadyResult steady_state_adaptive(const FourStateParams& p,
                                           double rel_tol = 1e-3,
                                           std::optional<double> raman_beta34 = {});

}  // namespace oal
