#pragma once

#include <optional>
#include <vector>

#include "oal/fourstate.hpp"

namespace oal {

// Mean-field state: field amplitude alpha = <a> and the matrix of atomic
// expectation values sigma(i,j) = <sigma_ij> = <|i><j|>.
struct SCState {
  Complex alpha{0.0, 0.0};
  MatrixCd sigma;  // n_atom x n_atom, Hermitian with unit-trace populations

  double intensity() const { return std::norm(alpha); }
};

// The factorized equations of motion, derived mechanically from the atomic
// part of the model builder rather than hand-typed: the atomic expectation
// matrix evolves under the master equation with the cavity operator replaced
// by the c-number alpha, and alpha follows the exact <a> equation.
class MeanFieldSystem {
public:
  // raman_beta34: build the three-level Raman variant instead.
  explicit MeanFieldSystem(const FourStateParams& p,
                           std::optional<double> raman_beta34 = {});

  int atom_dim() const { return atom_dim_; }
  const FourStateParams& params() const { return params_; }

  SCState rhs(const SCState& s) const;

  // Initial condition: all population in g3, vacuum field plus a small seed
  // so the lasing branch is reachable above threshold.
  SCState initial_state(double alpha_seed) const;

  // Real-coordinate packing used by the integrator and the Newton polish.
  int num_reals() const { return 2 + atom_dim_ * atom_dim_; }
  void pack(const SCState& s, Eigen::VectorXd& x) const;
  SCState unpack(const Eigen::VectorXd& x) const;

private:
  FourStateParams params_;
  int atom_dim_ = 0;
  int idx_g3_ = 0, idx_g4_ = 0, idx_e3_ = 0;
  MatrixCd h_atom_;                 // drive + detuning part, constant
  MatrixCd sigma_lower_;            // |g4><e3|, couples to the field
  std::vector<MatrixCd> collapse_;  // atomic collapse operators
  double cavity_decay_ = 0.0;       // kappa
  double cavity_detuning_ = 0.0;    // Delta_AC + Delta3
  double coupling_ = 0.0;           // g43
};

struct SCPoint {
  double I3 = 0.0;
  SCState state;
  double alpha2_over_n0 = 0.0;  // |alpha|^2 / n0f
  bool converged = true;
  std::string error;
};

struct SCSteadyOptions {
  double rhs_tol = 1e-7;      // time-integration stopping criterion
  double t_max = 2.0e4;       // us, integration budget
  double alpha_seed_rel = 1e-3;  // seed amplitude in units of sqrt(n0f)
};

// Steady state by damped time integration from the g3/vacuum initial
// condition (plus seed), Newton-polished to machine precision.
SCState sc_steady(const MeanFieldSystem& sys, const SCState& start,
                  const SCSteadyOptions& opts = {});
SCState sc_steady(const FourStateParams& p, double I3,
                  const SCSteadyOptions& opts = {});

struct SCScan {
  std::vector<SCPoint> forward;
  std::vector<SCPoint> backward;  // filled when hysteresis probing is on
  bool hysteresis_detected = false;
};

// Continuation scan over I3 at fixed I4; bidirectional sweep probes
// multistability. Per-point failures are recorded, not thrown.
SCScan sc_scan(const FourStateParams& p, const std::vector<double>& I3_grid,
               double I4, bool bidirectional = true,
               const SCSteadyOptions& opts = {});

}  // namespace oal
