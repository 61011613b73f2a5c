#pragma once

#include <string>
#include <vector>

#include "oal/ode.hpp"
#include "oal/steady.hpp"

namespace oal {

// Master-equation propagator for vec(rho), supporting the harmonic-phase
// time dependence of Hamiltonian terms. The constant part of the generator
// is assembled once; time-dependent terms are applied with their scalar
// coefficients per evaluation.
class MasterPropagator {
 public:
  explicit MasterPropagator(const ModelSpec& model);

  int dim() const { return dim_; }
  bool time_independent() const { return timedep_.empty(); }

  VectorCd deriv(double t, const VectorCd& v) const;

  // Integrate vec(rho) from t0 to t1 in place.
  void integrate(VectorCd& v, double t0, double t1,
                 const OdeOptions& opts = default_options()) const;

  static OdeOptions default_options();

 private:
  int dim_ = 0;
  SparseCd static_part_;  // constant Hamiltonian terms plus all dissipators
  std::vector<std::pair<SparseCd, TimeDep>> timedep_;
};

// Time evolution of a (not necessarily Hermitian) matrix under the master
// equation, sampled on t_grid. Trace of Hermitian input is preserved to the
// integration tolerance.
std::vector<MatrixCd> evolve(const ModelSpec& model, const MatrixCd& rho0,
                             const std::vector<double>& t_grid,
                             const OdeOptions& opts = MasterPropagator::default_options());

enum class CorrelationKind { FieldCorrelation, IntensityCorrelation };

struct CorrelationSeries {
  std::vector<double> taus;     // us, monotone from 0
  std::vector<Complex> values;  // <a^dag(0) a(tau)> or g2(tau)
  CorrelationKind kind = CorrelationKind::FieldCorrelation;
};

// <a^dag(0) a(tau)> by the regression recipe: evolve rho_ss * a^dag and take
// Tr[rho(tau) a]. The series stops early once |value| falls below
// 1e-4 * |value(0)|; if it never does, a ConvergenceError is thrown.
CorrelationSeries field_correlation(const ModelSpec& model, const MatrixCd& rho_ss,
                                    const std::vector<double>& tau_grid,
                                    const std::string& mode = "a");

// g2(tau) = <a^dag a>(tau) / n_bar with rho(0) = a rho_ss a^dag / n_bar.
// Values are real; reported for tau >= 0 (stationarity gives the mirror).
CorrelationSeries g2_tau(const ModelSpec& model, const MatrixCd& rho_ss,
                         const std::vector<double>& tau_grid,
                         const std::string& mode = "a");

enum class SpectrumNormalization { Absolute, PeakNormalized };

// Emission spectrum and its frequency axis in cycles (nu, with Omega =
// 2*pi*nu). phi(nu) = 2 Re int_0^inf C(tau) exp(-i 2 pi nu tau) dtau, the
// one-sided doubled-real-part form; for a stationary field this equals the
// two-sided transform. With this convention the integral of phi over Omega
// (= 2*pi * trapezoid over nu) recovers 2*pi*C(0).
struct Spectrum {
  std::vector<double> freqs;  // cycles/us (MHz)
  std::vector<double> phi;
  SpectrumNormalization normalization = SpectrumNormalization::Absolute;
};

// Discrete transform of a field correlation on a uniform tau grid, with the
// window zero-padded by at least pad_factor for frequency-grid density.
Spectrum optical_spectrum(const CorrelationSeries& corr, int pad_factor = 4);

struct RabiPoint {
  double delta3 = 0.0;  // rad/us
  double n_bar = 0.0;
  bool converged = true;
  std::string error;
};

// Steady-state n_bar versus the pump detuning Delta3 at fixed I3, I4.
std::vector<RabiPoint> rabi_scan(const FourStateParams& p, double I3,
                                 const std::vector<double>& delta3_grid);

}  // namespace oal
