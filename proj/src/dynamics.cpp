#include "oal/dynamics.hpp"

#include "oal/fourstate.hpp"

namespace oal {

namespace {

Complex trace_of_product(const SparseCd& op, const MatrixCd& rho) {
  // Tr[rho op] = Tr[op rho]
  Complex acc(0.0, 0.0);
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseCd::InnerIterator it(op, k); it; ++it)
      acc += it.value() * rho(it.col(), it.row());
  return acc;
}

MatrixCd unvec(const VectorCd& v, int d) {
  return Eigen::Map<const MatrixCd>(v.data(), d, d);
}

VectorCd vec(const MatrixCd& m) {
  return Eigen::Map<const VectorCd>(m.data(), m.size());
}

}  // namespace

MasterPropagator::MasterPropagator(const ModelSpec& model) : dim_(model.dim()) {
  SparseCd h_static(dim_, dim_);
  for (const auto& term : model.hamiltonian_terms) {
    if (term.dep.is_constant())
      h_static += term.dep.eval(0.0) * term.op.mat;
    else
      timedep_.emplace_back(commutator_superop(term.op.mat), term.dep);
  }
  static_part_ = commutator_superop(h_static);
  for (const auto& ch : model.collapse_ops)
    static_part_ += dissipator_superop(ch.op.mat);
}

VectorCd MasterPropagator::deriv(double t, const VectorCd& v) const {
  VectorCd out = static_part_ * v;
  for (const auto& [superop, dep] : timedep_) out += dep.eval(t) * (superop * v);
  return out;
}

OdeOptions MasterPropagator::default_options() {
  OdeOptions o;
  o.rel_tol = 1e-8;
  o.abs_tol = 1e-10;
  o.h_max = 1.0;
  return o;
}

void MasterPropagator::integrate(VectorCd& v, double t0, double t1,
                                 const OdeOptions& opts) const {
  if (t1 <= t0) return;
  auto rhs = [this](double t, const VectorCd& y) { return deriv(t, y); };
  integrate_adaptive(rhs, v, t0, t1, opts);
}

std::vector<MatrixCd> evolve(const ModelSpec& model, const MatrixCd& rho0,
                             const std::vector<double>& t_grid,
                             const OdeOptions& opts) {
  const int d = model.dim();
  if (rho0.rows() != d || rho0.cols() != d)
    throw DimensionError("evolve: state dimension mismatch");
  if (t_grid.empty() || t_grid.front() < 0.0)
    throw DomainError("evolve: time grid must start at t >= 0");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1]) throw DomainError("evolve: time grid not monotone");

  MasterPropagator prop(model);
  VectorCd v = vec(rho0);
  std::vector<MatrixCd> out;
  out.reserve(t_grid.size());
  double t = 0.0;
  for (double tk : t_grid) {
    prop.integrate(v, t, tk, opts);
    t = tk;
    out.push_back(unvec(v, d));
  }
  return out;
}

CorrelationSeries field_correlation(const ModelSpec& model, const MatrixCd& rho_ss,
                                    const std::vector<double>& tau_grid,
                                    const std::string& mode) {
  MasterPropagator prop(model);
  if (!prop.time_independent())
    throw DomainError("field_correlation: model must be time-independent");
  const int d = model.dim();
  const SparseCd& a = model.observable(mode).mat;
  MatrixCd rho0 = rho_ss * MatrixCd(a.adjoint());

  CorrelationSeries cs;
  cs.kind = CorrelationKind::FieldCorrelation;
  VectorCd v = vec(rho0);
  double t = 0.0;
  Complex c0 = trace_of_product(a, rho0);
  // A field with a coherent amplitude relaxes to <a><a^dag>, not to zero;
  // decay is judged against that asymptote.
  Complex c_inf = trace_of_product(a, rho_ss) * std::conj(trace_of_product(a, rho_ss));
  const double floor = 1e-4 * std::abs(c0 - c_inf);
  bool decayed = std::abs(c0 - c_inf) <= 1e-10 * std::max(std::abs(c0), 1e-300);
  // An oscillating correlation passes through zero every half period; stop
  // only after a sustained run of samples below the floor.
  int below = 0;
  for (double tau : tau_grid) {
    prop.integrate(v, t, tau, MasterPropagator::default_options());
    t = tau;
    Complex val = trace_of_product(a, unvec(v, d));
    cs.taus.push_back(tau);
    cs.values.push_back(val);
    below = (tau > 0.0 && std::abs(val - c_inf) < floor) ? below + 1 : 0;
    if (below >= 16) {
      decayed = true;
      break;
    }
  }
  if (!decayed)
    throw ConvergenceError("field_correlation: correlation has not decayed below "
                           "1e-4 of its initial value within the window");
  return cs;
}

CorrelationSeries g2_tau(const ModelSpec& model, const MatrixCd& rho_ss,
                         const std::vector<double>& tau_grid,
                         const std::string& mode) {
  MasterPropagator prop(model);
  if (!prop.time_independent())
    throw DomainError("g2_tau: model must be time-independent");
  const int d = model.dim();
  const SparseCd& a = model.observable(mode).mat;
  SparseCd n = SparseCd(a.adjoint()) * a;
  double n_bar = std::real(trace_of_product(n, rho_ss));
  if (n_bar <= 0.0)
    throw DomainError("g2_tau: zero mean photon number, correlation undefined");

  MatrixCd rho0 = (MatrixCd(a) * rho_ss * MatrixCd(a.adjoint())) / n_bar;
  CorrelationSeries cs;
  cs.kind = CorrelationKind::IntensityCorrelation;
  VectorCd v = vec(rho0);
  double t = 0.0;
  for (double tau : tau_grid) {
    prop.integrate(v, t, tau, MasterPropagator::default_options());
    t = tau;
    cs.taus.push_back(tau);
    cs.values.push_back(std::real(trace_of_product(n, unvec(v, d))) / n_bar);
  }
  return cs;
}

Spectrum optical_spectrum(const CorrelationSeries& corr, int pad_factor) {
  if (corr.kind != CorrelationKind::FieldCorrelation)
    throw DomainError("optical_spectrum: needs a field correlation series");
  const size_t n = corr.taus.size();
  if (n < 4) throw DomainError("optical_spectrum: series too short");
  const double dt = corr.taus[1] - corr.taus[0];
  for (size_t i = 1; i < n; ++i)
    if (std::abs(corr.taus[i] - corr.taus[i - 1] - dt) > 1e-9 * dt)
      throw DomainError("optical_spectrum: tau grid must be uniform");
  if (pad_factor < 1) pad_factor = 1;

  // Zero-padded window: frequency grid density 1/(M dt), Nyquist 1/(2 dt).
  size_t m = n * static_cast<size_t>(pad_factor);
  const double df = 1.0 / (static_cast<double>(m) * dt);
  Spectrum sp;
  sp.freqs.reserve(m);
  sp.phi.reserve(m);
  const double two_pi = 2.0 * M_PI;
  for (size_t k = 0; k < m; ++k) {
    double nu = (static_cast<double>(k) - static_cast<double>(m) / 2.0) * df;
    Complex acc(0.0, 0.0);
    for (size_t j = 0; j < n; ++j) {
      double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;  // trapezoid
      double ph = -two_pi * nu * corr.taus[j];
      acc += w * corr.values[j] * Complex(std::cos(ph), std::sin(ph));
    }
    sp.freqs.push_back(nu);
    sp.phi.push_back(2.0 * std::real(acc) * dt);
  }
  return sp;
}

std::vector<RabiPoint> rabi_scan(const FourStateParams& p, double I3,
                                 const std::vector<double>& delta3_grid) {
  std::vector<RabiPoint> out;
  out.reserve(delta3_grid.size());
  FourStateParams q = p;
  q.set_I3(I3);
  for (double d3 : delta3_grid) {
    RabiPoint pt;
    pt.delta3 = d3;
    try {
      q.Delta3 = d3;
      ModelSpec model = build_four_state(q);
      MatrixCd rho = steady_state(model);
      pt.n_bar = std::real(trace_of_product(model.observable("n").mat, rho));
    } catch (const Error& e) {
      pt.converged = false;
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace oal
