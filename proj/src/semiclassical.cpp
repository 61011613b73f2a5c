#include "oal/semiclassical.hpp"

#include <Eigen/LU>

#include "oal/ode.hpp"

namespace oal {

MeanFieldSystem::MeanFieldSystem(const FourStateParams& p,
                                 std::optional<double> raman_beta34)
    : params_(p) {
  p.validate();
  // Assemble the atomic-factor pieces from the same primitives the full
  // model builder uses; the equations of motion are then evaluated by
  // matrix algebra instead of transcribing the 18 scalar equations.
  bool raman = raman_beta34.has_value();
  Factor atom = raman ? Factor::atomic({"g3", "g4", "e3"})
                      : Factor::atomic({"g3", "g4", "e3", "e4"});
  SpacePtr sp = single_factor_space(atom);
  atom_dim_ = atom.dim();
  idx_g3_ = atom.index_of("g3");
  idx_g4_ = atom.index_of("g4");
  idx_e3_ = atom.index_of("e3");

  auto sig = [&](const std::string& i, const std::string& j) {
    return projector(atom, i, j).dense();
  };

  h_atom_ = MatrixCd::Zero(atom_dim_, atom_dim_);
  if (p.Omega3 != 0.0) h_atom_ += 0.5 * p.Omega3 * (sig("g3", "e3") + sig("e3", "g3"));
  if (p.Delta3 != 0.0) h_atom_ += p.Delta3 * sig("e3", "e3");
  if (!raman) {
    if (p.Omega4 != 0.0) h_atom_ += 0.5 * p.Omega4 * (sig("g4", "e4") + sig("e4", "g4"));
    if (p.Delta4 != 0.0) h_atom_ += p.Delta4 * sig("e4", "e4");
  }
  sigma_lower_ = sig("g4", "e3");

  collapse_.push_back(std::sqrt(2.0 * p.gamma33) * sig("g3", "e3"));
  collapse_.push_back(std::sqrt(2.0 * p.gamma43) * sig("g4", "e3"));
  if (raman) {
    collapse_.push_back(std::sqrt(2.0 * *raman_beta34) * sig("g3", "g4"));
  } else {
    collapse_.push_back(std::sqrt(2.0 * p.gamma34) * sig("g3", "e4"));
    collapse_.push_back(std::sqrt(2.0 * p.gamma44) * sig("g4", "e4"));
  }

  cavity_decay_ = p.kappa;
  cavity_detuning_ = p.Delta_AC + p.Delta3;
  coupling_ = p.g43;
}

SCState MeanFieldSystem::rhs(const SCState& s) const {
  const Complex im(0.0, 1.0);
  // sigma(i,j) = <sigma_ij> = rho(j,i); evolve rho and transpose back.
  MatrixCd rho = s.sigma.transpose();
  MatrixCd h = h_atom_ + coupling_ * (std::conj(s.alpha) * sigma_lower_ +
                                      s.alpha * sigma_lower_.adjoint());
  MatrixCd drho = -im * (h * rho - rho * h);
  for (const auto& c : collapse_) {
    MatrixCd cdc = c.adjoint() * c;
    drho += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
  }
  SCState ds;
  ds.sigma = drho.transpose();
  // <sigma_(g4,e3)> = rho(e3, g4)
  Complex coherence = rho(idx_e3_, idx_g4_);
  ds.alpha = -(cavity_decay_ + im * cavity_detuning_) * s.alpha -
             im * coupling_ * coherence;
  return ds;
}

SCState MeanFieldSystem::initial_state(double alpha_seed) const {
  SCState s;
  s.sigma = MatrixCd::Zero(atom_dim_, atom_dim_);
  s.sigma(idx_g3_, idx_g3_) = 1.0;
  s.alpha = alpha_seed;
  return s;
}

void MeanFieldSystem::pack(const SCState& s, Eigen::VectorXd& x) const {
  x.resize(num_reals());
  x(0) = s.alpha.real();
  x(1) = s.alpha.imag();
  int k = 2;
  for (int i = 0; i < atom_dim_; ++i) {
    x(k++) = s.sigma(i, i).real();
    for (int j = i + 1; j < atom_dim_; ++j) {
      x(k++) = s.sigma(i, j).real();
      x(k++) = s.sigma(i, j).imag();
    }
  }
}

SCState MeanFieldSystem::unpack(const Eigen::VectorXd& x) const {
  SCState s;
  s.alpha = Complex(x(0), x(1));
  s.sigma = MatrixCd::Zero(atom_dim_, atom_dim_);
  int k = 2;
  for (int i = 0; i < atom_dim_; ++i) {
    s.sigma(i, i) = x(k++);
    for (int j = i + 1; j < atom_dim_; ++j) {
      double re = x(k++), imv = x(k++);
      s.sigma(i, j) = Complex(re, imv);
      s.sigma(j, i) = Complex(re, -imv);
    }
  }
  return s;
}

namespace {

// Packed residual with the redundant rows replaced: the trace row (the
// generator conserves it identically) becomes tr(sigma) - 1 and the Im-alpha
// row becomes the gauge constraint Im(alpha) = 0.
Eigen::VectorXd constrained_residual(const MeanFieldSystem& sys,
                                     const Eigen::VectorXd& x) {
  SCState s = sys.unpack(x);
  SCState ds = sys.rhs(s);
  Eigen::VectorXd f;
  sys.pack(ds, f);
  f(1) = s.alpha.imag();
  // index of the last diagonal entry in the packing
  int k = 2, last_diag = 2;
  for (int i = 0; i < sys.atom_dim(); ++i) {
    last_diag = k;
    k += 1 + 2 * (sys.atom_dim() - i - 1);
  }
  f(last_diag) = s.sigma.trace().real() - 1.0;
  return f;
}

bool newton_polish(const MeanFieldSystem& sys, SCState& s) {
  // Rotate the gauge phase so alpha is real and nonnegative.
  if (std::abs(s.alpha) > 0.0) {
    Complex phase = std::conj(s.alpha) / std::abs(s.alpha);
    // gauge action: alpha -> phase*alpha, sigma -> V sigma V^dag with V
    // giving e3-coherences the matching phase. Simplest exact route: rotate
    // via the known symmetry generator (g4, e4 pick up the phase).
    MatrixCd v = MatrixCd::Identity(sys.atom_dim(), sys.atom_dim());
    // labels: g3, g4, e3[, e4] — indices 1 and 3 carry the phase.
    v(1, 1) = phase;
    if (sys.atom_dim() == 4) v(3, 3) = phase;
    // sigma(i,j) = rho(j,i): rho -> V^dag rho V  <=>  sigma -> V^T sigma conj(V)
    s.sigma = (v.transpose() * s.sigma * v.conjugate()).eval();
    s.alpha = std::abs(s.alpha);
  }
  Eigen::VectorXd x;
  sys.pack(s, x);
  const int n = sys.num_reals();
  double f0 = constrained_residual(sys, x).norm();
  for (int it = 0; it < 25; ++it) {
    Eigen::VectorXd f = constrained_residual(sys, x);
    if (f.norm() < 1e-13 * std::max(1.0, x.norm())) break;
    Eigen::MatrixXd jac(n, n);
    for (int j = 0; j < n; ++j) {
      double h = 1e-7 * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd xp = x;
      xp(j) += h;
      jac.col(j) = (constrained_residual(sys, xp) - f) / h;
    }
    Eigen::VectorXd dx = jac.partialPivLu().solve(-f);
    if (!dx.allFinite()) return false;
    x += dx;
  }
  Eigen::VectorXd ff = constrained_residual(sys, x);
  if (!ff.allFinite() || ff.norm() > std::max(1e-11, f0)) return false;
  s = sys.unpack(x);
  return true;
}

}  // namespace

SCState sc_steady(const MeanFieldSystem& sys, const SCState& start,
                  const SCSteadyOptions& opts) {
  const double gamma = sys.params().gamma;
  Eigen::VectorXd x;
  sys.pack(start, x);
  auto rhs_packed = [&](double, const Eigen::VectorXd& v) {
    SCState ds = sys.rhs(sys.unpack(v));
    Eigen::VectorXd out;
    sys.pack(ds, out);
    return out;
  };
  OdeOptions oo;
  oo.rel_tol = 1e-8;
  oo.abs_tol = 1e-10;
  oo.h_max = 0.5 / gamma * 50.0;
  double last_check = 0.0;
  bool converged = false;
  auto observer = [&](double t, const Eigen::VectorXd& v) {
    if (t - last_check < 0.2 / gamma) return true;
    last_check = t;
    Eigen::VectorXd f = rhs_packed(t, v);
    if (f.norm() < opts.rhs_tol * gamma * std::max(1.0, v.norm())) {
      converged = true;
      return false;
    }
    return true;
  };
  integrate_adaptive(rhs_packed, x, 0.0, opts.t_max, oo, std::function<bool(double, const Eigen::VectorXd&)>(observer));
  if (!converged) {
    Eigen::VectorXd f = rhs_packed(0.0, x);
    if (f.norm() > 1e-6 * gamma)
      throw ConvergenceError("sc_steady: no steady state within budget, |rhs| = " +
                             std::to_string(f.norm()));
  }
  SCState s = sys.unpack(x);
  SCState polished = s;
  if (newton_polish(sys, polished)) return polished;
  return s;
}

namespace {

// Near the lasing threshold the relaxation is critically slow and a single
// time integration can stall on either attractor, which breaks the exact
// f-invariance of the solved branch. Solve from the given start and from a
// high-amplitude start and keep the brighter polished root; root selection
// is then a property of the fixed-point set, which scales exactly.
SCState brightest_root(const MeanFieldSystem& sys, const SCState& start,
                       const SCSteadyOptions& opts, double n0) {
  SCState a = sc_steady(sys, start, opts);
  SCState b = sc_steady(sys, sys.initial_state(std::sqrt(n0)), opts);
  return b.intensity() > a.intensity() ? b : a;
}

}  // namespace

SCState sc_steady(const FourStateParams& p, double I3, const SCSteadyOptions& opts) {
  FourStateParams q = p;
  q.set_I3(I3);
  MeanFieldSystem sys(q);
  double n0 = critical_numbers(q).n0;
  return brightest_root(sys, sys.initial_state(opts.alpha_seed_rel * std::sqrt(n0)),
                        opts, n0);
}

namespace {

SCPoint solve_point(const FourStateParams& base, double I3, const SCState& start,
                    const SCSteadyOptions& opts, double n0) {
  SCPoint pt;
  pt.I3 = I3;
  FourStateParams q = base;
  q.set_I3(I3);
  try {
    MeanFieldSystem sys(q);
    pt.state = brightest_root(sys, start, opts, n0);
    pt.alpha2_over_n0 = pt.state.intensity() / n0;
  } catch (const Error& e) {
    pt.converged = false;
    pt.error = e.what();
  }
  return pt;
}

}  // namespace

SCScan sc_scan(const FourStateParams& p, const std::vector<double>& I3_grid,
               double I4, bool bidirectional, const SCSteadyOptions& opts) {
  for (size_t k = 1; k < I3_grid.size(); ++k)
    if (I3_grid[k] <= I3_grid[k - 1]) throw DomainError("sc_scan: grid must be monotone");
  FourStateParams base = p;
  base.set_I4(I4);
  double n0 = critical_numbers(base).n0;
  double seed = opts.alpha_seed_rel * std::sqrt(n0);

  SCScan scan;
  MeanFieldSystem sys0(base);
  SCState prev = sys0.initial_state(seed);
  for (double I3 : I3_grid) {
    SCState start = prev;
    // refresh the seed so the lasing branch stays reachable from a point
    // that converged to alpha = 0
    if (std::abs(start.alpha) < seed) start.alpha += seed;
    SCPoint pt = solve_point(base, I3, start, opts, n0);
    if (pt.converged) prev = pt.state;
    scan.forward.push_back(std::move(pt));
  }
  if (bidirectional) {
    prev = scan.forward.back().converged ? scan.forward.back().state
                                         : sys0.initial_state(seed);
    for (auto it = I3_grid.rbegin(); it != I3_grid.rend(); ++it) {
      SCState start = prev;
      if (std::abs(start.alpha) < seed) start.alpha += seed;
      SCPoint pt = solve_point(base, *it, start, opts, n0);
      if (pt.converged) prev = pt.state;
      scan.backward.push_back(std::move(pt));
    }
    std::reverse(scan.backward.begin(), scan.backward.end());
    for (size_t k = 0; k < I3_grid.size(); ++k) {
      if (!scan.forward[k].converged || !scan.backward[k].converged) continue;
      double a = scan.forward[k].alpha2_over_n0, b = scan.backward[k].alpha2_over_n0;
      if (std::abs(a - b) > 1e-4 * std::max({1.0, a, b})) scan.hysteresis_detected = true;
    }
  }
  return scan;
}

}  // namespace oal
