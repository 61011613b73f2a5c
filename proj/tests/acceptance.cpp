// End-to-end acceptance checks for the one-atom laser library. Each check
// prints exactly one PASS/FAIL line; the exit code is the number of failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oal/dynamics.hpp"
#include "oal/fourstate.hpp"
#include "oal/semiclassical.hpp"
#include "oal/steady.hpp"
#include "oal/trajectories.hpp"
#include "oal/zeeman.hpp"

using namespace oal;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %2d %-34s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

// ---- 1, 2: semiclassical threshold shape and cavity-length invariance ----

std::vector<double> sc_curve(double f, const std::vector<double>& grid, double I4) {
  auto p = scale_cavity(FourStateParams::cs_defaults(), f);
  auto scan = sc_scan(p, grid, I4, false);
  std::vector<double> y;
  for (const auto& pt : scan.forward) y.push_back(pt.alpha2_over_n0);
  return y;
}

void criterion_threshold() {
  auto grid = linspace(0.0, 8.0, 321);
  auto y = sc_curve(1.0, grid, 3.0);
  double peak = *std::max_element(y.begin(), y.end());
  double knee = -1.0, quench = -1.0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0.01 * peak) {
      if (knee < 0) knee = grid[i];
      quench = grid[i];
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "knee I3=%.3f (want 0.8+-0.15), quench I3=%.3f (want 6.5+-1.0)",
                knee, quench);
  bool ok = knee >= 0.65 && knee <= 0.95 && quench >= 5.5 && quench <= 7.5;
  report(1, "semiclassical threshold", ok, buf);
}

void criterion_scaling() {
  auto grid = linspace(0.0, 8.0, 81);
  auto y1 = sc_curve(1.0, grid, 3.0);
  auto y2 = sc_curve(100.0, grid, 3.0);
  auto y3 = sc_curve(2500.0, grid, 3.0);
  double worst = 0.0;
  for (size_t i = 0; i < grid.size(); ++i)
    worst = std::max({worst, std::abs(y2[i] - y1[i]), std::abs(y3[i] - y1[i])});
  char buf[120];
  std::snprintf(buf, sizeof buf, "max |curve(f)-curve(1)| = %.3g (want <= 1e-8)", worst);
  report(2, "scaling invariance f=1,100,2500", worst <= 1e-8, buf);
}

// ---- 3: quantum vs semiclassical in the weak-coupling limit ----

void criterion_weak_coupling() {
  const double f = 2500.0, I4 = 2.0;
  auto p = scale_cavity(FourStateParams::cs_defaults(), f);
  double n0f = critical_numbers(p).n0;
  bool ok_n0f = std::abs(n0f - 33.0) <= 0.02 * 33.0;

  std::vector<double> grid;
  for (double x = 0.0; x <= 2.0001; x += 0.1) grid.push_back(x);
  std::vector<double> extra = {2.25, 2.5, 2.75, 3.0};

  double max_diff = 0.0, diff_at = 0.0;
  double g2_below = 0.0, g2_above_min = 1e300, g2_above_at = 0.0;
  for (double I3 : grid) {
    FourStateParams q = p;
    q.set_I3(I3);
    q.set_I4(I4);
    auto r = steady_state_adaptive(q);
    double sc = sc_steady(q, I3).intensity() / n0f;
    double d = std::abs(r.obs.n_bar / n0f - sc);
    if (d > max_diff) { max_diff = d; diff_at = I3; }
    if (std::abs(I3 - 0.1) < 1e-9) g2_below = r.obs.g2_0.value_or(0.0);
    if (I3 >= 1.0 && r.obs.g2_0 && *r.obs.g2_0 < g2_above_min) {
      g2_above_min = *r.obs.g2_0;
      g2_above_at = I3;
    }
  }
  for (double I3 : extra) {
    FourStateParams q = p;
    q.set_I3(I3);
    q.set_I4(I4);
    auto r = steady_state_adaptive(q);
    if (r.obs.g2_0 && *r.obs.g2_0 < g2_above_min) {
      g2_above_min = *r.obs.g2_0;
      g2_above_at = I3;
    }
  }

  bool ok_diff = max_diff <= 0.1;
  bool ok_g2b = std::abs(g2_below - 2.0) <= 0.2;
  bool ok_g2a = std::abs(g2_above_min - 1.0) <= 0.1;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "n0f=%.2f; max|nbar-sc|/n0f=%.3f at I3=%.2f (want <=0.1); "
                "g2(I3=0.1)=%.3f (want 2.0+-0.2); min g2 above=%.3f at I3=%.2f (want 1.0+-0.1)",
                n0f, max_diff, diff_at, g2_below, g2_above_min, g2_above_at);
  report(3, "quantum vs semiclassical f=2500", ok_n0f && ok_diff && ok_g2b && ok_g2a, buf);
}

// ---- 4: strong-coupling regime, qualitative shape + reproducibility ----

void criterion_strong_coupling() {
  auto p = FourStateParams::cs_defaults();
  double n0 = critical_numbers(p).n0;
  std::vector<double> grid;
  for (double x = 0.25; x <= 8.0001; x += 0.25) grid.push_back(x);
  for (double x = 9.0; x <= 30.0001; x += 1.0) grid.push_back(x);

  std::vector<double> nb, g2, Q;
  for (double I3 : grid) {
    FourStateParams q = p;
    q.set_I3(I3);
    q.set_I4(3.0);
    auto r = steady_state_adaptive(q);
    nb.push_back(r.obs.n_bar / n0);
    g2.push_back(r.obs.g2_0.value_or(0.0));
    Q.push_back(r.obs.mandel_Q.value_or(0.0));
  }
  size_t ipk = std::max_element(nb.begin(), nb.end()) - nb.begin();
  bool peak_interior = ipk > 0 && ipk + 1 < grid.size();
  bool g2_sub = g2[ipk] < 1.0;
  bool g2_rising = g2.back() > g2[ipk];
  for (size_t i = ipk; g2_rising && i + 1 < g2.size(); ++i)
    if (g2[i + 1] < g2[i] - 1e-3) g2_rising = false;
  int first_neg = -1, last_neg = -1;
  bool contiguous = true;
  for (size_t i = 0; i < Q.size(); ++i) {
    if (Q[i] < 0) {
      if (first_neg < 0) first_neg = (int)i;
      last_neg = (int)i;
    }
  }
  for (int i = first_neg; first_neg >= 0 && i <= last_neg; ++i)
    if (Q[i] >= 0) contiguous = false;

  // reproducibility: re-solving selected points reproduces the numbers
  double rep = 0.0;
  for (size_t i : {size_t(3), ipk, grid.size() - 2}) {
    FourStateParams q = p;
    q.set_I3(grid[i]);
    q.set_I4(3.0);
    auto r = steady_state_adaptive(q);
    rep = std::max(rep, std::abs(r.obs.n_bar / n0 - nb[i]) / std::max(nb[i], 1e-12));
    rep = std::max(rep, std::abs(r.obs.g2_0.value_or(0.0) - g2[i]));
  }

  bool ok = peak_interior && g2_sub && g2_rising && first_neg >= 0 && contiguous && rep <= 1e-8;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "peak n/n0=%.2f at I3=%.2f; g2(peak)=%.3f (<1: %s, rising: %s); "
                "Q<0 on I3=[%.2f,%.2f] contiguous: %s; rerun drift=%.2g",
                nb[ipk], grid[ipk], g2[ipk], g2_sub ? "yes" : "no", g2_rising ? "yes" : "no",
                first_neg >= 0 ? grid[first_neg] : -1.0, last_neg >= 0 ? grid[last_neg] : -1.0,
                contiguous ? "yes" : "no", rep);
  report(4, "strong-coupling regime f=1", ok, buf);
}

// ---- 5: Purcell limit ----

void criterion_purcell() {
  const double f = 1.0 / 99.0;
  auto p = scale_cavity(FourStateParams::cs_defaults(), f);
  double n0f = critical_numbers(p).n0;
  bool ok_n0f = std::abs(n0f - 1.31e-4) <= 0.02 * 1.31e-4;

  bool ok_g2 = true, ok_q = true, ok_r = true, ok_beta = true;
  double worst_g2 = 0.0, worst_q = 0.0, worst_r = 0.0, beta = 0.0;
  for (double I3 : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    FourStateParams q = p;
    q.set_I3(I3);
    q.set_I4(3.0);
    auto r = steady_state_adaptive(q);
    double g2 = r.obs.g2_0.value_or(0.0);
    double qrel = std::abs(r.obs.mandel_Q.value_or(0.0) + r.obs.n_bar) / r.obs.n_bar;
    beta = r.obs.beta_43;
    double r_t = beta / (1.0 - beta);
    double rrel = std::abs(r.obs.ratio_R - r_t) / r_t;
    worst_g2 = std::max(worst_g2, g2);
    worst_q = std::max(worst_q, qrel);
    worst_r = std::max(worst_r, rrel);
    if (g2 > 0.05) ok_g2 = false;
    if (qrel > 0.1) ok_q = false;
    if (rrel > 0.2) ok_r = false;
  }
  if (std::abs(beta - 0.99) > 0.005) ok_beta = false;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "n0f=%.4g; max g2=%.2g (<=0.05); max |Q+n|/n=%.2g (<=0.1); "
                "max R err=%.2g (<=0.2); beta43=%.4f (0.99+-0.005)",
                n0f, worst_g2, worst_q, worst_r, beta);
  report(5, "Purcell limit f=1/99", ok_n0f && ok_g2 && ok_q && ok_r && ok_beta, buf);
}

// ---- 6: vacuum-Rabi structure of n(Delta3) ----

void criterion_vacuum_rabi() {
  auto p = FourStateParams::cs_defaults();
  p.set_I4(3.0);
  p.fock_truncation = 12;
  std::vector<double> d3;
  for (double nu = -30.0; nu <= 30.001; nu += 0.5) d3.push_back(two_pi_mhz(nu));

  auto weak = rabi_scan(p, 0.1, d3);
  double best_pos = 0.0, best_neg = 0.0, vpos = -1.0, vneg = -1.0;
  for (const auto& pt : weak) {
    double nu = pt.delta3 / (2.0 * M_PI);
    if (nu > 0 && pt.n_bar > vpos) { vpos = pt.n_bar; best_pos = nu; }
    if (nu < 0 && pt.n_bar > vneg) { vneg = pt.n_bar; best_neg = nu; }
  }
  bool ok_weak = std::abs(best_pos - 16.0) <= 1.0 && std::abs(best_neg + 16.0) <= 1.0;

  auto strong = rabi_scan(p, 10.0, d3);
  double at0 = 0.0, near16 = 0.0;
  for (const auto& pt : strong) {
    double nu = pt.delta3 / (2.0 * M_PI);
    if (std::abs(nu) < 0.26) at0 = pt.n_bar;
    if (std::abs(std::abs(nu) - 16.0) <= 4.0) near16 = std::max(near16, pt.n_bar);
  }
  bool ok_strong = at0 > near16;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "I3=0.1 maxima at %+.1f/%+.1f MHz (want +-16+-1); "
                "I3=10: n(0)=%.4f vs max near +-16 = %.4f (doublet absent: %s)",
                best_neg, best_pos, at0, near16, ok_strong ? "yes" : "no");
  report(6, "vacuum-Rabi scan", ok_weak && ok_strong, buf);
}

// ---- 7: emission spectrum, regression vs heterodyne ----

std::vector<double> gauss_smooth(const std::vector<double>& y, double df, double sigma) {
  int n = (int)y.size(), w = (int)std::ceil(3.0 * sigma / df);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0, norm = 0.0;
    for (int j = std::max(0, i - w); j < std::min(n, i + w + 1); ++j) {
      double g = std::exp(-0.5 * std::pow((j - i) * df / sigma, 2));
      acc += g * y[j];
      norm += g;
    }
    out[i] = acc / norm;
  }
  return out;
}

// argmax over nu >= 0 of the even part of the smoothed spectrum
double sym_peak(const Spectrum& s, double sigma) {
  double df = s.freqs[1] - s.freqs[0];
  auto sm = gauss_smooth(s.phi, df, sigma);
  int n = (int)sm.size(), bi = 0;
  double bv = -1e300;
  for (int i = 0; i < n; ++i) {
    if (s.freqs[i] < 0) continue;
    int mi = i - (int)std::llround(2.0 * s.freqs[i] / df);
    double v = (mi >= 0 && mi < n) ? 0.5 * (sm[i] + sm[mi]) : sm[i];
    if (v > bv) { bv = v; bi = i; }
  }
  return s.freqs[bi];
}

void criterion_spectrum() {
  auto p = FourStateParams::cs_defaults();
  p.set_I3(0.5);
  p.set_I4(0.5);
  p.fock_truncation = 8;
  auto model = build_four_state(p);
  auto rho = steady_state(model);

  std::vector<double> taus;
  for (double t = 0.0; t <= 30.0; t += 0.002) taus.push_back(t);
  auto corr = field_correlation(model, rho, taus);
  auto spec = optical_spectrum(corr, 4);
  double pmax = *std::max_element(spec.phi.begin(), spec.phi.end());

  // local maxima, neighborhood +-0.5 MHz, visible on a log scale
  double df = spec.freqs[1] - spec.freqs[0];
  int w = std::max(1, (int)std::lround(0.5 / df));
  bool max_pos = false, max_neg = false;
  for (int i = w; i + w < (int)spec.phi.size(); ++i) {
    bool is_max = spec.phi[i] > 1e-8 * pmax;
    for (int j = i - w; is_max && j <= i + w; ++j)
      if (j != i && spec.phi[j] >= spec.phi[i]) is_max = false;
    if (!is_max) continue;
    double nu = spec.freqs[i];
    if (std::abs(nu - 16.0) <= 1.0) max_pos = true;
    if (std::abs(nu + 16.0) <= 1.0) max_neg = true;
  }

  // simulated heterodyne record vs the regression spectrum: dominant peak
  // position agreement within one analysis bin
  VectorCd psi0 = VectorCd::Zero(model.space->total_dim());
  psi0(0) = 1.0;
  HeterodyneOptions ho;
  ho.segment_length = 512;  // ~1 MHz bins, matched to the linewidth
  ho.seed = 20260826;
  auto het = heterodyne_spectrum(model, psi0, two_pi_mhz(4.2), 1600.0, ho);
  double df_h = het.freqs[1] - het.freqs[0];
  double nu_reg = sym_peak(spec, 1.5);
  double nu_het = sym_peak(het, 1.5);
  bool ok_het = std::abs(nu_het - nu_reg) <= df_h;

  char buf[220];
  std::snprintf(buf, sizeof buf,
                "local maxima at +-16+-1 MHz: %s/%s; dominant peak regression %.3f vs "
                "heterodyne %.3f MHz (bin %.3f): %s",
                max_neg ? "yes" : "no", max_pos ? "yes" : "no", nu_reg, nu_het, df_h,
                ok_het ? "agree" : "disagree");
  report(7, "spectrum: regression + heterodyne", max_pos && max_neg && ok_het, buf);
}

// ---- 8: trajectory ensemble reproduces the master equation ----

void criterion_mcwf() {
  auto p = FourStateParams::cs_defaults();
  p.set_I3(1.0);
  p.set_I4(3.0);
  p.fock_truncation = 6;
  auto model = build_four_state(p);
  auto rho = steady_state(model);
  auto obs = steady_observables(rho, model, p);
  double pe3 = obs.populations.at("e3");

  const double bin = 0.01;
  std::vector<double> taus = {0.0, 0.25 * bin, 0.5 * bin, 0.75 * bin, bin};
  auto g2reg = g2_tau(model, rho, taus);
  double g2_ref = 0.0;
  for (auto v : g2reg.values) g2_ref += v.real();
  g2_ref /= (double)g2reg.values.size();

  VectorCd psi0 = VectorCd::Zero(model.space->total_dim());
  psi0(0) = 1.0;
  EnsembleOptions eo;
  eo.transient = 5.0;
  eo.trajectory.sampled_observables = {"n", "pop_e3"};
  auto ens = ensemble_average(fixed_family(model), psi0, 1000, 30.0, 8261, eo);
  auto en = ens.averages.at("n");
  auto ee = ens.averages.at("pop_e3");
  auto g2c = g2_from_clicks(ens.records, bin, 0.25, {"cavity"}, 0.0, 5.0);
  double zn = std::abs(en.mean - obs.n_bar) / en.se;
  double ze = std::abs(ee.mean - pe3) / ee.se;
  double zg = std::abs(g2c.g2[0] - g2_ref) / g2c.se[0];
  bool ok = zn <= 3.0 && ze <= 3.0 && zg <= 3.0;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "n: %.4f+-%.4f vs %.4f (%.1f se); e3: %.4f+-%.4f vs %.4f (%.1f se); "
                "g2(0): %.2f+-%.2f vs %.2f (%.1f se)",
                en.mean, en.se, obs.n_bar, zn, ee.mean, ee.se, pe3, ze, g2c.g2[0], g2c.se[0],
                g2_ref, zg);
  report(8, "trajectories vs master equation", ok, buf);
}

// ---- 9: multilevel model photon statistics (reduced smoke) ----

double zeeman_g2_first(const ZeemanParams& base, double x, int n_traj, uint64_t seed,
                       G2Curve* curve) {
  ZeemanParams p = base;
  p.set_I3((9.0 / 7.0) * x * 13.0);
  auto m = build_zeeman(p);
  VectorCd psi0 = VectorCd::Zero(m.space->total_dim());
  psi0(m.space->composite_index({zeeman_atomic_factor().index_of("g3:+0"), 0, 0})) = 1.0;
  EnsembleOptions eo;
  eo.transient = 3.0;
  eo.trajectory.sample_dt = 0.0;
  auto ens = ensemble_average(fixed_family(m), psi0, n_traj, 40.0, seed, eo);
  auto g2 = g2_from_clicks(ens.records, 0.05, 0.6, {"cavity_a", "cavity_b"}, 0.0, 3.0);
  if (curve) *curve = g2;
  return g2.g2[0];
}

void criterion_zeeman_g2() {
  auto base = ZeemanParams::cs_defaults();
  base.set_I4(13.0);
  base.phase_model = ConstantPhase{M_PI / 2};
  base.include_offresonant_e4 = false;  // static model for the reduced smoke

  G2Curve c17;
  double g2_17 = zeeman_g2_first(base, 0.17, 64, 901, &c17);
  double g2_83 = zeeman_g2_first(base, 0.83, 64, 902, nullptr);
  double rise_max = 0.0;
  for (size_t i = 0; i < c17.taus.size(); ++i)
    if (c17.taus[i] >= 0.05 && c17.taus[i] <= 0.5) rise_max = std::max(rise_max, c17.g2[i]);

  // theta = 0 pumps into dark states: no cavity output after the transient
  ZeemanParams dark = base;
  dark.phase_model = ConstantPhase{0.0};
  dark.set_I3((9.0 / 7.0) * 0.5 * 13.0);
  auto md = build_zeeman(dark);
  VectorCd psi0 = VectorCd::Zero(md.space->total_dim());
  psi0(md.space->composite_index({zeeman_atomic_factor().index_of("g3:+0"), 0, 0})) = 1.0;
  EnsembleOptions eo;
  eo.trajectory.sample_dt = 0.0;
  auto ens = ensemble_average(fixed_family(md), psi0, 6, 30.0, 903, eo);
  long late_cavity = 0;
  for (const auto& r : ens.records)
    for (const auto& c : r.clicks)
      if (c.t > 15.0 && (c.channel == "cavity_a" || c.channel == "cavity_b")) ++late_cavity;

  bool ok = g2_17 < 1.0 && g2_17 < rise_max && g2_83 > g2_17 && late_cavity == 0;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "g2(0): x=0.17 %.3f (<1), x=0.83 %.3f (>x=0.17); max g2(tau in [0.05,0.5]) "
                "= %.3f (> g2(0)); theta=0 late cavity clicks = %ld (want 0)",
                g2_17, g2_83, rise_max, late_cavity);
  report(9, "multilevel photon statistics", ok, buf);
}

// ---- 10: dense oracles on every small model ----

MatrixCd dense_lindblad_apply(const ModelSpec& m, const MatrixCd& rho) {
  MatrixCd H = MatrixCd(m.constant_hamiltonian());
  MatrixCd out = Complex(0, -1) * (H * rho - rho * H);
  for (const auto& ch : m.collapse_ops) {
    MatrixCd c = MatrixCd(ch.op.mat);
    MatrixCd cdc = c.adjoint() * c;
    out += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
  }
  return out;
}

MatrixCd dense_steady(const ModelSpec& m) {
  int d = m.dim();
  MatrixCd L = MatrixCd::Zero(d * d, d * d);
  for (int col = 0; col < d * d; ++col) {
    MatrixCd E = MatrixCd::Zero(d, d);
    E(col % d, col / d) = 1.0;
    MatrixCd out = dense_lindblad_apply(m, E);
    L.col(col) = Eigen::Map<const VectorCd>(out.data(), d * d);
  }
  Eigen::ComplexEigenSolver<MatrixCd> es(L);
  int best = 0;
  for (int i = 1; i < d * d; ++i)
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(best))) best = i;
  VectorCd v = es.eigenvectors().col(best);
  MatrixCd rho = Eigen::Map<const MatrixCd>(v.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace();
  return rho;
}

double trace_distance(const MatrixCd& a, const MatrixCd& b) {
  Eigen::SelfAdjointEigenSolver<MatrixCd> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

void criterion_oracles() {
  std::vector<std::pair<std::string, ModelSpec>> models;

  {  // driven damped cavity
    auto sp = std::make_shared<HilbertSpace>(std::vector<Factor>{Factor::fock(7)});
    ModelSpec m;
    m.space = sp;
    auto a = embed(fock_destroy(7), 0, sp);
    m.hamiltonian_terms.push_back(
        {two_pi_mhz(1.5) * (a + a.adjoint()), TimeDep::constant(), "drive"});
    m.add_channel(std::sqrt(two_pi_mhz(4.2)) * a, "cavity");
    models.emplace_back("driven cavity dim 8", m);
  }
  {
    auto p = FourStateParams::cs_defaults();
    p.set_I3(1.0);
    p.set_I4(3.0);
    p.fock_truncation = 1;
    models.emplace_back("four-state dim 8", build_four_state(p));
    p.fock_truncation = 7;
    models.emplace_back("four-state dim 32", build_four_state(p));
    p.fock_truncation = 9;
    models.emplace_back("recycling variant dim 30", build_raman_variant(p, 7.0 / 12.0));
  }
  double worst_gen = 0.0, worst_ss = 0.0;
  std::string note;
  for (auto& [name, m] : models) {
    auto L = liouvillian(m);
    int d = m.dim();
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    MatrixCd X(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) X(i, j) = Complex(nd(rng), nd(rng));
    double gen = (L.apply(X) - dense_lindblad_apply(m, X)).cwiseAbs().maxCoeff();
    worst_gen = std::max(worst_gen, gen);
    try {
      double ss = trace_distance(steady_state(m), dense_steady(m));
      worst_ss = std::max(worst_ss, ss);
    } catch (const DegenerateSteadyStateError&) {
      note = "; " + name + ": degenerate steady state, generator check only";
    }
  }
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "max generator mismatch %.2g (<=1e-12); max steady-state trace distance "
                "%.2g (<=1e-9)%s",
                worst_gen, worst_ss, note.c_str());
  report(10, "dense oracle suite", worst_gen <= 1e-12 && worst_ss <= 1e-9, buf);
}

}  // namespace

int main() {
  criterion_threshold();
  criterion_scaling();
  criterion_weak_coupling();
  criterion_strong_coupling();
  criterion_purcell();
  criterion_vacuum_rabi();
  criterion_spectrum();
  criterion_mcwf();
  criterion_zeeman_g2();
  criterion_oracles();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
