#include "oal/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace oal {

uint64_t splitmix64(uint64_t seed, uint64_t index) {
  uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string to_text(const JumpRecord& rec) {
  std::ostringstream os;
  os.precision(17);
  os << "seed " << rec.seed << "\n";
  os << "span " << rec.t_end << "\n";
  for (const auto& [k, v] : rec.metadata) os << "meta " << k << " " << v << "\n";
  for (const auto& c : rec.clicks) os << "click " << c.t << " " << c.channel << "\n";
  return os.str();
}

JumpRecord record_from_text(const std::string& text) {
  JumpRecord rec;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "seed") ls >> rec.seed;
    else if (tag == "span") ls >> rec.t_end;
    else if (tag == "meta") {
      std::string k; double v;
      ls >> k >> v;
      rec.metadata[k] = v;
    } else if (tag == "click") {
      JumpClick c;
      ls >> c.t >> c.channel;
      rec.clicks.push_back(c);
    } else {
      throw ConfigError("click record: unknown line tag '" + tag + "'");
    }
    if (ls.fail()) throw ConfigError("click record: malformed line '" + line + "'");
  }
  return rec;
}

namespace {

// Non-Hermitian drift plus jump channels, with optional coherent local
// oscillator offsets on individual channels.
class McwfEngine {
 public:
  McwfEngine(const ModelSpec& model, const TrajectoryOptions& opts)
      : dim_(model.dim()) {
    SparseCd h_static(dim_, dim_);
    for (const auto& term : model.hamiltonian_terms) {
      if (term.dep.is_constant())
        h_static += term.dep.eval(0.0) * term.op.mat;
      else
        timedep_.emplace_back(term.op.mat, term.dep);
    }
    drift_ = Complex(0.0, -1.0) * h_static;
    double lo_rate = 0.0;
    for (const auto& ch : model.collapse_ops) {
      Channel c;
      c.op = ch.op.mat;
      c.label = ch.label;
      for (const auto& lo : opts.local_oscillators)
        if (lo.channel == ch.label) {
          c.lo_amp = lo.amplitude;
          c.lo_omega = lo.delta_omega;
          lo_rate += lo.amplitude * lo.amplitude;
        }
      drift_ -= Complex(0.5, 0.0) * (SparseCd(c.op.adjoint()) * c.op);
      channels_.push_back(std::move(c));
    }
    if (lo_rate > 0.0) {
      SparseCd id(dim_, dim_);
      id.setIdentity();
      drift_ -= Complex(0.5 * lo_rate, 0.0) * id;
    }
  }

  int dim() const { return dim_; }
  int num_channels() const { return static_cast<int>(channels_.size()); }
  const std::string& label(int k) const { return channels_[k].label; }

  VectorCd deriv(double t, const VectorCd& psi) const {
    VectorCd out = drift_ * psi;
    for (const auto& [h, dep] : timedep_)
      out += Complex(0.0, -dep.eval(t)) * (h * psi);
    for (const auto& c : channels_) {
      if (c.lo_amp == 0.0) continue;
      // Shifting the channel c -> c + beta leaves the master equation
      // invariant only together with the Hamiltonian correction
      // -(i/2)(beta* c - beta c^dag); combined with the widened
      // -(1/2)(c+beta)^dag(c+beta) decay the cross terms reduce to -beta* c.
      Complex beta = c.lo_amp * std::exp(Complex(0.0, c.lo_omega * t));
      out -= std::conj(beta) * (c.op * psi);
    }
    return out;
  }

  // |c_k psi|^2 weights at time t.
  void jump_weights(double t, const VectorCd& psi, std::vector<double>& w,
                    std::vector<VectorCd>& jumped) const {
    const int n = num_channels();
    w.assign(n, 0.0);
    jumped.assign(n, VectorCd());
    for (int k = 0; k < n; ++k) {
      const auto& c = channels_[k];
      VectorCd cpsi = c.op * psi;
      if (c.lo_amp != 0.0)
        cpsi += c.lo_amp * std::exp(Complex(0.0, c.lo_omega * t)) * psi;
      w[k] = cpsi.squaredNorm();
      jumped[k] = std::move(cpsi);
    }
  }

 private:
  struct Channel {
    SparseCd op;
    std::string label;
    double lo_amp = 0.0;
    double lo_omega = 0.0;
  };
  int dim_;
  SparseCd drift_;
  std::vector<std::pair<SparseCd, TimeDep>> timedep_;
  std::vector<Channel> channels_;
};

}  // namespace

JumpRecord run_trajectory(const ModelSpec& model, const VectorCd& psi0,
                          double t_max, uint64_t seed,
                          const TrajectoryOptions& opts) {
  const int d = model.dim();
  if (psi0.size() != d) throw DimensionError("run_trajectory: state dimension mismatch");
  if (t_max <= 0.0) throw DomainError("run_trajectory: t_max must be positive");

  McwfEngine eng(model, opts);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  // Sampled observables: all Hermitian ones unless a list is given.
  std::vector<std::pair<std::string, const SparseCd*>> sampled;
  if (opts.sample_dt > 0.0) {
    if (opts.sampled_observables.empty()) {
      for (const auto& [name, op] : model.observables)
        if (op.is_hermitian()) sampled.emplace_back(name, &op.mat);
    } else {
      for (const auto& name : opts.sampled_observables)
        sampled.emplace_back(name, &model.observable(name).mat);
    }
  }

  JumpRecord rec;
  rec.seed = seed;
  rec.t_end = t_max;
  for (auto& [name, op] : sampled) rec.samples[name] = {};

  auto rhs = [&eng](double t, const VectorCd& y) { return eng.deriv(t, y); };

  VectorCd psi = psi0.normalized();
  double t = 0.0;
  double r = uniform(rng);
  double next_sample = (opts.sample_dt > 0.0) ? 0.0 : 2.0 * t_max;
  double h = 1e-4;
  VectorCd k1 = rhs(t, psi), y5;
  std::vector<double> weights;
  std::vector<VectorCd> jumped;

  auto take_sample = [&](double ts, const VectorCd& y) {
    double nrm2 = y.squaredNorm();
    rec.sample_times.push_back(ts);
    for (auto& [name, op] : sampled)
      rec.samples[name].push_back(std::real(expectation(y, *op)) / nrm2);
  };

  long steps = 0;
  while (t < t_max) {
    if (++steps > 200000000L)
      throw ConvergenceError("run_trajectory: step budget exhausted at t=" +
                             std::to_string(t));
    if (next_sample <= t) {
      take_sample(t, psi);
      next_sample += opts.sample_dt;
    }
    double t_stop = std::min({t_max, next_sample});
    double h_try = std::min(h, t_stop - t);
    if (h_try < 1e-14) {
      t = t_stop;
      continue;
    }
    double err;
    VectorCd k1_in = k1;
    dopri5_step(rhs, t, h_try, psi, k1, y5, err, opts.abs_tol, opts.rel_tol);
    if (err > 1.0) {
      k1 = k1_in;
      h = h_try * std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }
    double t_new = t + h_try;
    if (y5.squaredNorm() < r) {
      // The norm crossed the draw inside this step: bisect the jump time.
      double lo = t, hi = t_new;
      VectorCd psi_lo = psi;
      while (hi - lo > opts.jump_time_res) {
        double mid = 0.5 * (lo + hi);
        VectorCd y = psi_lo;
        OdeOptions oo;
        oo.rel_tol = opts.rel_tol;
        oo.abs_tol = opts.abs_tol;
        oo.h_init = std::min(h, mid - lo);
        integrate_adaptive(rhs, y, lo, mid, oo);
        if (y.squaredNorm() < r) {
          hi = mid;
        } else {
          lo = mid;
          psi_lo = std::move(y);
        }
      }
      double t_jump = hi;
      eng.jump_weights(t_jump, psi_lo, weights, jumped);
      double total = 0.0;
      for (double w : weights) total += w;
      if (total <= 0.0)
        throw ConvergenceError("run_trajectory: vanishing jump weights");
      double pick = uniform(rng) * total;
      int k = 0;
      for (; k + 1 < static_cast<int>(weights.size()); ++k) {
        pick -= weights[k];
        if (pick <= 0.0) break;
      }
      rec.clicks.push_back({t_jump, eng.label(k)});
      psi = jumped[k].normalized();
      t = t_jump;
      r = uniform(rng);
      k1 = rhs(t, psi);
    } else {
      psi = y5;
      t = t_new;
      h = h_try * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }
  }
  if (opts.sample_dt > 0.0 && (rec.sample_times.empty() || rec.sample_times.back() < t_max))
    take_sample(t_max, psi);
  return rec;
}

ModelFamily fixed_family(ModelSpec model) {
  auto shared = std::make_shared<ModelSpec>(std::move(model));
  return [shared](std::mt19937_64&) { return FamilyDraw{*shared, {}}; };
}

ModelFamily zeeman_family(const ZeemanParams& base, double v_min, double v_max) {
  return [base, v_min, v_max](std::mt19937_64& rng) {
    FamilyDraw draw;
    if (std::holds_alternative<ConstantVelocity>(base.phase_model)) {
      std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
      std::uniform_real_distribution<double> speed(v_min, v_max);
      ZeemanParams p = base;
      ConstantVelocity cv;
      cv.theta0_3x = phase(rng);
      cv.theta0_3z = phase(rng);
      cv.theta0_4x = phase(rng);
      cv.theta0_4z = phase(rng);
      cv.v_x = speed(rng);
      cv.v_z = speed(rng);
      p.phase_model = cv;
      draw.model = build_zeeman(p);
      draw.metadata = {{"theta0_3x", cv.theta0_3x}, {"theta0_3z", cv.theta0_3z},
                       {"theta0_4x", cv.theta0_4x}, {"theta0_4z", cv.theta0_4z},
                       {"v_x", cv.v_x},             {"v_z", cv.v_z}};
    } else {
      draw.model = build_zeeman(base);
    }
    return draw;
  };
}

namespace {

double time_average(const std::vector<double>& times, const std::vector<double>& vals,
                    double transient) {
  double acc = 0.0;
  int n = 0;
  for (size_t i = 0; i < times.size(); ++i)
    if (times[i] >= transient) {
      acc += vals[i];
      ++n;
    }
  return n > 0 ? acc / n : 0.0;
}

Estimate pool(const std::vector<double>& xs) {
  Estimate e;
  const size_t n = xs.size();
  if (n == 0) return e;
  for (double x : xs) e.mean += x;
  e.mean /= static_cast<double>(n);
  if (n > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - e.mean) * (x - e.mean);
    var /= static_cast<double>(n - 1);
    e.se = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

}  // namespace

EnsembleResult ensemble_average(const ModelFamily& family, const VectorCd& psi0,
                                int n_traj, double t_max, uint64_t seed_base,
                                const EnsembleOptions& opts) {
  if (n_traj < 1) throw DomainError("ensemble_average: n_traj must be >= 1");
  EnsembleResult res;
  res.n_traj = n_traj;
  res.records.resize(n_traj);
  std::vector<int> ok(n_traj, 0);
  std::vector<std::string> errors(n_traj);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int k = next.fetch_add(1);
      if (k >= n_traj) return;
      try {
        std::mt19937_64 rng(splitmix64(seed_base, 2 * k));
        FamilyDraw draw = family(rng);
        JumpRecord rec = run_trajectory(draw.model, psi0, t_max,
                                        splitmix64(seed_base, 2 * k + 1),
                                        opts.trajectory);
        rec.metadata.insert(draw.metadata.begin(), draw.metadata.end());
        res.records[k] = std::move(rec);
        ok[k] = 1;
      } catch (const Error& e) {
        errors[k] = e.what();
      }
    }
  };
  int n_threads = std::max(1, opts.n_threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool_threads;
    for (int i = 0; i < n_threads; ++i) pool_threads.emplace_back(worker);
    for (auto& th : pool_threads) th.join();
  }

  std::vector<JumpRecord> kept;
  for (int k = 0; k < n_traj; ++k) {
    if (ok[k]) kept.push_back(std::move(res.records[k]));
    else ++res.failures;
  }
  res.records = std::move(kept);
  if (res.failures > opts.max_failure_fraction * n_traj) {
    std::string first;
    for (const auto& e : errors)
      if (!e.empty()) { first = e; break; }
    throw StatisticsError("ensemble_average: " + std::to_string(res.failures) +
                          " of " + std::to_string(n_traj) +
                          " trajectories failed; first error: " + first);
  }

  std::map<std::string, std::vector<double>> per_obs;
  for (const auto& rec : res.records)
    for (const auto& [name, vals] : rec.samples)
      per_obs[name].push_back(time_average(rec.sample_times, vals, opts.transient));
  for (const auto& [name, xs] : per_obs) res.averages[name] = pool(xs);
  return res;
}

G2Curve g2_from_clicks(const std::vector<JumpRecord>& records, double bin_width,
                       double window, const std::vector<std::string>& channels,
                       double smoothing_sigma, double transient) {
  if (bin_width <= 0.0) throw DomainError("g2_from_clicks: bin width must be positive");
  if (window <= bin_width) throw DomainError("g2_from_clicks: window too small");
  const int n_bins = static_cast<int>(std::ceil(window / bin_width));

  auto detected = [&](const std::string& label) {
    return std::find(channels.begin(), channels.end(), label) != channels.end();
  };

  std::vector<std::vector<double>> per_traj(n_bins);
  long total_clicks = 0;
  for (const auto& rec : records) {
    std::vector<double> ts;
    for (const auto& c : rec.clicks)
      if (c.t >= transient && detected(c.channel)) ts.push_back(c.t);
    std::sort(ts.begin(), ts.end());
    total_clicks += static_cast<long>(ts.size());
    double T = rec.t_end - transient;
    if (ts.size() < 2 || T <= window) continue;
    double rate = static_cast<double>(ts.size()) / T;
    std::vector<double> counts(n_bins, 0.0);
    for (size_t i = 0; i < ts.size(); ++i)
      for (size_t j = i + 1; j < ts.size(); ++j) {
        double tau = ts[j] - ts[i];
        if (tau >= window) break;
        counts[static_cast<int>(tau / bin_width)] += 1.0;
      }
    for (int k = 0; k < n_bins; ++k) {
      double t_eff = T - (k + 0.5) * bin_width;
      per_traj[k].push_back(counts[k] / (rate * rate * t_eff * bin_width));
    }
  }
  if (total_clicks < 2)
    throw StatisticsError("g2_from_clicks: only " + std::to_string(total_clicks) +
                          " clicks on the detected channels");
  if (per_traj[0].empty())
    throw StatisticsError("g2_from_clicks: no trajectory had enough clicks for pairs");

  G2Curve out;
  out.taus.resize(n_bins);
  out.g2.resize(n_bins);
  out.se.resize(n_bins);
  for (int k = 0; k < n_bins; ++k) {
    out.taus[k] = (k + 0.5) * bin_width;
    Estimate e = pool(per_traj[k]);
    out.g2[k] = e.mean;
    out.se[k] = e.se;
  }

  if (smoothing_sigma > 0.0) {
    int half = std::max(1, static_cast<int>(std::ceil(4.0 * smoothing_sigma / bin_width)));
    std::vector<double> kernel(2 * half + 1);
    double norm = 0.0;
    for (int i = -half; i <= half; ++i) {
      double x = i * bin_width / smoothing_sigma;
      kernel[i + half] = std::exp(-0.5 * x * x);
      norm += kernel[i + half];
    }
    for (double& kv : kernel) kv /= norm;
    std::vector<double> sm(n_bins, 0.0), sm_se(n_bins, 0.0);
    for (int k = 0; k < n_bins; ++k) {
      double acc = 0.0, acc_se2 = 0.0, used = 0.0;
      for (int i = -half; i <= half; ++i) {
        int j = k + i;
        if (j < 0) j = -j - 1;  // reflect at tau = 0 (stationarity)
        if (j >= n_bins) continue;
        acc += kernel[i + half] * out.g2[j];
        acc_se2 += kernel[i + half] * kernel[i + half] * out.se[j] * out.se[j];
        used += kernel[i + half];
      }
      sm[k] = acc / used;
      sm_se[k] = std::sqrt(acc_se2) / used;
    }
    out.g2 = std::move(sm);
    out.se = std::move(sm_se);
  }
  return out;
}

namespace {

// In-place iterative radix-2 FFT.
void fft(std::vector<Complex>& a) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw DomainError("fft: length must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * M_PI / static_cast<double>(len);
    Complex wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        Complex u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

Spectrum heterodyne_spectrum(const ModelSpec& model, const VectorCd& psi0,
                             double lo_flux, double t_max,
                             const HeterodyneOptions& opts) {
  if (lo_flux <= 0.0)
    throw DomainError("heterodyne_spectrum: LO flux must be positive");
  TrajectoryOptions topts;
  topts.sample_dt = 0.0;
  topts.local_oscillators = {{opts.channel, std::sqrt(lo_flux), opts.delta_omega}};
  JumpRecord rec = run_trajectory(model, psi0, t_max, opts.seed, topts);

  // Binned photocurrent, mean removed.
  const double t0 = opts.transient;
  const size_t n_bins = static_cast<size_t>((t_max - t0) / opts.bin_dt);
  const size_t L = static_cast<size_t>(opts.segment_length);
  if (n_bins < 2 * L)
    throw StatisticsError("heterodyne_spectrum: record too short for the Welch segment");
  std::vector<double> counts(n_bins, 0.0);
  for (const auto& c : rec.clicks) {
    if (c.channel != opts.channel || c.t < t0) continue;
    size_t k = static_cast<size_t>((c.t - t0) / opts.bin_dt);
    if (k < n_bins) counts[k] += 1.0;
  }
  double mean = 0.0;
  for (double v : counts) mean += v;
  mean /= static_cast<double>(n_bins);
  for (double& v : counts) v -= mean;

  // Welch average with Hann windows and half-segment overlap.
  std::vector<double> power(L, 0.0);
  std::vector<double> window(L);
  for (size_t i = 0; i < L; ++i)
    window[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (L - 1)));
  int n_seg = 0;
  for (size_t start = 0; start + L <= n_bins; start += L / 2) {
    std::vector<Complex> seg(L);
    for (size_t i = 0; i < L; ++i) seg[i] = counts[start + i] * window[i];
    fft(seg);
    for (size_t i = 0; i < L; ++i) power[i] += std::norm(seg[i]);
    ++n_seg;
  }

  // Fold the frequency axis around the LO offset to recover the optical
  // spectrum near the cavity frame origin.
  const double df = 1.0 / (static_cast<double>(L) * opts.bin_dt);
  const double nu_lo = opts.delta_omega / (2.0 * M_PI);
  Spectrum sp;
  sp.normalization = SpectrumNormalization::PeakNormalized;
  double peak = 0.0;
  const double span = nu_lo / 2.0;
  for (long k = 0; k < static_cast<long>(L); ++k) {
    double f = k * df;
    if (f > 0.5 / opts.bin_dt) continue;  // negative image half
    double nu = f - nu_lo;
    if (std::abs(nu) > span) continue;
    sp.freqs.push_back(nu);
    sp.phi.push_back(power[k] / std::max(1, n_seg));
    peak = std::max(peak, sp.phi.back());
  }
  if (peak > 0.0)
    for (double& v : sp.phi) v /= peak;
  return sp;
}

std::vector<IoPoint> io_curve(const ZeemanParams& base,
                              const std::vector<double>& x_grid, double I4,
                              int n_traj, double t_max, uint64_t seed_base,
                              const EnsembleOptions& opts) {
  ZeemanParams p = base;
  p.set_I4(I4);
  SpacePtr space = zeeman_space(p.fock_truncation);
  VectorCd psi0 = VectorCd::Zero(space->total_dim());
  Factor atom = zeeman_atomic_factor();
  psi0(space->composite_index({atom.index_of("g3:+0"), 0, 0})) = 1.0;

  std::vector<IoPoint> out;
  for (size_t i = 0; i < x_grid.size(); ++i) {
    IoPoint pt;
    pt.x = x_grid[i];
    try {
      ZeemanParams q = p;
      q.set_I3((9.0 / 7.0) * pt.x * I4);
      EnsembleResult res = ensemble_average(zeeman_family(q), psi0, n_traj, t_max,
                                            splitmix64(seed_base, i), opts);
      pt.n_traj = static_cast<int>(res.records.size());
      pt.n_a = res.averages.at("n_a");
      pt.n_b = res.averages.at("n_b");
      Estimate n_tot = res.averages.at("n");
      pt.n_avg = {0.5 * n_tot.mean, 0.5 * n_tot.se};
    } catch (const Error& e) {
      pt.ok = false;
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace oal
