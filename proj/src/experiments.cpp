#include "oal/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "oal/dynamics.hpp"
#include "oal/semiclassical.hpp"
#include "oal/steady.hpp"
#include "oal/trajectories.hpp"

namespace oal {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  try {
    size_t pos = 0;
    double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config." + key + ": expected a number, got '" + raw + "'");
  }
}

}  // namespace

std::string RunConfig::get_string(const std::string& key, const std::string& def) const {
  used.insert(key);
  auto it = values.find(key);
  return it == values.end() ? def : it->second;
}

double RunConfig::get_double(const std::string& key, double def) const {
  used.insert(key);
  auto it = values.find(key);
  return it == values.end() ? def : parse_double(key, it->second);
}

int RunConfig::get_int(const std::string& key, int def) const {
  double v = get_double(key, static_cast<double>(def));
  int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw ConfigError("config." + key + ": expected an integer");
  return i;
}

bool RunConfig::get_bool(const std::string& key, bool def) const {
  used.insert(key);
  auto it = values.find(key);
  if (it == values.end()) return def;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config." + key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::get_grid(const std::string& key,
                                        const std::string& def) const {
  used.insert(key);
  auto it = values.find(key);
  const std::string raw = it == values.end() ? def : it->second;
  std::vector<double> out;
  if (raw.find(':') != std::string::npos) {
    // lo:hi:n linspace
    std::istringstream is(raw);
    std::string lo_s, hi_s, n_s;
    if (!std::getline(is, lo_s, ':') || !std::getline(is, hi_s, ':') ||
        !std::getline(is, n_s))
      throw ConfigError("config." + key + ": expected lo:hi:n, got '" + raw + "'");
    double lo = parse_double(key, trim(lo_s)), hi = parse_double(key, trim(hi_s));
    int n = static_cast<int>(parse_double(key, trim(n_s)));
    if (n < 2) throw ConfigError("config." + key + ": linspace needs n >= 2");
    for (int i = 0; i < n; ++i)
      out.push_back(lo + (hi - lo) * i / static_cast<double>(n - 1));
  } else {
    std::istringstream is(raw);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) out.push_back(parse_double(key, tok));
    }
    if (out.empty()) throw ConfigError("config." + key + ": empty grid");
  }
  return out;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) +
                                       ": empty key");
    if (key == "experiment") cfg.experiment = val;
    else cfg.values[key] = val;
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override '" + ov + "': expected key=value");
    std::string key = trim(ov.substr(0, eq));
    std::string val = trim(ov.substr(eq + 1));
    if (key == "experiment") config.experiment = val;
    else config.values[key] = val;
  }
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One output table; rows are flushed with flagged failures instead of gaps.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns)
      : path_(path.string()), columns_(std::move(columns)), out_(path) {
    if (!out_) throw ConfigError("cannot write '" + path_ + "'");
    for (size_t i = 0; i < columns_.size(); ++i)
      out_ << (i ? "," : "") << columns_[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& vals, bool ok = true,
           const std::string& error = "") {
    if (vals.size() + 2 != columns_.size())
      throw DomainError("csv row width mismatch");
    for (const auto& v : vals) out_ << fmt(v) << ",";
    out_ << (ok ? 1 : 0) << ",";
    std::string msg = error;
    for (char& c : msg)
      if (c == ',' || c == '\n') c = ';';
    out_ << msg << "\n";
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<std::string> columns_;
  std::ofstream out_;
};

std::vector<std::string> with_flags(std::vector<std::string> cols) {
  cols.push_back("ok");
  cols.push_back("error");
  return cols;
}

FourStateParams resolve_four_state(const RunConfig& cfg, double def_I3 = 3.0,
                                   double def_I4 = 3.0) {
  FourStateParams p = FourStateParams::cs_defaults();
  p.gamma = two_pi_mhz(cfg.get_double("gamma_mhz", p.gamma / kTwoPi));
  p.gamma33 = 0.75 * p.gamma;
  p.gamma43 = 0.25 * p.gamma;
  p.gamma44 = (7.0 / 12.0) * p.gamma;
  p.gamma34 = (5.0 / 12.0) * p.gamma;
  p.kappa = two_pi_mhz(cfg.get_double("kappa_mhz", p.kappa / kTwoPi));
  p.g43 = two_pi_mhz(cfg.get_double("g43_mhz", p.g43 / kTwoPi));
  p.Delta_AC = two_pi_mhz(cfg.get_double("delta_ac_mhz", 0.0));
  p.Delta3 = two_pi_mhz(cfg.get_double("delta3_mhz", 0.0));
  p.Delta4 = two_pi_mhz(cfg.get_double("delta4_mhz", 0.0));
  double f = cfg.get_double("f", 1.0);
  if (f <= 0.0) throw ConfigError("config.f: must be positive");
  p = scale_cavity(p, f);
  p.set_I3(cfg.get_double("I3", def_I3));
  p.set_I4(cfg.get_double("I4", def_I4));
  int trunc = cfg.get_int("fock_truncation", 0);
  p.fock_truncation = trunc > 0 ? trunc : default_truncation(p);
  return p;
}

ZeemanParams resolve_zeeman(const RunConfig& cfg) {
  ZeemanParams p = ZeemanParams::cs_defaults();
  p.set_I3(cfg.get_double("I3", 3.0));
  p.set_I4(cfg.get_double("I4", 13.0));
  p.fock_truncation = cfg.get_int("fock_truncation", p.fock_truncation);
  p.B_pseudo = cfg.get_double("b_gauss", p.B_pseudo);
  p.include_offresonant_e4 = cfg.get_bool("include_offresonant", true);
  std::string phase = cfg.get_string("phase_model", "constant");
  if (phase == "constant") {
    ConstantPhase cp;
    cp.theta = cfg.get_double("theta", cp.theta);
    p.phase_model = cp;
  } else if (phase == "velocity") {
    p.phase_model = ConstantVelocity{};
  } else {
    throw ConfigError("config.phase_model: expected constant|velocity");
  }
  return p;
}

using json = nlohmann::json;

json params_json(const FourStateParams& p) {
  auto c = critical_numbers(p);
  return json{{"g43_rad_us", p.g43},       {"kappa_rad_us", p.kappa},
              {"gamma_rad_us", p.gamma},   {"I3", p.I3()},
              {"I4", p.I4()},              {"delta_ac_rad_us", p.Delta_AC},
              {"delta3_rad_us", p.Delta3}, {"delta4_rad_us", p.Delta4},
              {"fock_truncation", p.fock_truncation},
              {"n0f", c.n0},               {"N0", c.N0},
              {"C1", c.C1}};
}

// The Raman variant has no e4 level; report absent populations as zero.
double pop(const SteadyObservables& o, const std::string& level) {
  auto it = o.populations.find(level);
  return it == o.populations.end() ? 0.0 : it->second;
}

// Steady-state row shared by q-scan / ratio-scan / scaling-sweep.
struct QuantumPoint {
  SteadyObservables obs;
  int truncation = 0;
};

QuantumPoint solve_quantum(const FourStateParams& base, double I3, bool adaptive,
                           std::optional<double> raman_beta34) {
  FourStateParams p = base;
  p.set_I3(I3);
  QuantumPoint out;
  if (adaptive) {
    auto res = steady_state_adaptive(p, 1e-3, raman_beta34);
    out.obs = res.obs;
    out.truncation = res.truncation;
  } else {
    ModelSpec model = raman_beta34 ? build_raman_variant(p, *raman_beta34)
                                   : build_four_state(p);
    MatrixCd rho = steady_state(model);
    out.obs = steady_observables(rho, model, p);
    out.truncation = p.fock_truncation;
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg, const std::string& outdir) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  const fs::path dir(outdir);

  ExperimentResult result;
  json meta;
  meta["experiment"] = cfg.experiment;
  meta["version"] = kVersion;

  auto csv = [&](const std::string& name, std::vector<std::string> cols) {
    auto path = dir / (name + ".csv");
    result.csv_paths.push_back(path.string());
    return CsvWriter(path, with_flags(std::move(cols)));
  };

  if (cfg.experiment == "sc-scan") {
    FourStateParams p = resolve_four_state(cfg);
    auto grid = cfg.get_grid("i3_grid", "0:8:161");
    bool bidir = cfg.get_bool("bidirectional", false);
    meta["params"] = params_json(p);
    CsvWriter w = csv("sc-scan", {"I3", "alpha2", "alpha2_over_n0f"});
    SCScan scan = sc_scan(p, grid, p.I4(), bidir);
    for (const auto& pt : scan.forward) {
      ++result.points_total;
      if (pt.converged) {
        w.row({pt.I3, pt.state.intensity(), pt.alpha2_over_n0});
      } else {
        ++result.points_failed;
        w.row({pt.I3, 0.0, 0.0}, false, pt.error);
      }
    }
    meta["hysteresis_detected"] = scan.hysteresis_detected;
  } else if (cfg.experiment == "q-scan" || cfg.experiment == "ratio-scan" ||
             cfg.experiment == "scaling-sweep") {
    FourStateParams p = resolve_four_state(cfg);
    bool adaptive = cfg.get_int("fock_truncation", 0) == 0;
    std::optional<double> raman;
    if (cfg.get_string("model", "four_state") == "raman")
      raman = cfg.get_double("beta34", 0.25 * p.gamma);
    meta["params"] = params_json(p);

    auto emit = [&](CsvWriter& w, double lead, const FourStateParams& q, double I3) {
      ++result.points_total;
      try {
        QuantumPoint pt = solve_quantum(q, I3, adaptive, raman);
        const auto& o = pt.obs;
        double n0f = critical_numbers(q).n0;
        if (cfg.experiment == "ratio-scan") {
          double beta = o.beta_43;
          w.row({lead, o.n_bar, o.ratio_R, beta, beta / (1.0 - beta)});
        } else {
          w.row({lead, o.n_bar, o.n_bar / n0f, o.mandel_Q.value_or(0.0),
                 o.g2_0.value_or(0.0), pop(o, "g3"), pop(o, "e3"),
                 pop(o, "g4"), pop(o, "e4"), o.ratio_R});
        }
      } catch (const Error& e) {
        ++result.points_failed;
        std::vector<double> zeros(cfg.experiment == "ratio-scan" ? 4 : 9, 0.0);
        zeros.insert(zeros.begin(), lead);
        w.row(zeros, false, e.what());
      }
    };

    if (cfg.experiment == "scaling-sweep") {
      auto f_grid = cfg.get_grid("f_grid", "0.0101,1,100");
      CsvWriter w = csv("scaling-sweep",
                        {"f", "n_bar", "n_bar_over_n0f", "Q", "g2_0", "pop_g3",
                         "pop_e3", "pop_g4", "pop_e4", "R"});
      FourStateParams base = FourStateParams::cs_defaults();
      base.set_I3(p.I3());
      base.set_I4(p.I4());
      for (double f : f_grid) {
        FourStateParams q = scale_cavity(base, f);
        q.fock_truncation = adaptive ? default_truncation(q) : p.fock_truncation;
        emit(w, f, q, p.I3());
      }
    } else {
      auto grid = cfg.get_grid("i3_grid", "0:4:41");
      std::vector<std::string> cols =
          cfg.experiment == "ratio-scan"
              ? std::vector<std::string>{"I3", "n_bar", "R", "beta43", "R_beta"}
              : std::vector<std::string>{"I3", "n_bar", "n_bar_over_n0f", "Q",
                                         "g2_0", "pop_g3", "pop_e3", "pop_g4",
                                         "pop_e4", "R"};
      CsvWriter w = csv(cfg.experiment, cols);
      for (double I3 : grid) emit(w, I3, p, I3);
    }
  } else if (cfg.experiment == "rabi-scan") {
    FourStateParams p = resolve_four_state(cfg, 0.1, 3.0);
    auto grid_mhz = cfg.get_grid("delta3_grid_mhz", "-30:30:121");
    meta["params"] = params_json(p);
    std::vector<double> grid;
    for (double m : grid_mhz) grid.push_back(two_pi_mhz(m));
    CsvWriter w = csv("rabi-scan", {"delta3_mhz", "n_bar"});
    for (const auto& pt : rabi_scan(p, p.I3(), grid)) {
      ++result.points_total;
      if (pt.converged) {
        w.row({pt.delta3 / kTwoPi, pt.n_bar});
      } else {
        ++result.points_failed;
        w.row({pt.delta3 / kTwoPi, 0.0}, false, pt.error);
      }
    }
  } else if (cfg.experiment == "spectrum") {
    FourStateParams p = resolve_four_state(cfg, 0.5, 0.5);
    meta["params"] = params_json(p);
    std::string method = cfg.get_string("method", "regression");
    double tau_max = cfg.get_double("tau_max_us", 3.0);
    double dtau = cfg.get_double("dtau_us", 0.002);
    int pad = cfg.get_int("pad_factor", 4);
    ModelSpec model = build_four_state(p);
    auto write_spectrum = [&](const std::string& name, const Spectrum& sp) {
      CsvWriter w = csv(name, {"nu_mhz", "phi"});
      for (size_t i = 0; i < sp.freqs.size(); ++i) {
        ++result.points_total;
        w.row({sp.freqs[i], sp.phi[i]});
      }
    };
    if (method == "regression" || method == "both") {
      MatrixCd rho = steady_state(model);
      std::vector<double> taus;
      for (double t = 0.0; t <= tau_max + 0.5 * dtau; t += dtau) taus.push_back(t);
      Spectrum sp = optical_spectrum(field_correlation(model, rho, taus), pad);
      write_spectrum(method == "both" ? "spectrum-regression" : "spectrum", sp);
    }
    if (method == "heterodyne" || method == "both") {
      HeterodyneOptions ho;
      ho.seed = static_cast<uint64_t>(cfg.get_int("seed", 1));
      ho.bin_dt = cfg.get_double("bin_dt_us", ho.bin_dt);
      ho.segment_length = cfg.get_int("segment_length", ho.segment_length);
      double lo_flux = cfg.get_double("lo_flux", p.kappa);
      double t_max = cfg.get_double("t_max_us", ho.transient +
                                    2.5 * ho.segment_length * ho.bin_dt);
      VectorCd psi0 = VectorCd::Zero(model.dim());
      psi0(0) = 1.0;
      Spectrum sp = heterodyne_spectrum(model, psi0, lo_flux, t_max, ho);
      write_spectrum(method == "both" ? "spectrum-heterodyne" : "spectrum", sp);
    }
    if (method != "regression" && method != "heterodyne" && method != "both")
      throw ConfigError("config.method: expected regression|heterodyne|both");
  } else if (cfg.experiment == "g2") {
    FourStateParams p = resolve_four_state(cfg, 3.0, 3.0);
    meta["params"] = params_json(p);
    std::string method = cfg.get_string("method", "regression");
    if (method == "regression") {
      double tau_max = cfg.get_double("tau_max_us", 1.0);
      double dtau = cfg.get_double("dtau_us", 0.002);
      ModelSpec model = build_four_state(p);
      MatrixCd rho = steady_state(model);
      std::vector<double> taus;
      for (double t = 0.0; t <= tau_max + 0.5 * dtau; t += dtau) taus.push_back(t);
      CorrelationSeries g2 = g2_tau(model, rho, taus);
      CsvWriter w = csv("g2", {"tau_us", "g2"});
      for (size_t i = 0; i < g2.taus.size(); ++i) {
        ++result.points_total;
        w.row({g2.taus[i], std::real(g2.values[i])});
      }
    } else if (method == "clicks") {
      ModelSpec model = build_four_state(p);
      VectorCd psi0 = VectorCd::Zero(model.dim());
      psi0(0) = 1.0;
      EnsembleOptions eo;
      eo.transient = cfg.get_double("transient_us", 5.0);
      eo.n_threads = cfg.get_int("threads", 1);
      eo.trajectory.sample_dt = 0.0;
      int n_traj = cfg.get_int("n_traj", 64);
      double t_max = cfg.get_double("t_max_us", 200.0);
      uint64_t seed = static_cast<uint64_t>(cfg.get_int("seed", 1));
      auto res = ensemble_average(fixed_family(model), psi0, n_traj, t_max, seed, eo);
      G2Curve curve = g2_from_clicks(
          res.records, cfg.get_double("bin_us", 0.005),
          cfg.get_double("window_us", 1.0), {"cavity"},
          cfg.get_double("smoothing_us", 0.0), eo.transient);
      CsvWriter w = csv("g2", {"tau_us", "g2", "se"});
      for (size_t i = 0; i < curve.taus.size(); ++i) {
        ++result.points_total;
        w.row({curve.taus[i], curve.g2[i], curve.se[i]});
      }
      meta["n_traj"] = n_traj;
      meta["failures"] = res.failures;
    } else {
      throw ConfigError("config.method: expected regression|clicks");
    }
  } else if (cfg.experiment == "zeeman-io") {
    ZeemanParams p = resolve_zeeman(cfg);
    meta["params"] = json{{"I3", 0.0}, {"I4", cfg.get_double("I4", 13.0)},
                          {"fock_truncation", p.fock_truncation},
                          {"b_gauss", p.B_pseudo}};
    auto x_grid = cfg.get_grid("x_grid", "0.17,0.83");
    int n_traj = cfg.get_int("n_traj", 8);
    double t_max = cfg.get_double("t_max_us", 20.0);
    uint64_t seed = static_cast<uint64_t>(cfg.get_int("seed", 1));
    EnsembleOptions eo;
    eo.transient = cfg.get_double("transient_us", 5.0);
    eo.n_threads = cfg.get_int("threads", 1);
    eo.trajectory.sample_dt = cfg.get_double("sample_dt_us", 0.05);
    auto points = io_curve(p, x_grid, cfg.get_double("I4", 13.0), n_traj,
                           t_max, seed, eo);
    CsvWriter w = csv("zeeman-io", {"x", "n_a", "n_a_se", "n_b", "n_b_se",
                                    "n_avg", "n_avg_se", "n_traj"});
    for (const auto& pt : points) {
      ++result.points_total;
      if (pt.ok) {
        w.row({pt.x, pt.n_a.mean, pt.n_a.se, pt.n_b.mean, pt.n_b.se,
               pt.n_avg.mean, pt.n_avg.se, static_cast<double>(pt.n_traj)});
      } else {
        ++result.points_failed;
        w.row({pt.x, 0, 0, 0, 0, 0, 0, 0}, false, pt.error);
      }
    }
  } else {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }

  for (const auto& [key, val] : cfg.values)
    if (!cfg.used.count(key))
      throw ConfigError("config." + key + ": unknown key for experiment '" +
                        cfg.experiment + "'");

  json resolved;
  for (const auto& [key, val] : cfg.values) resolved[key] = val;
  meta["config"] = resolved;
  meta["points_total"] = result.points_total;
  meta["points_failed"] = result.points_failed;
  meta["timestamp"] = static_cast<long long>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch()).count());

  auto meta_path = dir / (cfg.experiment + ".meta.json");
  std::ofstream mo(meta_path);
  mo << meta.dump(2) << "\n";
  result.meta_path = meta_path.string();
  return result;
}

}  // namespace oal
