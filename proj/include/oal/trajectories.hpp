#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oal/dynamics.hpp"
#include "oal/zeeman.hpp"

namespace oal {

// Counter-based per-trajectory seeding: trajectory k draws its model with
// splitmix64(seed_base, 2k) and its noise with splitmix64(seed_base, 2k+1),
// so results are independent of scheduling.
uint64_t splitmix64(uint64_t seed, uint64_t index);

struct JumpClick {
  double t = 0.0;        // us
  std::string channel;   // collapse channel label
};

struct JumpRecord {
  uint64_t seed = 0;
  double t_end = 0.0;  // observation span, us
  std::vector<JumpClick> clicks;
  // Time-sampled Hermitian observable expectations along the trajectory.
  std::vector<double> sample_times;
  std::map<std::string, std::vector<double>> samples;
  // Per-run draws (phases, velocities) for bit-exact replay.
  std::map<std::string, double> metadata;
};

// Line-oriented click serialization; columns are "click <time_us> <channel>"
// preceded by "seed <n>" and "meta <key> <value>" lines.
std::string to_text(const JumpRecord& rec);
JumpRecord record_from_text(const std::string& text);

// Additional coherent amplitude on one jump channel:
// c(t) = op + amplitude * exp(i delta_omega t).
struct LocalOscillator {
  std::string channel;
  double amplitude = 0.0;    // sqrt(flux), flux in clicks/us
  double delta_omega = 0.0;  // rad/us
};

struct TrajectoryOptions {
  double sample_dt = 0.05;       // us between observable samples; <=0 disables
  double jump_time_res = 1e-6;   // us, bisection resolution of click times
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::vector<LocalOscillator> local_oscillators;
  // Observables to sample; empty means every Hermitian one in the model.
  std::vector<std::string> sampled_observables;
};

// Standard Monte Carlo wave function unraveling: evolve under
// H_eff = H(t) - (i/2) sum c^dag c, jump when the squared norm crosses a
// uniform draw, channel chosen proportional to |c psi|^2. Deterministic for
// a fixed seed.
JumpRecord run_trajectory(const ModelSpec& model, const VectorCd& psi0,
                          double t_max, uint64_t seed,
                          const TrajectoryOptions& opts = {});

// One member of a stochastic model ensemble plus the draws that made it.
struct FamilyDraw {
  ModelSpec model;
  std::map<std::string, double> metadata;
};
using ModelFamily = std::function<FamilyDraw(std::mt19937_64&)>;

// Degenerate family: every draw is the same model.
ModelFamily fixed_family(ModelSpec model);

// Zeeman-model family. With a ConstantVelocity phase model the velocity of
// each axis is drawn uniformly from [v_min, v_max] (um/us) and the four
// initial phases uniformly from [0, 2 pi); with ConstantPhase the draws are
// degenerate.
ModelFamily zeeman_family(const ZeemanParams& base, double v_min = 0.10,
                          double v_max = 0.20);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  // standard error over trajectories
};

struct EnsembleResult {
  int n_traj = 0;
  // Trajectory-time-averaged observables (n_a, n_b, populations, ...),
  // averaged over trajectories with their standard errors.
  std::map<std::string, Estimate> averages;
  std::vector<JumpRecord> records;
  int failures = 0;
};

struct EnsembleOptions {
  TrajectoryOptions trajectory;
  double transient = 5.0;  // us discarded from time averages
  int n_threads = 1;
  double max_failure_fraction = 0.1;
};

// Run n_traj trajectories of the family from psi0, pooling time-averaged
// observables. Per-run failures are tolerated up to max_failure_fraction.
EnsembleResult ensemble_average(const ModelFamily& family, const VectorCd& psi0,
                                int n_traj, double t_max, uint64_t seed_base,
                                const EnsembleOptions& opts = {});

struct G2Curve {
  std::vector<double> taus;  // bin centers, us
  std::vector<double> g2;
  std::vector<double> se;    // per-bin standard error over trajectories
};

// Normalized coincidence histogram over the listed channels:
// g2(tau_k) = pairs in bin k / (rate^2 * T_eff * bin_width), estimated per
// trajectory and pooled. smoothing_sigma > 0 applies a Gaussian convolution
// (sigma in us; 0.005 matches a 5 ns presentation). transient is discarded.
G2Curve g2_from_clicks(const std::vector<JumpRecord>& records, double bin_width,
                       double window,
                       const std::vector<std::string>& channels,
                       double smoothing_sigma = 0.0, double transient = 0.0);

struct HeterodyneOptions {
  double delta_omega = two_pi_mhz(64.0);  // LO offset, well above the span
  double bin_dt = 0.002;                  // us, click binning resolution
  int segment_length = 8192;              // Welch segment (power of two)
  std::string channel = "cavity";
  uint64_t seed = 1;
  double transient = 5.0;  // us
};

// Simulated heterodyne measurement: beat the cavity output against a
// detuned local oscillator of the given flux, Welch-average the spectrum of
// the binned click record, and re-center the frequency axis by the LO
// offset.
Spectrum heterodyne_spectrum(const ModelSpec& model, const VectorCd& psi0,
                             double lo_flux, double t_max,
                             const HeterodyneOptions& opts = {});

struct IoPoint {
  double x = 0.0;  // pump strength (7/9) I3/I4
  Estimate n_a, n_b, n_avg;
  int n_traj = 0;
  bool ok = true;
  std::string error;
};

// Input/output curve of the Zeeman model: per pump strength x set
// I3 = (9/7) x I4, run an ensemble, report the per-mode and averaged
// intracavity photon numbers.
std::vector<IoPoint> io_curve(const ZeemanParams& base,
                              const std::vector<double>& x_grid, double I4,
                              int n_traj, double t_max, uint64_t seed_base,
                              const EnsembleOptions& opts = {});

}  // namespace oal
