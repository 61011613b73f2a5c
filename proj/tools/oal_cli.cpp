// Figure-reproduction CLI. Every subcommand builds a config (file plus
// --set overrides, flags win) and hands it to the shared library.
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oal.h"

namespace {

int run(const std::string& experiment, const std::string& config_path,
        const std::vector<std::string>& overrides, const std::string& outdir,
        int threads) {
  std::ostringstream cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot open config file '%s'\n",
                   config_path.c_str());
      return 2;
    }
    cfg << in.rdbuf() << "\n";
  }
  cfg << "experiment = " << experiment << "\n";
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: override '%s': expected key=value\n",
                   ov.c_str());
      return 2;
    }
    cfg << ov.substr(0, eq) << " = " << ov.substr(eq + 1) << "\n";
  }
  if (threads > 0) cfg << "threads = " << threads << "\n";

  int rc = oal_run_experiment(cfg.str().c_str(), outdir.c_str());
  if (rc == OAL_OK) {
    std::printf("wrote %s/%s.csv\n", outdir.c_str(), experiment.c_str());
    return 0;
  }
  std::fprintf(stderr, "error: %s\n", oal_last_error());
  return rc == OAL_ERR_CONFIG || rc == OAL_ERR_INVALID_ARGUMENT ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-atom-laser simulations: steady states, spectra, "
               "quantum trajectories"};
  app.require_subcommand(1);

  const std::vector<std::string> experiments = {
      "sc-scan", "q-scan", "ratio-scan", "scaling-sweep",
      "rabi-scan", "spectrum", "g2", "zeeman-io"};
  const std::vector<std::string> briefs = {
      "semiclassical intensity vs pump",
      "steady-state photon statistics vs pump",
      "cavity-to-fluorescence flux ratio vs pump",
      "photon statistics vs cavity length scale",
      "steady-state photon number vs pump detuning",
      "emission spectrum (regression and/or simulated heterodyne)",
      "intensity correlation g2(tau) (regression or click-based)",
      "Zeeman-model input/output curve from trajectory ensembles"};

  struct Args {
    std::string config, outdir = "out";
    std::vector<std::string> sets;
    int threads = 0;
  };
  std::vector<Args> args(experiments.size());

  for (size_t i = 0; i < experiments.size(); ++i) {
    auto* sub = app.add_subcommand(experiments[i], briefs[i]);
    sub->add_option("-c,--config", args[i].config,
                    "config file of key = value lines");
    sub->add_option("-o,--outdir", args[i].outdir, "output directory")
        ->capture_default_str();
    sub->add_option("-s,--set", args[i].sets,
                    "override a config key, key=value (repeatable)");
    sub->add_option("-j,--threads", args[i].threads,
                    "worker threads for trajectory ensembles");
  }

  auto* version = app.add_subcommand("version", "print the library version");

  CLI11_PARSE(app, argc, argv);

  if (version->parsed()) {
    std::printf("%s\n", oal_version());
    return 0;
  }
  for (size_t i = 0; i < experiments.size(); ++i)
    if (app.get_subcommand(experiments[i])->parsed())
      return run(experiments[i], args[i].config, args[i].sets, args[i].outdir,
                 args[i].threads);
  return 2;
}
