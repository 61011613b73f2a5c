#include "oal.h"

#include <cmath>
#include <cstring>
#include <string>

#include "oal/experiments.hpp"
#include "oal/semiclassical.hpp"
#include "oal/steady.hpp"

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Translate the C++ error hierarchy onto the C codes.
template <typename Fn>
int guarded(Fn&& fn) {
  using namespace oal;
  try {
    return fn();
  } catch (const ConfigError& e) {
    return set_error(OAL_ERR_CONFIG, e.what());
  } catch (const DegenerateSteadyStateError& e) {
    return set_error(OAL_ERR_DEGENERATE, e.what());
  } catch (const ConvergenceError& e) {
    return set_error(OAL_ERR_CONVERGENCE, e.what());
  } catch (const StatisticsError& e) {
    return set_error(OAL_ERR_STATISTICS, e.what());
  } catch (const DimensionError& e) {
    return set_error(OAL_ERR_DIMENSION, e.what());
  } catch (const LabelError& e) {
    return set_error(OAL_ERR_LABEL, e.what());
  } catch (const DomainError& e) {
    return set_error(OAL_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return set_error(OAL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(OAL_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

struct oal_params {
  oal::FourStateParams p;
};

struct oal_model {
  oal::ModelSpec model;
  oal::FourStateParams params;
};

struct oal_steady {
  oal::MatrixCd rho;
  const oal_model* model;  // not owned
};

extern "C" {

const char* oal_last_error(void) { return g_last_error.c_str(); }

const char* oal_version(void) { return oal::kVersion; }

oal_params* oal_params_cs_defaults(void) {
  return new oal_params{oal::FourStateParams::cs_defaults()};
}

void oal_params_free(oal_params* p) { delete p; }

int oal_params_set(oal_params* p, const char* key, double value) {
  return guarded([&]() {
    if (!p || !key) return set_error(OAL_ERR_INVALID_ARGUMENT, "null argument");
    std::string k(key);
    auto& q = p->p;
    if (k == "g43") q.g43 = value;
    else if (k == "kappa") q.kappa = value;
    else if (k == "gamma") q.gamma = value;
    else if (k == "gamma33") q.gamma33 = value;
    else if (k == "gamma43") q.gamma43 = value;
    else if (k == "gamma44") q.gamma44 = value;
    else if (k == "gamma34") q.gamma34 = value;
    else if (k == "Omega3") q.Omega3 = value;
    else if (k == "Omega4") q.Omega4 = value;
    else if (k == "Delta_AC") q.Delta_AC = value;
    else if (k == "Delta3") q.Delta3 = value;
    else if (k == "Delta4") q.Delta4 = value;
    else if (k == "I3") q.set_I3(value);
    else if (k == "I4") q.set_I4(value);
    else if (k == "fock_truncation") q.fock_truncation = static_cast<int>(value);
    else return set_error(OAL_ERR_INVALID_ARGUMENT, "unknown key '" + k + "'");
    return OAL_OK;
  });
}

int oal_params_get(const oal_params* p, const char* key, double* out) {
  return guarded([&]() {
    if (!p || !key || !out)
      return set_error(OAL_ERR_INVALID_ARGUMENT, "null argument");
    std::string k(key);
    const auto& q = p->p;
    if (k == "g43") *out = q.g43;
    else if (k == "kappa") *out = q.kappa;
    else if (k == "gamma") *out = q.gamma;
    else if (k == "gamma33") *out = q.gamma33;
    else if (k == "gamma43") *out = q.gamma43;
    else if (k == "gamma44") *out = q.gamma44;
    else if (k == "gamma34") *out = q.gamma34;
    else if (k == "Omega3") *out = q.Omega3;
    else if (k == "Omega4") *out = q.Omega4;
    else if (k == "Delta_AC") *out = q.Delta_AC;
    else if (k == "Delta3") *out = q.Delta3;
    else if (k == "Delta4") *out = q.Delta4;
    else if (k == "I3") *out = q.I3();
    else if (k == "I4") *out = q.I4();
    else if (k == "fock_truncation") *out = q.fock_truncation;
    else return set_error(OAL_ERR_INVALID_ARGUMENT, "unknown key '" + k + "'");
    return OAL_OK;
  });
}

int oal_params_scale_cavity(oal_params* p, double f) {
  return guarded([&]() {
    if (!p) return set_error(OAL_ERR_INVALID_ARGUMENT, "null params");
    if (f <= 0.0) return set_error(OAL_ERR_DOMAIN, "scale factor must be positive");
    p->p = oal::scale_cavity(p->p, f);
    return OAL_OK;
  });
}

int oal_critical_numbers(const oal_params* p, double* n0, double* N0, double* C1) {
  return guarded([&]() {
    if (!p) return set_error(OAL_ERR_INVALID_ARGUMENT, "null params");
    auto c = oal::critical_numbers(p->p);
    if (n0) *n0 = c.n0;
    if (N0) *N0 = c.N0;
    if (C1) *C1 = c.C1;
    return OAL_OK;
  });
}

oal_model* oal_model_four_state(const oal_params* p) {
  oal_model* out = nullptr;
  guarded([&]() {
    if (!p) return set_error(OAL_ERR_INVALID_ARGUMENT, "null params");
    out = new oal_model{oal::build_four_state(p->p), p->p};
    return OAL_OK;
  });
  return out;
}

oal_model* oal_model_raman(const oal_params* p, double beta34) {
  oal_model* out = nullptr;
  guarded([&]() {
    if (!p) return set_error(OAL_ERR_INVALID_ARGUMENT, "null params");
    out = new oal_model{oal::build_raman_variant(p->p, beta34), p->p};
    return OAL_OK;
  });
  return out;
}

void oal_model_free(oal_model* m) { delete m; }

int oal_model_dim(const oal_model* m) { return m ? m->model.dim() : 0; }

oal_steady* oal_steady_solve(const oal_model* m) {
  oal_steady* out = nullptr;
  guarded([&]() {
    if (!m) return set_error(OAL_ERR_INVALID_ARGUMENT, "null model");
    out = new oal_steady{oal::steady_state(m->model), m};
    return OAL_OK;
  });
  return out;
}

void oal_steady_free(oal_steady* s) { delete s; }

int oal_steady_expectation(const oal_steady* s, const char* observable,
                           double* out) {
  return guarded([&]() {
    if (!s || !observable || !out)
      return set_error(OAL_ERR_INVALID_ARGUMENT, "null argument");
    const auto& op = s->model->model.observable(observable);
    *out = std::real(oal::expectation(s->rho, op));
    return OAL_OK;
  });
}

int oal_steady_photon_statistics(const oal_steady* s, const oal_params* p,
                                 double* n_bar, double* mandel_q, double* g2_0,
                                 double* ratio_R) {
  return guarded([&]() {
    if (!s || !p) return set_error(OAL_ERR_INVALID_ARGUMENT, "null argument");
    auto obs = oal::steady_observables(s->rho, s->model->model, p->p);
    if (n_bar) *n_bar = obs.n_bar;
    if (mandel_q) *mandel_q = obs.mandel_Q.value_or(std::nan(""));
    if (g2_0) *g2_0 = obs.g2_0.value_or(std::nan(""));
    if (ratio_R) *ratio_R = obs.ratio_R;
    return OAL_OK;
  });
}

int oal_semiclassical_intensity(const oal_params* p, double I3,
                                double* alpha2, double* alpha2_over_n0f) {
  return guarded([&]() {
    if (!p) return set_error(OAL_ERR_INVALID_ARGUMENT, "null params");
    oal::SCState s = oal::sc_steady(p->p, I3);
    double n0f = oal::critical_numbers(p->p).n0;
    if (alpha2) *alpha2 = s.intensity();
    if (alpha2_over_n0f) *alpha2_over_n0f = s.intensity() / n0f;
    return OAL_OK;
  });
}

int oal_run_experiment(const char* config_text, const char* outdir) {
  return guarded([&]() {
    if (!config_text || !outdir)
      return set_error(OAL_ERR_INVALID_ARGUMENT, "null argument");
    oal::RunConfig cfg = oal::parse_run_config(config_text);
    oal::run_experiment(cfg, outdir);
    return OAL_OK;
  });
}

}  // extern "C"
