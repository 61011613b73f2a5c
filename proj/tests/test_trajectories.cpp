#include "doctest.h"
#include "oal/trajectories.hpp"
#include "oal/steady.hpp"

#include <algorithm>

using namespace oal;

namespace {

ModelSpec bare_cavity(double kappa, int trunc) {
  ModelSpec m;
  auto sp = make_space({Factor::fock(trunc)});
  m.space = sp;
  auto a = embed(fock_destroy(trunc), 0, sp);
  m.hamiltonian_terms.push_back({0.0 * a, TimeDep::constant(), "zero"});
  m.add_channel(std::sqrt(2.0 * kappa) * a, "cavity");
  m.add_observable("n", a.adjoint() * a);
  return m;
}

}  // namespace

TEST_CASE("single-photon click times are exponential with rate 2 kappa") {
  double kappa = two_pi_mhz(4.2);
  auto m = bare_cavity(kappa, 1);
  VectorCd psi0 = VectorCd::Zero(2);
  psi0(1) = 1.0;
  TrajectoryOptions to;
  to.sample_dt = 0.0;
  const int n = 10000;
  std::vector<double> times;
  for (int k = 0; k < n; ++k) {
    auto rec = run_trajectory(m, psi0, 0.5, splitmix64(42, k), to);
    if (!rec.clicks.empty()) times.push_back(rec.clicks[0].t);
  }
  // essentially every photon decays within 0.5 us (26 lifetimes)
  CHECK(times.size() >= n - 1);
  std::sort(times.begin(), times.end());
  // Kolmogorov-Smirnov against 1 - exp(-2 kappa t)
  double rate = 2.0 * kappa;
  double D = 0.0;
  for (size_t i = 0; i < times.size(); ++i) {
    double F = 1.0 - std::exp(-rate * times[i]);
    double lo = double(i) / times.size(), hi = double(i + 1) / times.size();
    D = std::max({D, std::abs(F - lo), std::abs(F - hi)});
  }
  // p > 0.01 corresponds to sqrt(n) D < 1.63
  CHECK(std::sqrt(double(times.size())) * D < 1.63);
}

TEST_CASE("dark initial state never clicks") {
  auto p = FourStateParams::cs_defaults();
  p.Omega3 = 0.0;
  p.Omega4 = 0.0;
  p.fock_truncation = 2;
  auto m = build_four_state(p);
  VectorCd psi0 = VectorCd::Zero(m.dim());
  psi0(0) = 1.0;  // |g3, 0>
  auto rec = run_trajectory(m, psi0, 10.0, 5);
  CHECK(rec.clicks.empty());
  for (double v : rec.samples.at("n")) CHECK(v < 1e-12);
}

TEST_CASE("identical seeds reproduce the record exactly") {
  auto p = FourStateParams::cs_defaults();
  p.set_I3(1.0);
  p.set_I4(3.0);
  p.fock_truncation = 4;
  auto m = build_four_state(p);
  VectorCd psi0 = VectorCd::Zero(m.dim());
  psi0(0) = 1.0;
  auto r1 = run_trajectory(m, psi0, 8.0, 123);
  auto r2 = run_trajectory(m, psi0, 8.0, 123);
  REQUIRE(r1.clicks.size() == r2.clicks.size());
  for (size_t i = 0; i < r1.clicks.size(); ++i) {
    CHECK(r1.clicks[i].t == r2.clicks[i].t);
    CHECK(r1.clicks[i].channel == r2.clicks[i].channel);
  }
}

TEST_CASE("ensemble results do not depend on the thread count") {
  auto p = FourStateParams::cs_defaults();
  p.set_I3(1.0);
  p.set_I4(3.0);
  p.fock_truncation = 4;
  auto fam = fixed_family(build_four_state(p));
  VectorCd psi0 = VectorCd::Zero(20);
  psi0(0) = 1.0;
  EnsembleOptions e1, e4;
  e1.n_threads = 1;
  e4.n_threads = 4;
  auto a = ensemble_average(fam, psi0, 8, 10.0, 77, e1);
  auto b = ensemble_average(fam, psi0, 8, 10.0, 77, e4);
  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.averages.at("n").mean == b.averages.at("n").mean);
  for (size_t i = 0; i < a.records.size(); ++i)
    CHECK(a.records[i].clicks.size() == b.records[i].clicks.size());
}

TEST_CASE("serialization round-trips clicks, seed, and metadata") {
  JumpRecord rec;
  rec.seed = 99;
  rec.t_end = 12.5;
  rec.metadata["v_x"] = 0.173;
  rec.clicks = {{0.125, "cavity"}, {3.75, "gamma43"}};
  auto back = record_from_text(to_text(rec));
  CHECK(back.seed == 99);
  CHECK(back.t_end == 12.5);
  CHECK(back.metadata.at("v_x") == doctest::Approx(0.173));
  REQUIRE(back.clicks.size() == 2);
  CHECK(back.clicks[1].t == 3.75);
  CHECK(back.clicks[1].channel == "gamma43");
  CHECK_THROWS_AS(record_from_text("bogus line\n"), ConfigError);
}

TEST_CASE("poisson clicks give a flat unit correlation") {
  // a pure local oscillator on an empty cavity produces Poisson clicks
  auto m = bare_cavity(two_pi_mhz(4.2), 1);
  VectorCd psi0 = VectorCd::Zero(2);
  psi0(0) = 1.0;
  TrajectoryOptions to;
  to.sample_dt = 0.0;
  to.local_oscillators = {{"cavity", std::sqrt(40.0), 0.0}};
  std::vector<JumpRecord> recs;
  for (int k = 0; k < 24; ++k)
    recs.push_back(run_trajectory(m, psi0, 60.0, splitmix64(9, k), to));
  auto g2 = g2_from_clicks(recs, 0.05, 1.0, {"cavity"});
  for (size_t i = 0; i < g2.taus.size(); ++i)
    CHECK(std::abs(g2.g2[i] - 1.0) < std::max(5.0 * g2.se[i], 0.05));
}

TEST_CASE("too few clicks raise a statistics error") {
  JumpRecord r;
  r.t_end = 100.0;
  r.clicks = {{1.0, "cavity"}};
  CHECK_THROWS_AS(g2_from_clicks({r}, 0.01, 1.0, {"cavity"}), StatisticsError);
}

TEST_CASE("pooled trajectory averages match the master equation") {
  auto p = FourStateParams::cs_defaults();
  p.set_I3(1.0);
  p.set_I4(3.0);
  p.fock_truncation = 6;
  auto m = build_four_state(p);
  MatrixCd rho = steady_state(m);
  double n_ss = expectation(rho, m.observable("n")).real();
  VectorCd psi0 = VectorCd::Zero(m.dim());
  psi0(0) = 1.0;
  EnsembleOptions eo;
  eo.transient = 4.0;
  auto res = ensemble_average(fixed_family(m), psi0, 48, 40.0, 31, eo);
  auto e = res.averages.at("n");
  CHECK(std::abs(e.mean - n_ss) < 4.0 * e.se);
}
