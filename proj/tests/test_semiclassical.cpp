#include "doctest.h"
#include "oal/semiclassical.hpp"

using namespace oal;

TEST_CASE("mean-field fixed point has vanishing right-hand side") {
  auto p = FourStateParams::cs_defaults();
  p.set_I4(3.0);
  for (double I3 : {0.5, 1.5, 3.0}) {
    FourStateParams q = p;
    q.set_I3(I3);
    MeanFieldSystem sys(q);
    SCState s = sc_steady(q, I3);
    SCState r = sys.rhs(s);
    double scale = std::max(1.0, std::abs(s.alpha));
    CHECK(std::abs(r.alpha) / scale < 1e-9);
    CHECK(r.sigma.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("populations stay physical along the scan") {
  auto p = FourStateParams::cs_defaults();
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(0.5 * i);
  auto scan = sc_scan(p, grid, 3.0, false);
  for (const auto& pt : scan.forward) {
    REQUIRE(pt.converged);
    double tr = pt.state.sigma.trace().real();
    CHECK(tr == doctest::Approx(1.0).epsilon(1e-8));
    for (int i = 0; i < pt.state.sigma.rows(); ++i) {
      CHECK(pt.state.sigma(i, i).real() > -1e-10);
      CHECK(pt.state.sigma(i, i).imag() == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK(pt.state.intensity() >= 0.0);
  }
}

TEST_CASE("cavity-length scaling leaves the normalized curve invariant") {
  auto base = FourStateParams::cs_defaults();
  std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> reference;
  for (double f : {1.0, 100.0, 2500.0}) {
    auto p = scale_cavity(base, f);
    double n0f = critical_numbers(p).n0;
    std::vector<double> curve;
    for (double I3 : grid) curve.push_back(sc_steady(p, I3).intensity() / n0f);
    if (reference.empty()) {
      reference = curve;
    } else {
      for (size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(curve[i] - reference[i]) < 1e-8);
    }
  }
}

TEST_CASE("no pump means no field") {
  auto p = FourStateParams::cs_defaults();
  p.set_I4(3.0);
  SCState s = sc_steady(p, 0.0);
  CHECK(s.intensity() < 1e-12);
}

TEST_CASE("raman variant also reaches a fixed point") {
  auto p = FourStateParams::cs_defaults();
  p.set_I4(3.0);
  p.set_I3(2.0);
  MeanFieldSystem sys(p, 0.25 * p.gamma);
  SCState s = sc_steady(sys, sys.initial_state(1e-3 * std::sqrt(critical_numbers(p).n0)));
  SCState r = sys.rhs(s);
  CHECK(std::abs(r.alpha) < 1e-8);
  CHECK(r.sigma.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(sys.atom_dim() == 3);
}
