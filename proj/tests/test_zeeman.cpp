#include "doctest.h"
#include "oal/zeeman.hpp"
#include "oal/steady.hpp"

using namespace oal;

TEST_CASE("state space counts 32 atomic levels and two modes") {
  auto f = zeeman_atomic_factor();
  CHECK(f.dim() == 32);
  auto sp = zeeman_space(2);
  CHECK(sp->total_dim() == 32 * 3 * 3);
  CHECK(f.index_of("g3:-3") == 0);
  CHECK(f.index_of("e4:+4") == 31);
}

TEST_CASE("lowering operators obey the polarization selection rules") {
  auto sp = zeeman_space(1);
  auto f = zeeman_atomic_factor();
  for (int q = -1; q <= 1; ++q) {
    auto s = sigma_q(sp, ZLevel::g4, ZLevel::e3, q);
    MatrixCd d = s.dense();
    for (int r = 0; r < d.rows(); ++r)
      for (int c = 0; c < d.cols(); ++c) {
        if (std::abs(d(r, c)) < 1e-14) continue;
        auto ridx = sp->unravel(r), cidx = sp->unravel(c);
        // diagonal in both modes
        CHECK(ridx[1] == cidx[1]);
        CHECK(ridx[2] == cidx[2]);
        // <g4, m| ... |e3, m+q>
        std::string gl = f.labels[ridx[0]], el = f.labels[cidx[0]];
        CHECK(gl.substr(0, 2) == "g4");
        CHECK(el.substr(0, 2) == "e3");
        int mg = std::stoi(gl.substr(3));
        int me = std::stoi(el.substr(3));
        CHECK(me == mg + q);
        CHECK(std::abs(d(r, c).real() -
                       clebsch_gordan(4, mg, 1, q, 3, me)) < 1e-12);
      }
  }
}

TEST_CASE("total spontaneous decay rate off any excited state is 2 gamma") {
  auto p = ZeemanParams::cs_defaults();
  p.set_I3(1.0);
  p.set_I4(3.0);
  auto m = build_zeeman(p);
  SparseCd sum(m.dim(), m.dim());
  for (const auto& ch : m.collapse_ops) {
    if (ch.label.rfind("gamma", 0) != 0) continue;
    sum += SparseCd(ch.op.mat.adjoint()) * ch.op.mat;
  }
  MatrixCd d(sum);
  auto f = zeeman_atomic_factor();
  auto sp = m.space;
  for (int i = 0; i < m.dim(); ++i) {
    auto idx = sp->unravel(i);
    bool excited = f.labels[idx[0]][0] == 'e';
    double expected = excited ? 2.0 * p.gamma : 0.0;
    CHECK(std::abs(d(i, i).real() - expected) < 1e-10);
  }
}

TEST_CASE("pseudo-field splits adjacent ground F=4 sublevels by 262 kHz") {
  auto sp = zeeman_space(1);
  auto h = pseudo_field_hamiltonian(sp, 0.75);
  CHECK(h.is_hermitian());
  // restrict to the g4 block, diagonalize: eigenvalues m * muB * gF * B
  auto f = zeeman_atomic_factor();
  int base = f.index_of("g4:-4");
  MatrixCd d = h.dense();
  MatrixCd block(9, 9);
  auto full = [&](int k) { return sp->composite_index({base + k, 0, 0}); };
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) block(i, j) = d(full(i), full(j));
  Eigen::SelfAdjointEigenSolver<MatrixCd> es(block);
  double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
  // 0.25 * 1.399624 MHz/G * 0.75 G = 0.2624 MHz
  CHECK(gap / kTwoPi == doctest::Approx(0.26243).epsilon(1e-3));
}

TEST_CASE("every Hamiltonian term is Hermitian at arbitrary times") {
  auto p = ZeemanParams::cs_defaults();
  p.set_I3(0.5);
  p.set_I4(13.0);
  p.phase_model = ConstantVelocity{0.3, 1.1, 2.7, 0.4, 0.12, 0.18};
  auto m = build_zeeman(p);
  for (double t : {0.0, 0.37, 2.9}) {
    SparseCd h = m.hamiltonian_at(t);
    CHECK(frobenius_norm(SparseCd(h - SparseCd(h.adjoint()))) < 1e-9);
  }
}

TEST_CASE("theta = 0 leaves the lasing transition undriven") {
  // sin(0) = 0 removes the x/z pump components; only the y dipole is driven
  // and the model is static. The zero-output consequence is exercised by the
  // trajectory acceptance run; here we pin the structural part.
  auto p = ZeemanParams::cs_defaults();
  p.set_I3(0.5);
  p.set_I4(13.0);
  p.phase_model = ConstantPhase{0.0};
  p.include_offresonant_e4 = false;  // those terms carry an explicit carrier
  auto m = build_zeeman(p);
  CHECK(m.time_independent());
}
