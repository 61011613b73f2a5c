#include "oal/steady.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <sstream>

namespace oal {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// kron(A, B) over the flat d^2 index k = i + j*d (column-major vec).
void kron_into(const SparseCd& A, const SparseCd& B, std::vector<Triplet>& out,
               Complex scale) {
  const int db = static_cast<int>(B.rows());
  for (int ka = 0; ka < A.outerSize(); ++ka)
    for (SparseCd::InnerIterator ia(A, ka); ia; ++ia)
      for (int kb = 0; kb < B.outerSize(); ++kb)
        for (SparseCd::InnerIterator ib(B, kb); ib; ++ib)
          out.emplace_back(ia.row() * db + ib.row(), ia.col() * db + ib.col(),
                           scale * ia.value() * ib.value());
}

SparseCd sparse_identity(int n) {
  SparseCd id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace

MatrixCd Liouvillian::apply(const MatrixCd& rho) const {
  if (rho.rows() != dim || rho.cols() != dim)
    throw DimensionError("Liouvillian::apply: dimension mismatch");
  VectorCd v = Eigen::Map<const VectorCd>(rho.data(), dim * dim);
  VectorCd w = superop * v;
  return Eigen::Map<const MatrixCd>(w.data(), dim, dim);
}

SparseCd commutator_superop(const SparseCd& H) {
  const int d = static_cast<int>(H.rows());
  SparseCd I = sparse_identity(d);
  std::vector<Triplet> trips;
  const Complex im(0.0, 1.0);
  // vec(H rho) = kron(I, H) vec(rho); vec(rho H) = kron(H^T, I) vec(rho)
  kron_into(I, H, trips, -im);
  kron_into(SparseCd(H.transpose()), I, trips, im);
  SparseCd out(d * d, d * d);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseCd dissipator_superop(const SparseCd& c) {
  const int d = static_cast<int>(c.rows());
  SparseCd I = sparse_identity(d);
  SparseCd cdc = SparseCd(c.adjoint()) * c;
  std::vector<Triplet> trips;
  kron_into(SparseCd(c.conjugate()), c, trips, 1.0);
  kron_into(I, cdc, trips, -0.5);
  kron_into(SparseCd(cdc.transpose()), I, trips, -0.5);
  SparseCd out(d * d, d * d);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Liouvillian liouvillian(const ModelSpec& model) {
  if (!model.time_independent())
    throw DomainError("liouvillian: model is time-dependent; use the dynamics module");
  const int d = model.dim();
  Liouvillian L;
  L.dim = d;
  L.superop = commutator_superop(model.constant_hamiltonian());
  for (const auto& ch : model.collapse_ops)
    L.superop += dissipator_superop(ch.op.mat);
  return L;
}

namespace {

// Detect closed, mutually unreachable subspaces of the basis-state transition
// graph (H edges both ways, collapse edges directed). More than one terminal
// strongly connected component means separately conserved steady states.
std::vector<std::vector<int>> terminal_components(const ModelSpec& model) {
  const int d = model.dim();
  std::vector<std::vector<int>> adj(d);
  auto add_edges = [&](const SparseCd& m, bool both_ways) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseCd::InnerIterator it(m, k); it; ++it) {
        if (it.row() == it.col() || std::abs(it.value()) < 1e-14) continue;
        adj[it.col()].push_back(static_cast<int>(it.row()));
        if (both_ways) adj[it.row()].push_back(static_cast<int>(it.col()));
      }
  };
  add_edges(model.hamiltonian_at(0.0), true);
  for (const auto& ch : model.collapse_ops) add_edges(ch.op.mat, false);

  // Tarjan SCC, iterative.
  std::vector<int> index(d, -1), low(d, 0), comp(d, -1);
  std::vector<bool> on_stack(d, false);
  std::vector<int> stack;
  int next_index = 0, ncomp = 0;
  for (int start = 0; start < d; ++start) {
    if (index[start] != -1) continue;
    std::vector<std::pair<int, size_t>> call{{start, 0}};
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      if (ei == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (ei < adj[v].size()) {
        int w = adj[v][ei++];
        if (index[w] == -1) {
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      int finished = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }
  // Terminal = no edge leaving the component.
  std::vector<bool> terminal(ncomp, true);
  for (int v = 0; v < d; ++v)
    for (int w : adj[v])
      if (comp[v] != comp[w]) terminal[comp[v]] = false;
  std::vector<std::vector<int>> out(ncomp);
  for (int v = 0; v < d; ++v)
    if (terminal[comp[v]]) out[comp[v]].push_back(v);
  std::vector<std::vector<int>> terminals;
  for (auto& c : out)
    if (!c.empty()) terminals.push_back(std::move(c));
  return terminals;
}

}  // namespace

MatrixCd steady_state(const ModelSpec& model, const SteadyOptions& opts) {
  const int d = model.dim();
  auto terminals = terminal_components(model);
  if (terminals.size() > 1) {
    std::ostringstream os;
    os << "degenerate steady state: " << terminals.size()
       << " disjoint closed subspaces, e.g. states {";
    for (size_t k = 0; k < terminals.size(); ++k)
      os << (k ? ", " : "") << model.space->basis_label(terminals[k].front());
    os << "} are separately conserved";
    throw DegenerateSteadyStateError(os.str());
  }

  Liouvillian L = liouvillian(model);
  const double l_norm = frobenius_norm(L.superop);

  // Replace the row of element (0,0) with the trace functional and solve
  // L' x = e_0.
  std::vector<Triplet> trips;
  trips.reserve(L.superop.nonZeros() + d);
  for (int k = 0; k < L.superop.outerSize(); ++k)
    for (SparseCd::InnerIterator it(L.superop, k); it; ++it)
      if (it.row() != 0) trips.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < d; ++i) trips.emplace_back(0, i + i * d, 1.0);
  SparseCd A(d * d, d * d);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::SparseLU<SparseCd, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  VectorCd x;
  bool lu_ok = (lu.info() == Eigen::Success);
  if (lu_ok) {
    VectorCd b = VectorCd::Zero(d * d);
    b(0) = 1.0;
    x = lu.solve(b);
    lu_ok = (lu.info() == Eigen::Success) && x.allFinite();
  }
  if (!lu_ok) {
    // Fallback: smallest-magnitude eigenvector of the dense Liouvillian.
    if (d > 64)
      throw ConvergenceError("steady_state: sparse LU failed and dense fallback is too large");
    MatrixCd Ld(L.superop);
    Eigen::ComplexEigenSolver<MatrixCd> es(Ld);
    int best = 0;
    for (int k = 1; k < es.eigenvalues().size(); ++k)
      if (std::abs(es.eigenvalues()(k)) < std::abs(es.eigenvalues()(best))) best = k;
    x = es.eigenvectors().col(best);
  }

  MatrixCd rho = Eigen::Map<const MatrixCd>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint().eval());
  Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14)
    throw DegenerateSteadyStateError("steady_state: traceless null vector");
  rho /= tr;

  // Residual against the untouched generator.
  MatrixCd res = L.apply(rho);
  double resn = res.norm();
  if (resn > opts.residual_tol * std::max(l_norm, 1.0))
    throw ConvergenceError("steady_state: residual " + std::to_string(resn) +
                           " exceeds tolerance (possibly degenerate null space)");

  // Positivity repair: clip numerical dust, abort on real negativity.
  Eigen::SelfAdjointEigenSolver<MatrixCd> es(rho);
  double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < 0.0) {
    Eigen::VectorXd ev = es.eigenvalues();
    double clipped = 0.0;
    for (int k = 0; k < ev.size(); ++k)
      if (ev(k) < 0.0) {
        clipped -= ev(k);
        ev(k) = 0.0;
      }
    if (clipped > opts.max_clipped_mass)
      throw ConvergenceError("steady_state: clipped mass " + std::to_string(clipped) +
                             " exceeds limit");
    rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    rho /= rho.trace();
  }
  return rho;
}

SteadyObservables steady_observables(const MatrixCd& rho, const ModelSpec& model,
                                     const FourStateParams& params) {
  SteadyObservables out;
  // Photon numbers per mode: observables named "n" or "n_<mode>".
  std::vector<std::string> mode_obs;
  for (const auto& [name, op] : model.observables) {
    if (name == "n" || name.rfind("n_", 0) == 0) mode_obs.push_back(name);
    if (name.rfind("pop_", 0) == 0)
      out.populations[name.substr(4)] = expectation(rho, op).real();
  }
  for (const auto& name : mode_obs) {
    double n = expectation(rho, model.observable(name)).real();
    out.n_per_mode[name] = n;
    out.n_bar += n;
  }

  // Q and g2(0) for the total photon number via the annihilators present.
  std::vector<std::string> ann;
  for (const auto& [name, op] : model.observables)
    if (name == "a" || name == "b") ann.push_back(name);
  if (out.n_bar > 0.0 && !ann.empty()) {
    // <n^2> and <: n^2 :> summed over modes (cross terms via a^dag a b^dag b).
    double n2 = 0.0, normal2 = 0.0;
    for (const auto& na : ann)
      for (const auto& nb : ann) {
        const SparseCd& A = model.observable(na).mat;
        const SparseCd& B = model.observable(nb).mat;
        SparseCd nA = SparseCd(A.adjoint()) * A;
        SparseCd nB = SparseCd(B.adjoint()) * B;
        n2 += expectation(rho, SparseCd(nA * nB)).real();
        // normal order: a^dag b^dag b a
        SparseCd no = SparseCd(A.adjoint()) * SparseCd(B.adjoint()) * B * A;
        normal2 += expectation(rho, no).real();
      }
    out.mandel_Q = (n2 - out.n_bar * out.n_bar) / out.n_bar - 1.0;
    out.g2_0 = normal2 / (out.n_bar * out.n_bar);
  }

  double sigma_e3 = out.populations.count("e3") ? out.populations.at("e3") : 0.0;
  if (sigma_e3 > 0.0)
    out.ratio_R = params.kappa * out.n_bar / (params.gamma43 * sigma_e3);

  CriticalNumbers cn = critical_numbers(params);
  double c143 = cn.C1 * (params.gamma / params.gamma43);
  out.beta_43 = 2.0 * c143 / (1.0 + 2.0 * c143);
  return out;
}

AdaptiveSteadyResult steady_state_adaptive(const FourStateParams& p, double rel_tol,
                                           std::optional<double> raman_beta34) {
  FourStateParams q = p;
  q.fock_truncation = default_truncation(p);
  auto solve = [&](const FourStateParams& pp) {
    AdaptiveSteadyResult r;
    r.params = pp;
    r.model = raman_beta34 ? build_raman_variant(pp, *raman_beta34) : build_four_state(pp);
    r.rho = steady_state(r.model);
    r.obs = steady_observables(r.rho, r.model, pp);
    r.truncation = pp.fock_truncation;
    return r;
  };
  AdaptiveSteadyResult cur = solve(q);
  for (int iter = 0; iter < 20; ++iter) {
    FourStateParams q2 = cur.params;
    q2.fock_truncation += 5;
    AdaptiveSteadyResult next = solve(q2);
    double ref = std::max(std::abs(next.obs.n_bar), 1e-12);
    if (std::abs(next.obs.n_bar - cur.obs.n_bar) < rel_tol * ref) return next;
    cur = std::move(next);
  }
  throw ConvergenceError("steady_state_adaptive: truncation did not converge");
}

}  // namespace oal
