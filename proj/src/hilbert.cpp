#include "oal/hilbert.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace oal {

Factor Factor::atomic(std::vector<std::string> level_labels) {
  if (level_labels.empty()) throw DomainError("atomic factor needs at least one level");
  std::set<std::string> uniq(level_labels.begin(), level_labels.end());
  if (uniq.size() != level_labels.size())
    throw LabelError("duplicate basis label in atomic factor");
  Factor f;
  f.kind = Kind::AtomicLevels;
  f.labels = std::move(level_labels);
  return f;
}

Factor Factor::fock(int truncation) {
  if (truncation < 1)
    throw DomainError("Fock truncation must be >= 1, got " + std::to_string(truncation));
  Factor f;
  f.kind = Kind::FockMode;
  f.fock_truncation = truncation;
  f.labels.reserve(truncation + 1);
  for (int n = 0; n <= truncation; ++n) f.labels.push_back(std::to_string(n));
  return f;
}

int Factor::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw LabelError("unknown basis label '" + label + "'");
  return static_cast<int>(it - labels.begin());
}

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("HilbertSpace needs at least one factor");
  total_dim_ = 1;
  for (const auto& f : factors_) total_dim_ *= f.dim();
}

int HilbertSpace::composite_index(const std::vector<int>& per_factor) const {
  if (per_factor.size() != factors_.size())
    throw DimensionError("per-factor index count mismatch");
  int idx = 0;
  for (size_t k = 0; k < factors_.size(); ++k) {
    if (per_factor[k] < 0 || per_factor[k] >= factors_[k].dim())
      throw DimensionError("factor index out of range");
    idx = idx * factors_[k].dim() + per_factor[k];
  }
  return idx;
}

std::vector<int> HilbertSpace::unravel(int composite) const {
  std::vector<int> out(factors_.size());
  for (int k = static_cast<int>(factors_.size()) - 1; k >= 0; --k) {
    out[k] = composite % factors_[k].dim();
    composite /= factors_[k].dim();
  }
  return out;
}

std::string HilbertSpace::basis_label(int composite) const {
  auto idx = unravel(composite);
  std::ostringstream os;
  for (size_t k = 0; k < factors_.size(); ++k) {
    if (k) os << "|";
    os << factors_[k].labels[idx[k]];
  }
  return os.str();
}

bool HilbertSpace::same_as(const HilbertSpace& other) const {
  if (total_dim_ != other.total_dim_ || factors_.size() != other.factors_.size())
    return false;
  for (size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].dim() != other.factors_[k].dim()) return false;
    if (factors_[k].labels != other.factors_[k].labels) return false;
  }
  return true;
}

SpacePtr make_space(std::vector<Factor> factors) {
  return std::make_shared<const HilbertSpace>(std::move(factors));
}

SpacePtr single_factor_space(const Factor& f) { return make_space({f}); }

Operator Operator::adjoint() const {
  Operator out;
  out.space = space;
  out.mat = SparseCd(mat.adjoint());
  return out;
}

bool Operator::is_hermitian(double tol) const {
  SparseCd diff = mat - SparseCd(mat.adjoint());
  double scale = std::max(1.0, frobenius_norm(mat));
  return frobenius_norm(diff) <= tol * scale;
}

Operator identity_op(const SpacePtr& space) {
  Operator out;
  out.space = space;
  out.mat = SparseCd(space->total_dim(), space->total_dim());
  out.mat.setIdentity();
  return out;
}

Operator make_operator(const SpacePtr& space, const MatrixCd& dense) {
  if (dense.rows() != space->total_dim() || dense.cols() != space->total_dim())
    throw DimensionError("dense matrix does not match space dimension");
  Operator out;
  out.space = space;
  out.mat = dense.sparseView(1.0, 0.0);
  return out;
}

Operator fock_destroy(int truncation) {
  Factor f = Factor::fock(truncation);  // validates truncation >= 1
  Operator out;
  out.space = single_factor_space(f);
  out.mat = SparseCd(f.dim(), f.dim());
  std::vector<Eigen::Triplet<Complex>> trips;
  for (int n = 1; n <= truncation; ++n)
    trips.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  out.mat.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Operator projector(const Factor& f, const std::string& i, const std::string& j) {
  int r = f.index_of(i);
  int c = f.index_of(j);
  Operator out;
  out.space = single_factor_space(f);
  out.mat = SparseCd(f.dim(), f.dim());
  out.mat.insert(r, c) = 1.0;
  out.mat.makeCompressed();
  return out;
}

Operator tensor(const Operator& a, const Operator& b) {
  std::vector<Factor> factors = a.space->factors();
  for (const auto& f : b.space->factors()) factors.push_back(f);
  Operator out;
  out.space = make_space(std::move(factors));
  const int db = b.dim();
  out.mat = SparseCd(a.dim() * db, a.dim() * db);
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<size_t>(a.mat.nonZeros()) * b.mat.nonZeros());
  for (int ka = 0; ka < a.mat.outerSize(); ++ka)
    for (SparseCd::InnerIterator ia(a.mat, ka); ia; ++ia)
      for (int kb = 0; kb < b.mat.outerSize(); ++kb)
        for (SparseCd::InnerIterator ib(b.mat, kb); ib; ++ib)
          trips.emplace_back(ia.row() * db + ib.row(), ia.col() * db + ib.col(),
                             ia.value() * ib.value());
  out.mat.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Operator embed(const Operator& op, int index, const SpacePtr& space) {
  if (index < 0 || index >= space->num_factors())
    throw DimensionError("embed: factor index out of range");
  if (op.dim() != space->factor(index).dim())
    throw DimensionError("embed: operator dimension does not match target factor");
  // Identity on factors left of `index`, op, identity on the rest.
  int dim_left = 1, dim_right = 1;
  for (int k = 0; k < index; ++k) dim_left *= space->factor(k).dim();
  for (int k = index + 1; k < space->num_factors(); ++k)
    dim_right *= space->factor(k).dim();

  Operator out;
  out.space = space;
  out.mat = SparseCd(space->total_dim(), space->total_dim());
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<size_t>(op.mat.nonZeros()) * dim_left * dim_right);
  for (int k = 0; k < op.mat.outerSize(); ++k)
    for (SparseCd::InnerIterator it(op.mat, k); it; ++it)
      for (int l = 0; l < dim_left; ++l)
        for (int r = 0; r < dim_right; ++r) {
          int row = (l * op.dim() + static_cast<int>(it.row())) * dim_right + r;
          int col = (l * op.dim() + static_cast<int>(it.col())) * dim_right + r;
          trips.emplace_back(row, col, it.value());
        }
  out.mat.setFromTriplets(trips.begin(), trips.end());
  return out;
}

static void check_same_space(const Operator& a, const Operator& b) {
  if (!a.space->same_as(*b.space))
    throw DimensionError("operator spaces do not match");
}

Operator operator+(const Operator& a, const Operator& b) {
  check_same_space(a, b);
  return {a.space, SparseCd(a.mat + b.mat)};
}

Operator operator-(const Operator& a, const Operator& b) {
  check_same_space(a, b);
  return {a.space, SparseCd(a.mat - b.mat)};
}

Operator operator*(const Operator& a, const Operator& b) {
  check_same_space(a, b);
  return {a.space, SparseCd(a.mat * b.mat)};
}

Operator operator*(Complex s, const Operator& a) { return {a.space, SparseCd(s * a.mat)}; }
Operator operator*(double s, const Operator& a) { return Complex(s, 0.0) * a; }

Complex expectation(const MatrixCd& rho, const SparseCd& op) {
  if (rho.rows() != op.rows() || rho.cols() != op.cols())
    throw DimensionError("expectation: state/operator dimension mismatch");
  Complex acc = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseCd::InnerIterator it(op, k); it; ++it)
      acc += it.value() * rho(it.col(), it.row());
  return acc;
}

Complex expectation(const MatrixCd& rho, const Operator& op) {
  return expectation(rho, op.mat);
}

Complex expectation(const VectorCd& psi, const SparseCd& op) {
  if (psi.size() != op.rows())
    throw DimensionError("expectation: state/operator dimension mismatch");
  return psi.dot(op * psi);
}

double frobenius_norm(const SparseCd& m) {
  double acc = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCd::InnerIterator it(m, k); it; ++it) acc += std::norm(it.value());
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Clebsch-Gordan coefficients, closed-form Racah sum with exact integer
// factorials; converted to double only at the end.

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt factorial(long n) {
  if (n < 0) throw DomainError("negative factorial in CG evaluation");
  BigInt acc = 1;
  for (long k = 2; k <= n; ++k) acc *= k;
  return acc;
}

// Doubled angular momentum: j stored as 2j so half-integers stay exact.
long doubled(double x, const char* what) {
  double t = 2.0 * x;
  double r = std::round(t);
  if (std::abs(t - r) > 1e-9)
    throw DomainError(std::string(what) + " must be integer or half-integer");
  return static_cast<long>(r);
}

}  // namespace

double clebsch_gordan(double j1, double m1, double j2, double m2, double J,
                      double M) {
  long tj1 = doubled(j1, "j1"), tm1 = doubled(m1, "m1");
  long tj2 = doubled(j2, "j2"), tm2 = doubled(m2, "m2");
  long tJ = doubled(J, "J"), tM = doubled(M, "M");
  if (tj1 < 0 || tj2 < 0 || tJ < 0) throw DomainError("negative angular momentum");
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ)
    throw DomainError("|m| exceeds j");
  // j and m must have the same parity (both integer or both half-integer).
  if (((tj1 ^ tm1) & 1) || ((tj2 ^ tm2) & 1) || ((tJ ^ tM) & 1))
    throw DomainError("m is not consistent with j (parity)");

  if (tM != tm1 + tm2) return 0.0;
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2) return 0.0;
  if (((tj1 + tj2 + tJ) & 1) != 0) return 0.0;  // triangle requires integer sum

  // All of the following are integers (halves of even sums).
  auto h = [](long x) { return x / 2; };
  long a1 = h(tj1 + tj2 - tJ);
  long a2 = h(tj1 - tj2 + tJ);
  long a3 = h(-tj1 + tj2 + tJ);
  long a4 = h(tj1 + tj2 + tJ) + 1;

  BigRat pref = BigRat(BigInt(tJ + 1) * factorial(a1) * factorial(a2) * factorial(a3),
                       factorial(a4));
  pref *= BigRat(factorial(h(tj1 + tm1)) * factorial(h(tj1 - tm1)) *
                     factorial(h(tj2 + tm2)) * factorial(h(tj2 - tm2)) *
                     factorial(h(tJ + tM)) * factorial(h(tJ - tM)),
                 1);

  long kmin = std::max({0L, h(tj2 - tJ - tm1), h(tj1 + tm2 - tJ)});
  long kmax = std::min({a1, h(tj1 - tm1), h(tj2 + tm2)});
  BigRat sum = 0;
  for (long k = kmin; k <= kmax; ++k) {
    BigInt denom = factorial(k) * factorial(a1 - k) * factorial(h(tj1 - tm1) - k) *
                   factorial(h(tj2 + tm2) - k) * factorial(h(tJ - tj2 + tm1) + k) *
                   factorial(h(tJ - tj1 - tm2) + k);
    BigRat term = BigRat(1, denom);
    if (k & 1) term = -term;
    sum += term;
  }
  if (sum == 0) return 0.0;
  double s = static_cast<double>(sum);
  double p = std::sqrt(static_cast<double>(pref));
  return p * s;
}

}  // namespace oal
