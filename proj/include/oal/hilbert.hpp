#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "oal/errors.hpp"

namespace oal {

using Complex = std::complex<double>;
using SparseCd = Eigen::SparseMatrix<Complex>;
using MatrixCd = Eigen::MatrixXcd;
using VectorCd = Eigen::VectorXcd;

// One tensor factor of a composite space: either a set of labeled atomic
// levels or a truncated Fock mode {|0>,...,|N>}.
struct Factor {
  enum class Kind { AtomicLevels, FockMode };

  Kind kind = Kind::AtomicLevels;
  std::vector<std::string> labels;  // unique within the factor
  int fock_truncation = 0;          // N, valid for FockMode (dim = N+1)

  static Factor atomic(std::vector<std::string> level_labels);
  static Factor fock(int truncation);

  int dim() const { return static_cast<int>(labels.size()); }
  // Index of a label; throws LabelError if absent.
  int index_of(const std::string& label) const;
};

// Ordered list of factors; composite index is row-major over the factor
// list (first factor varies slowest).
class HilbertSpace {
public:
  explicit HilbertSpace(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  const Factor& factor(int i) const { return factors_.at(i); }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  int total_dim() const { return total_dim_; }

  // Composite index from per-factor indices.
  int composite_index(const std::vector<int>& per_factor) const;
  // Per-factor indices from a composite index.
  std::vector<int> unravel(int composite) const;
  // Human-readable label of a composite basis state, e.g. "g3|1".
  std::string basis_label(int composite) const;

  bool same_as(const HilbertSpace& other) const;

private:
  std::vector<Factor> factors_;
  int total_dim_ = 0;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

// Sparse operator bound to a space.
struct Operator {
  SpacePtr space;
  SparseCd mat;

  int dim() const { return static_cast<int>(mat.rows()); }
  MatrixCd dense() const { return MatrixCd(mat); }
  Operator adjoint() const;
  bool is_hermitian(double tol = 1e-10) const;
};

SpacePtr make_space(std::vector<Factor> factors);
SpacePtr single_factor_space(const Factor& f);

Operator identity_op(const SpacePtr& space);
Operator make_operator(const SpacePtr& space, const MatrixCd& dense);

// Annihilation operator on an (N+1)-dimensional Fock factor,
// <n-1|a|n> = sqrt(n). Throws DomainError for N < 1.
Operator fock_destroy(int truncation);

// |i><j| on an atomic factor.
Operator projector(const Factor& f, const std::string& i, const std::string& j);

// Kronecker product on the concatenated space.
Operator tensor(const Operator& a, const Operator& b);

// Act as `op` on factor `index` of `space`, identity elsewhere.
Operator embed(const Operator& op, int index, const SpacePtr& space);

// Operator algebra (same space required).
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(Complex s, const Operator& a);
Operator operator*(double s, const Operator& a);

// Tr[rho * op].
Complex expectation(const MatrixCd& rho, const Operator& op);
Complex expectation(const MatrixCd& rho, const SparseCd& op);
// <psi|op|psi>.
Complex expectation(const VectorCd& psi, const SparseCd& op);

// Condon-Shortley Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.
// Arguments are integer or half-integer; throws DomainError when malformed.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J,
                      double M);

double frobenius_norm(const SparseCd& m);

}  // namespace oal
