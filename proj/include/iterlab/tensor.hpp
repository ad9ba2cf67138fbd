#pragma once

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iterlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;

/// Thrown when a computation leaves the numerically trustworthy regime
/// (rank-deficient factorization, tolerance violation on a checked input, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared tolerances. Matrices in this project are small (dimension <= 256)
// dense doubles, so absolute-scale Frobenius tolerances are adequate.
inline constexpr double kHermitianTol = 1e-8;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kQrTol = 1e-10;

/// One labeled tensor factor of a composite index space.
struct Factor {
  std::string label;
  Eigen::Index dim = 0;
};

/// An ordered list of labeled tensor factors. A matrix "on" a space has
/// row and column dimension equal to the product of the factor dimensions,
/// with the composite basis index |i0 i1 ... ik> = sum_j i_j * stride_j
/// (row-major digit order, first factor most significant).
class FactorizedSpace {
 public:
  FactorizedSpace() = default;
  FactorizedSpace(std::initializer_list<Factor> factors)
      : FactorizedSpace(std::vector<Factor>(factors)) {}
  explicit FactorizedSpace(std::vector<Factor> factors);

  Eigen::Index dim() const { return dim_; }
  std::size_t factor_count() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }
  std::vector<std::string> labels() const;

  bool has(std::string_view label) const;
  /// Position of `label` in the factor list; throws std::invalid_argument
  /// when the label is unknown.
  std::size_t index_of(std::string_view label) const;

  /// The space left after removing `labels`, in the original relative order.
  FactorizedSpace erased(const std::vector<std::string>& labels) const;
  /// The same factors rearranged into `order` (a permutation of the labels).
  FactorizedSpace permuted(const std::vector<std::string>& order) const;

 private:
  std::vector<Factor> factors_;
  Eigen::Index dim_ = 1;
};

/// Kronecker product, (a (x) b)[(i*rb+k),(j*cb+l)] = a(i,j) * b(k,l).
template <class DerivedA, class DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
    -> Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  using Out = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const typename DerivedA::PlainObject av = a.derived();
  const typename DerivedB::PlainObject bv = b.derived();
  Out out(av.rows() * bv.rows(), av.cols() * bv.cols());
  for (Eigen::Index i = 0; i < av.rows(); ++i)
    for (Eigen::Index j = 0; j < av.cols(); ++j)
      out.block(i * bv.rows(), j * bv.cols(), bv.rows(), bv.cols()) = av(i, j) * bv;
  return out;
}

/// (m + m^dagger) / 2.
inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

/// Partial trace over the factors named in `traced`. The result lives on the
/// remaining factors in their original relative order; Tr(result) = Tr(m).
Matrix partial_trace(const Matrix& m, const FactorizedSpace& space,
                     const std::vector<std::string>& traced);

/// Relabels the composite basis index according to `new_order` (a permutation
/// of the space's labels). A similarity transform by a permutation matrix, so
/// trace, Frobenius norm and spectrum are unchanged.
Matrix permute_factors(const Matrix& m, const FactorizedSpace& space,
                       const std::vector<std::string>& new_order);

struct QrFactors {
  Matrix q;  // unitary
  Matrix r;  // upper triangular
};

/// Householder QR of a square matrix, z = q * r with q unitary.
/// Throws NumericalError on (numerically) rank-deficient input.
QrFactors qr_unitary_factor(const Matrix& z);

struct Eigensystem {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix, h = V diag(values) V^dagger
/// with reconstruction residual below 1e-8 * max(1, |h|_F).
/// Throws std::invalid_argument when h is not Hermitian within tolerance.
Eigensystem hermitian_eigendecomposition(const Matrix& h);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& h);

/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const Matrix& h);

/// Clips negative eigenvalues of a Hermitian matrix to zero.
Matrix psd_floor(const Matrix& h);

/// Embeds a Hermitian h = A + iB into the real symmetric [[A, -B], [B, A]].
/// h is PSD iff the embedding is PSD; eigenvalues double in multiplicity;
/// Tr doubles. Throws std::invalid_argument for non-Hermitian input.
RealMatrix realify(const Matrix& h);

/// Inverse of realify; exact (bit for bit) on matrices of the embedded form.
Matrix complexify(const RealMatrix& s);

}  // namespace iterlab
