#include "iterlab/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace iterlab {

namespace {

std::vector<Eigen::Index> strides_of(const std::vector<Factor>& factors) {
  std::vector<Eigen::Index> strides(factors.size(), 1);
  for (std::size_t i = factors.size(); i-- > 1;)
    strides[i - 1] = strides[i] * factors[i].dim;
  return strides;
}

// Flat offsets of every multi-index over `which` positions, using the
// composite strides of the full space.
std::vector<Eigen::Index> flat_offsets(const std::vector<Factor>& factors,
                                       const std::vector<std::size_t>& which) {
  const auto strides = strides_of(factors);
  Eigen::Index count = 1;
  for (std::size_t p : which) count *= factors[p].dim;
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(count), 0);
  Eigen::Index repeat = count;
  for (std::size_t p : which) {
    const Eigen::Index dim = factors[p].dim;
    const Eigen::Index stride = strides[p];
    repeat /= dim;
    Eigen::Index idx = 0;
    while (idx < count) {
      for (Eigen::Index digit = 0; digit < dim; ++digit)
        for (Eigen::Index r = 0; r < repeat; ++r) offsets[idx++] += digit * stride;
    }
  }
  return offsets;
}

}  // namespace

FactorizedSpace::FactorizedSpace(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  for (const auto& f : factors_) {
    if (f.dim < 1) throw std::invalid_argument("FactorizedSpace: factor dimension must be >= 1");
    if (f.label.empty()) throw std::invalid_argument("FactorizedSpace: empty factor label");
    dim_ *= f.dim;
  }
  for (std::size_t i = 0; i < factors_.size(); ++i)
    for (std::size_t j = i + 1; j < factors_.size(); ++j)
      if (factors_[i].label == factors_[j].label)
        throw std::invalid_argument("FactorizedSpace: duplicate label '" + factors_[i].label + "'");
}

std::vector<std::string> FactorizedSpace::labels() const {
  std::vector<std::string> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

bool FactorizedSpace::has(std::string_view label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t FactorizedSpace::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw std::invalid_argument("FactorizedSpace: unknown label '" + std::string(label) + "'");
}

FactorizedSpace FactorizedSpace::erased(const std::vector<std::string>& labels) const {
  std::vector<bool> drop(factors_.size(), false);
  for (const auto& l : labels) {
    const std::size_t i = index_of(l);
    if (drop[i]) throw std::invalid_argument("FactorizedSpace: label erased twice: '" + l + "'");
    drop[i] = true;
  }
  std::vector<Factor> rest;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (!drop[i]) rest.push_back(factors_[i]);
  return FactorizedSpace(std::move(rest));
}

FactorizedSpace FactorizedSpace::permuted(const std::vector<std::string>& order) const {
  if (order.size() != factors_.size())
    throw std::invalid_argument("FactorizedSpace: order is not a permutation of the labels");
  std::vector<Factor> out;
  std::vector<bool> used(factors_.size(), false);
  for (const auto& l : order) {
    const std::size_t i = index_of(l);
    if (used[i]) throw std::invalid_argument("FactorizedSpace: repeated label in order: '" + l + "'");
    used[i] = true;
    out.push_back(factors_[i]);
  }
  return FactorizedSpace(std::move(out));
}

Matrix partial_trace(const Matrix& m, const FactorizedSpace& space,
                     const std::vector<std::string>& traced) {
  if (m.rows() != m.cols()) throw std::invalid_argument("partial_trace: matrix must be square");
  if (m.rows() != space.dim())
    throw std::invalid_argument("partial_trace: space dimension does not match the matrix");

  std::vector<bool> is_traced(space.factor_count(), false);
  for (const auto& l : traced) {
    const std::size_t i = space.index_of(l);
    if (is_traced[i]) throw std::invalid_argument("partial_trace: label traced twice: '" + l + "'");
    is_traced[i] = true;
  }
  std::vector<std::size_t> kept, gone;
  for (std::size_t i = 0; i < space.factor_count(); ++i)
    (is_traced[i] ? gone : kept).push_back(i);

  const auto kept_off = flat_offsets(space.factors(), kept);
  const auto gone_off = flat_offsets(space.factors(), gone);
  const auto dk = static_cast<Eigen::Index>(kept_off.size());

  Matrix out(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex sum = 0.0;
      for (const Eigen::Index t : gone_off) sum += m(kept_off[a] + t, kept_off[b] + t);
      out(a, b) = sum;
    }
  }
  return out;
}

Matrix permute_factors(const Matrix& m, const FactorizedSpace& space,
                       const std::vector<std::string>& new_order) {
  if (m.rows() != m.cols()) throw std::invalid_argument("permute_factors: matrix must be square");
  if (m.rows() != space.dim())
    throw std::invalid_argument("permute_factors: space dimension does not match the matrix");
  const FactorizedSpace target = space.permuted(new_order);  // validates the permutation

  // sigma[p] = old position of the factor placed at new position p.
  std::vector<std::size_t> sigma;
  sigma.reserve(new_order.size());
  for (const auto& l : new_order) sigma.push_back(space.index_of(l));

  const auto old_strides = strides_of(space.factors());
  const auto new_strides = strides_of(target.factors());

  const Eigen::Index dim = space.dim();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(dim));
  for (Eigen::Index flat = 0; flat < dim; ++flat) {
    Eigen::Index out = 0;
    for (std::size_t p = 0; p < sigma.size(); ++p) {
      const std::size_t o = sigma[p];
      const Eigen::Index digit = (flat / old_strides[o]) % space.factor(o).dim;
      out += digit * new_strides[p];
    }
    map[static_cast<std::size_t>(flat)] = out;
  }

  Matrix out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) out(map[r], map[c]) = m(r, c);
  return out;
}

QrFactors qr_unitary_factor(const Matrix& z) {
  if (z.rows() != z.cols()) throw std::invalid_argument("qr_unitary_factor: matrix must be square");
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();

  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    const double a = std::abs(r(i, i));
    dmin = std::min(dmin, a);
    dmax = std::max(dmax, a);
  }
  if (!(dmin > 1e-12 * std::max(1.0, dmax)))
    throw NumericalError("qr_unitary_factor: rank-deficient input");
  return {std::move(q), std::move(r)};
}

Eigensystem hermitian_eigendecomposition(const Matrix& h) {
  if (!is_hermitian(h))
    throw std::invalid_argument("hermitian_eigendecomposition: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h));
  if (solver.info() != Eigen::Success)
    throw NumericalError("hermitian_eigendecomposition: solver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double max_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

Matrix psd_floor(const Matrix& h) {
  const Eigensystem eig = hermitian_eigendecomposition(h);
  Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
}

RealMatrix realify(const Matrix& h) {
  if (!is_hermitian(h)) throw std::invalid_argument("realify: input is not Hermitian");
  const Eigen::Index n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

Matrix complexify(const RealMatrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0)
    throw std::invalid_argument("complexify: matrix must be square with even dimension");
  const Eigen::Index n = s.rows() / 2;
  // Averaging the redundant blocks recovers embedded matrices bit for bit
  // ((x + x) / 2 == x in IEEE) and symmetrizes slight drift otherwise.
  const RealMatrix re = 0.5 * (s.topLeftCorner(n, n) + s.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (s.bottomLeftCorner(n, n) - s.topRightCorner(n, n));
  return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

}  // namespace iterlab
