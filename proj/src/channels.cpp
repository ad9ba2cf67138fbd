#include "iterlab/channels.hpp"

#include <cmath>

namespace iterlab {

namespace {

void check_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

}  // namespace

VectorizedOp::VectorizedOp(Eigen::Index d, Vector amplitudes)
    : d_(d), amps_(std::move(amplitudes)) {
  if (d_ < 1) throw std::invalid_argument("VectorizedOp: dimension must be >= 1");
  if (amps_.size() != d_ * d_)
    throw std::invalid_argument("VectorizedOp: amplitude count must be d^2");
}

VectorizedOp vectorize(const Matrix& v) {
  if (v.rows() != v.cols()) throw std::invalid_argument("vectorize: matrix must be square");
  check_finite(v, "vectorize");
  const Eigen::Index d = v.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Vector amps(d * d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k) amps(j * d + k) = v(j, k) * scale;
  return VectorizedOp(d, std::move(amps));
}

Complex overlap(const VectorizedOp& a, const VectorizedOp& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("overlap: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

Matrix bell_projector(Eigen::Index d) {
  const Vector v = vectorize(Matrix::Identity(d, d)).amplitudes();
  return v * v.adjoint();
}

UnitaryGate::UnitaryGate(Matrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() < 1)
    throw std::invalid_argument("UnitaryGate: matrix must be square");
  check_finite(u_, "UnitaryGate");
  const Eigen::Index d = u_.rows();
  if ((u_.adjoint() * u_ - Matrix::Identity(d, d)).norm() > kHermitianTol)
    throw std::invalid_argument("UnitaryGate: matrix is not unitary within tolerance");
}

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  check_finite(m_, "DensityMatrix");
  if (!is_hermitian(m_))
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within tolerance");
  if (std::abs(m_.trace().real() - 1.0) > kHermitianTol || std::abs(m_.trace().imag()) > kHermitianTol)
    throw std::invalid_argument("DensityMatrix: trace must be 1");
  if (min_eigenvalue(m_) < -kPsdTol * std::max(1.0, m_.norm()))
    throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
}

ChoiMatrix::ChoiMatrix(Eigen::Index dim_in, Eigen::Index dim_out, Matrix m)
    : din_(dim_in), dout_(dim_out), m_(std::move(m)) {
  if (din_ < 1 || dout_ < 1) throw std::invalid_argument("ChoiMatrix: dimensions must be >= 1");
  if (m_.rows() != m_.cols() || m_.rows() != din_ * dout_)
    throw std::invalid_argument("ChoiMatrix: matrix must be square on out (x) in");
  check_finite(m_, "ChoiMatrix");
  if (!is_hermitian(m_))
    throw std::invalid_argument("ChoiMatrix: matrix is not Hermitian within tolerance");
  if (std::abs(m_.trace().real() - 1.0) > kHermitianTol)
    throw std::invalid_argument("ChoiMatrix: trace must be 1 (normalized convention)");
  if (min_eigenvalue(m_) < -kPsdTol * std::max(1.0, m_.norm()))
    throw std::invalid_argument("ChoiMatrix: matrix is not positive semidefinite");
}

ChoiMatrix choi_of_unitary(const UnitaryGate& u) {
  const Vector v = vectorize(u.matrix()).amplitudes();
  return ChoiMatrix(u.dim(), u.dim(), v * v.adjoint());
}

ChoiMatrix choi_depolarizing(double p, Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("choi_depolarizing: dimension must be >= 2");
  const double dd = static_cast<double>(d * d);
  const double pmin = -1.0 / (dd - 1.0);
  if (p < pmin - 1e-12 || p > 1.0 + 1e-12)
    throw std::invalid_argument("choi_depolarizing: parameter outside the CP range");
  Matrix m = p * bell_projector(d) + ((1.0 - p) / dd) * Matrix::Identity(d * d, d * d);
  return ChoiMatrix(d, d, std::move(m));
}

DensityMatrix apply_choi(const ChoiMatrix& r, const DensityMatrix& rho) {
  if (r.dim_in() != rho.dim()) throw std::invalid_argument("apply_choi: dimension mismatch");
  const Eigen::Index din = r.dim_in();
  const Eigen::Index dout = r.dim_out();
  const Matrix rhs = kron(Matrix::Identity(dout, dout), rho.matrix().transpose().eval());
  const FactorizedSpace space{{"out", dout}, {"in", din}};
  Matrix out = static_cast<double>(din) * partial_trace(r.matrix() * rhs, space, {"in"});
  return DensityMatrix(hermitize(out));
}

double fidelity_to_unitary(const ChoiMatrix& r, const UnitaryGate& u) {
  if (r.dim_in() != u.dim() || r.dim_out() != u.dim())
    throw std::invalid_argument("fidelity_to_unitary: dimension mismatch");
  const Vector v = vectorize(u.matrix()).amplitudes();
  const double val = v.dot(r.matrix() * v).real();
  if (val < -1e-6 || val > 1.0 + 1e-6)
    throw NumericalError("fidelity_to_unitary: value outside [0, 1]");
  return std::clamp(val, 0.0, 1.0);
}

namespace {

Matrix psd_sqrt(const Matrix& m, const char* who) {
  const Eigensystem eig = hermitian_eigendecomposition(m);
  if (eig.values.minCoeff() < -kPsdTol * std::max(1.0, m.norm()))
    throw std::invalid_argument(std::string(who) + ": input is not positive semidefinite");
  Eigen::VectorXd roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

double fidelity_general(const ChoiMatrix& r1, const ChoiMatrix& r2) {
  if (r1.dim_in() != r2.dim_in() || r1.dim_out() != r2.dim_out())
    throw std::invalid_argument("fidelity_general: dimension mismatch");
  const Matrix s1 = psd_sqrt(r1.matrix(), "fidelity_general");
  const Matrix inner = hermitize(s1 * r2.matrix() * s1);
  const Eigensystem eig = hermitian_eigendecomposition(inner);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    tr += std::sqrt(std::max(0.0, eig.values(i)));
  const double val = tr * tr;
  return std::clamp(val, 0.0, 1.0);
}

double depolarizing_parameter_of(const ChoiMatrix& r) {
  if (r.dim_in() != r.dim_out())
    throw std::invalid_argument("depolarizing_parameter_of: channel must be square");
  const Eigen::Index d = r.dim_in();
  const Vector v = vectorize(Matrix::Identity(d, d)).amplitudes();
  const double bell_weight = v.dot(r.matrix() * v).real();
  const double dd = static_cast<double>(d * d);
  return (dd * bell_weight - 1.0) / (dd - 1.0);
}

UnitaryGate omega(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("omega: dimension must be >= 2");
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) m(k, d - k - 1) = 1.0;
  return UnitaryGate(std::move(m));
}

UnitaryGate theta_family(double theta, Eigen::Index d) {
  const Matrix m = std::cos(theta) * Matrix::Identity(d, d) +
                   Complex(0.0, std::sin(theta)) * omega(d).matrix();
  return UnitaryGate(m);
}

}  // namespace iterlab
