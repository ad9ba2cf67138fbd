#pragma once

#include "iterlab/tensor.hpp"

namespace iterlab {

/// |V>> = (1/sqrt(d)) sum_jk V_jk |j>|k>, the vectorized form of a d x d
/// operator. amplitudes[j*d + k] = V(j, k) / sqrt(d). Unit norm when V is
/// unitary, since <<A|B>> = Tr(A^dagger B) / d.
class VectorizedOp {
 public:
  VectorizedOp(Eigen::Index d, Vector amplitudes);
  Eigen::Index dim() const { return d_; }
  const Vector& amplitudes() const { return amps_; }

 private:
  Eigen::Index d_;
  Vector amps_;
};

/// Vectorizes a square operator; equals (v (x) 1)|1>> applied to the
/// maximally entangled state.
VectorizedOp vectorize(const Matrix& v);

/// <<a|b>> = Tr(a^dagger b) / d.
Complex overlap(const VectorizedOp& a, const VectorizedOp& b);

/// |1>><<1|, the projector onto the maximally entangled state (trace 1).
Matrix bell_projector(Eigen::Index d);

class UnitaryGate {
 public:
  explicit UnitaryGate(Matrix u);
  Eigen::Index dim() const { return u_.rows(); }
  const Matrix& matrix() const { return u_; }

 private:
  Matrix u_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

/// Normalized Choi operator of a channel: the image of |1>><<1| under
/// (channel (x) identity), acting on out (x) in. Hermitian, PSD, trace 1.
class ChoiMatrix {
 public:
  ChoiMatrix(Eigen::Index dim_in, Eigen::Index dim_out, Matrix m);
  Eigen::Index dim_in() const { return din_; }
  Eigen::Index dim_out() const { return dout_; }
  const Matrix& matrix() const { return m_; }

 private:
  Eigen::Index din_, dout_;
  Matrix m_;
};

/// Choi operator of the unitary channel rho -> u rho u^dagger: the rank-1
/// projector |u>><<u|.
ChoiMatrix choi_of_unitary(const UnitaryGate& u);

/// Choi of rho -> p rho + (1-p) 1/d. Complete positivity requires
/// -1/(d^2-1) <= p <= 1.
ChoiMatrix choi_depolarizing(double p, Eigen::Index d);

/// Channel action recovered from the normalized Choi operator:
/// T(rho) = d * Tr_in( R (1_out (x) rho^T) ).
DensityMatrix apply_choi(const ChoiMatrix& r, const DensityMatrix& rho);

/// Channel fidelity against a unitary channel: <<u| R |u>>, in [0, 1].
double fidelity_to_unitary(const ChoiMatrix& r, const UnitaryGate& u);

/// State fidelity between two Choi operators, (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2.
/// Eigenvalues of the PSD inputs below -1e-9 (relative) are rejected; tiny
/// negative eigenvalues are clipped to zero before the square roots.
double fidelity_general(const ChoiMatrix& r1, const ChoiMatrix& r2);

/// p = (d^2 <<1|R|1>> - 1) / (d^2 - 1): the depolarizing parameter of the
/// twirl of the channel. Recovers p exactly for a depolarizing Choi.
double depolarizing_parameter_of(const ChoiMatrix& r);

/// The flip gate sum_k |k><d-k-1| (anti-diagonal ones); unitary, Hermitian,
/// squares to the identity.
UnitaryGate omega(Eigen::Index d);

/// cos(theta) 1 + i sin(theta) omega(d); unitary for every theta.
UnitaryGate theta_family(double theta, Eigen::Index d);

}  // namespace iterlab
