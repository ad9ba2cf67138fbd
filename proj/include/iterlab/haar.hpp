#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "iterlab/rng.hpp"
#include "iterlab/tensor.hpp"

namespace iterlab {

/// d x d matrix of i.i.d. standard complex normal entries
/// (real and imaginary parts independent N(0, 1/2)).
Matrix ginibre(Eigen::Index d, RngStream& rng);

/// Haar-distributed random unitary: QR-factorize a Ginibre matrix and fix the
/// phase gauge, U = Q * diag(r_ii / |r_ii|). Unitary within 1e-10 Frobenius.
/// Degenerate factorizations are resampled internally (bounded retries).
Matrix haar_unitary(Eigen::Index d, RngStream& rng);

/// u^n for n >= 0 by repeated squaring.
Matrix unitary_power(const Matrix& u, long n);

/// Monte Carlo mean of a scalar with its standard error.
struct ScalarEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::int64_t samples = 0;
};

/// Monte Carlo mean of a Hermitian-matrix-valued integrand. The mean is
/// re-Hermitized; norm_std_error is a block-jackknife (10 blocks) estimate of
/// the Frobenius-norm scale of the estimation error. The per-block means are
/// kept so consumers can jackknife nonlinear functionals of the mean.
struct OperatorEstimate {
  Matrix mean;
  std::int64_t samples = 0;
  double norm_std_error = 0.0;
  std::vector<Matrix> block_means;  // 10 equal blocks, Hermitized
};

/// MC estimate of the Haar moment integral of |Tr(U^n)|^2 over U(d).
/// The exact value is min(n, d).
ScalarEstimate trace_moment(Eigen::Index d, long n, std::int64_t samples, RngStream& rng);

ScalarEstimate mc_scalar_mean(const std::function<double(RngStream&)>& sampler,
                              std::int64_t samples, RngStream& rng);

/// Generic operator-valued MC integrator; the sampler must return Hermitian
/// matrices of one fixed dimension (dimension drift raises NumericalError).
OperatorEstimate mc_operator_mean(const std::function<Matrix(RngStream&)>& sampler,
                                  std::int64_t samples, RngStream& rng);

/// Jackknife standard error of a scalar functional of the block means:
/// leave one block out, re-evaluate, and combine.
double jackknife_std_error(const std::vector<Matrix>& block_means,
                           const std::function<double(const Matrix&)>& functional);

}  // namespace iterlab
