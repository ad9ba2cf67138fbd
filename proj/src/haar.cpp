#include "iterlab/haar.hpp"

#include <cmath>

namespace iterlab {

Matrix ginibre(Eigen::Index d, RngStream& rng) {
  if (d < 1) throw std::invalid_argument("ginibre: dimension must be >= 1");
  Matrix z(d, d);
  // Row-major fill so the draw order matches the entry layout convention.
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k) z(j, k) = rng.complex_normal();
  return z;
}

Matrix haar_unitary(Eigen::Index d, RngStream& rng) {
  constexpr int kMaxRetries = 8;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    try {
      const QrFactors qr = qr_unitary_factor(ginibre(d, rng));
      Vector phases(d);
      for (Eigen::Index i = 0; i < d; ++i) phases(i) = qr.r(i, i) / std::abs(qr.r(i, i));
      return qr.q * phases.asDiagonal();
    } catch (const NumericalError&) {
      // Rank-deficient Ginibre draw; resample.
    }
  }
  throw NumericalError("haar_unitary: repeated rank-deficient draws");
}

Matrix unitary_power(const Matrix& u, long n) {
  if (n < 0) throw std::invalid_argument("unitary_power: exponent must be >= 0");
  Matrix result = Matrix::Identity(u.rows(), u.cols());
  Matrix base = u;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

ScalarEstimate mc_scalar_mean(const std::function<double(RngStream&)>& sampler,
                              std::int64_t samples, RngStream& rng) {
  if (samples < 2) throw std::invalid_argument("mc_scalar_mean: need at least 2 samples");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double v = sampler(rng);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(samples - 1));
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

ScalarEstimate trace_moment(Eigen::Index d, long n, std::int64_t samples, RngStream& rng) {
  if (d < 1) throw std::invalid_argument("trace_moment: dimension must be >= 1");
  if (n < 1) throw std::invalid_argument("trace_moment: order must be >= 1");
  if (samples < 100) throw std::invalid_argument("trace_moment: need at least 100 samples");
  return mc_scalar_mean(
      [d, n](RngStream& r) {
        const Matrix u = haar_unitary(d, r);
        return std::norm(unitary_power(u, n).trace());
      },
      samples, rng);
}

OperatorEstimate mc_operator_mean(const std::function<Matrix(RngStream&)>& sampler,
                                  std::int64_t samples, RngStream& rng) {
  constexpr int kBlocks = 10;
  if (samples < kBlocks)
    throw std::invalid_argument("mc_operator_mean: need at least 10 samples");

  std::vector<Matrix> block_sums;
  std::vector<std::int64_t> block_counts(kBlocks, 0);
  Eigen::Index dim = -1;

  std::int64_t done = 0;
  for (int b = 0; b < kBlocks; ++b) {
    const std::int64_t end = samples * (b + 1) / kBlocks;
    for (; done < end; ++done) {
      Matrix x = sampler(rng);
      if (dim < 0) {
        dim = x.rows();
        for (int i = 0; i < kBlocks; ++i) block_sums.emplace_back(Matrix::Zero(dim, dim));
      }
      if (x.rows() != dim || x.cols() != dim)
        throw NumericalError("mc_operator_mean: sample dimension drift");
      block_sums[b] += x;
      ++block_counts[b];
    }
  }

  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& s : block_sums) total += s;
  OperatorEstimate est;
  est.mean = hermitize(total / static_cast<double>(samples));
  est.samples = samples;
  est.block_means.reserve(kBlocks);
  for (int b = 0; b < kBlocks; ++b)
    est.block_means.push_back(hermitize(block_sums[b] / static_cast<double>(block_counts[b])));

  // Jackknife over leave-one-block-out means; Frobenius norm of the spread
  // estimates the Frobenius-scale error of the full mean.
  std::vector<Matrix> leave_out(kBlocks);
  Matrix loo_mean = Matrix::Zero(dim, dim);
  for (int b = 0; b < kBlocks; ++b) {
    leave_out[b] = (total - block_sums[b]) / static_cast<double>(samples - block_counts[b]);
    loo_mean += leave_out[b];
  }
  loo_mean /= static_cast<double>(kBlocks);
  double acc = 0.0;
  for (int b = 0; b < kBlocks; ++b) acc += (leave_out[b] - loo_mean).squaredNorm();
  est.norm_std_error = std::sqrt(acc * (kBlocks - 1) / static_cast<double>(kBlocks));
  return est;
}

double jackknife_std_error(const std::vector<Matrix>& block_means,
                           const std::function<double(const Matrix&)>& functional) {
  const int b_count = static_cast<int>(block_means.size());
  if (b_count < 2) throw std::invalid_argument("jackknife_std_error: need at least 2 blocks");
  const Eigen::Index dim = block_means.front().rows();
  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& m : block_means) total += m;

  std::vector<double> values(b_count);
  double mean = 0.0;
  for (int b = 0; b < b_count; ++b) {
    values[b] = functional((total - block_means[b]) / static_cast<double>(b_count - 1));
    mean += values[b];
  }
  mean /= b_count;
  double acc = 0.0;
  for (const double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc * (b_count - 1) / static_cast<double>(b_count));
}

}  // namespace iterlab
