#include "iterlab/strategies.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

namespace iterlab {

PnParameter p_param(long n, int d) {
  if (n < 1) throw std::invalid_argument("p_param: order must be >= 1");
  if (d < 2) throw std::invalid_argument("p_param: dimension must be >= 2");
  const double m = static_cast<double>(std::min<long>(n, d));
  return {n, d, (m - 1.0) / (static_cast<double>(d) * d - 1.0)};
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::random: return "random";
    case Strategy::random_mc: return "random_mc";
    case Strategy::estimation: return "estimation";
    case Strategy::estimation_onb: return "estimation_onb";
    case Strategy::identity: return "identity";
    case Strategy::direct: return "direct";
    case Strategy::direct_mc: return "direct_mc";
    case Strategy::optimal: return "optimal";
  }
  throw std::invalid_argument("to_string: unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
  for (const Strategy s : {Strategy::random, Strategy::random_mc, Strategy::estimation,
                           Strategy::estimation_onb, Strategy::identity, Strategy::direct,
                           Strategy::direct_mc, Strategy::optimal})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

StrategyReport make_report(Strategy s, int d, long n, double fidelity,
                           double std_error, std::int64_t samples, std::uint64_t seed) {
  if (std_error < 0.0) throw NumericalError("StrategyReport: negative stderr");
  if (fidelity - 3.0 * std_error > 1.0 || fidelity + 3.0 * std_error < 0.0)
    throw NumericalError("StrategyReport: fidelity incompatible with [0, 1]");
  return {s, d, n, fidelity, std_error, samples, seed};
}

StrategyReport f_random(long n, int d) {
  const double p = p_param(n, d).value;
  const double dd = static_cast<double>(d) * d;
  return make_report(Strategy::random, d, n, p * p + (1.0 - p * p) / dd, 0.0, 0, 0);
}

StrategyReport f_random_mc(long n, int d, std::int64_t samples, RngStream& rng) {
  if (samples < 100) throw std::invalid_argument("f_random_mc: need at least 100 samples");
  const auto est = mc_scalar_mean(
      [n, d](RngStream& r) {
        const Matrix u = unitary_power(haar_unitary(d, r), n);
        const Matrix v = unitary_power(haar_unitary(d, r), n);
        return std::norm(overlap(vectorize(u), vectorize(v)));
      },
      samples, rng);
  return make_report(Strategy::random_mc, d, n, est.mean, est.std_error, samples, rng.seed());
}

ChoiMatrix depolarizing_iterator_choi(long n, int d) {
  return choi_depolarizing(p_param(n, d).value, d);
}

EstimationMoment m_matrix(long n, int d, std::int64_t samples, RngStream& rng) {
  if (n < 1 || d < 2) throw std::invalid_argument("m_matrix: need n >= 1 and d >= 2");
  if (samples < 1000) throw std::invalid_argument("m_matrix: need at least 1000 samples");
  const auto est = mc_operator_mean(
      [n, d](RngStream& r) -> Matrix {
        const Matrix u = haar_unitary(d, r);
        const Vector w = kron(vectorize(u).amplitudes(),
                              vectorize(unitary_power(u, n)).amplitudes());
        return w * w.adjoint();
      },
      samples, rng);
  return {n, d, est.mean, est.samples, est.norm_std_error, est.block_means};
}

StrategyReport f_estimation(long n, int d, std::int64_t samples, RngStream& rng) {
  if (samples < 1000) throw std::invalid_argument("f_estimation: need at least 1000 samples");
  if (samples < 10000)
    std::clog << "f_estimation: quadratic functional of an MC mean; at " << samples
              << " samples the upward bias can be comparable to the stderr\n";
  const EstimationMoment m = m_matrix(n, d, samples, rng);
  const double dd = static_cast<double>(d) * d;
  const auto functional = [dd](const Matrix& mat) {
    return dd * (mat * mat).trace().real();
  };
  const double f = functional(m.matrix);
  const double se = jackknife_std_error(m.block_means, functional);
  return make_report(Strategy::estimation, d, n, f, se, samples, rng.seed());
}

ChoiMatrix estimation_channel_choi(const UnitaryGate& u, long n,
                                   std::int64_t samples, RngStream& rng) {
  if (samples < 1000)
    throw std::invalid_argument("estimation_channel_choi: need at least 1000 samples");
  const int d = static_cast<int>(u.dim());
  const VectorizedOp vu = vectorize(u.matrix());
  const double dd = static_cast<double>(d) * d;

  Matrix acc = Matrix::Zero(d * d, d * d);
  double trace_acc = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const Matrix v = haar_unitary(d, rng);
    const double w = dd * std::norm(overlap(vu, vectorize(v)));
    const Vector vn = vectorize(unitary_power(v, n)).amplitudes();
    acc.noalias() += w * (vn * vn.adjoint());
    trace_acc += w;
  }
  acc /= static_cast<double>(samples);
  trace_acc /= static_cast<double>(samples);
  // The raw MC trace equals 1 only in expectation; renormalize so the result
  // is an exact Choi operator. A wildly off trace signals a bug upstream.
  if (std::abs(trace_acc - 1.0) > 0.5)
    throw NumericalError("estimation_channel_choi: MC trace far from 1");
  return ChoiMatrix(d, d, hermitize(acc / trace_acc));
}

OrthonormalGateBasis weyl_basis(int d) {
  if (d < 2) throw std::invalid_argument("weyl_basis: dimension must be >= 2");
  Matrix shift = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) shift((k + 1) % d, k) = 1.0;
  Matrix clock = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    clock(k, k) = std::exp(Complex(0.0, 2.0 * std::numbers::pi * static_cast<double>(k) / d));

  OrthonormalGateBasis basis;
  basis.d = d;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      basis.gates.emplace_back(unitary_power(shift, a) * unitary_power(clock, b));

  // Orthonormality and completeness are structural; verify at construction.
  for (std::size_t j = 0; j < basis.gates.size(); ++j)
    for (std::size_t k = 0; k < basis.gates.size(); ++k) {
      const Complex g = overlap(vectorize(basis.gates[j].matrix()),
                                vectorize(basis.gates[k].matrix()));
      const double want = (j == k) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-10)
        throw NumericalError("weyl_basis: gate basis failed the orthonormality check");
    }
  return basis;
}

StrategyReport f_estimation_onb(long n, int d, std::int64_t samples, RngStream& rng) {
  if (samples < 1000) throw std::invalid_argument("f_estimation_onb: need at least 1000 samples");
  const OrthonormalGateBasis basis = weyl_basis(d);
  std::vector<Vector> vj, vjn;
  for (const auto& g : basis.gates) {
    vj.push_back(vectorize(g.matrix()).amplitudes());
    vjn.push_back(vectorize(unitary_power(g.matrix(), n)).amplitudes());
  }
  const auto est = mc_scalar_mean(
      [&, n, d](RngStream& r) {
        const Matrix u = haar_unitary(d, r);
        const Vector vu = vectorize(u).amplitudes();
        const Vector vun = vectorize(unitary_power(u, n)).amplitudes();
        double value = 0.0;
        double weight_sum = 0.0;
        for (std::size_t j = 0; j < vj.size(); ++j) {
          const double w = std::norm(vj[j].dot(vu));
          weight_sum += w;
          value += w * std::norm(vun.dot(vjn[j]));
        }
        if (std::abs(weight_sum - 1.0) > 1e-10)
          throw NumericalError("f_estimation_onb: basis weights do not sum to 1");
        return value;
      },
      samples, rng);
  return make_report(Strategy::estimation_onb, d, n, est.mean, est.std_error, samples, rng.seed());
}

StrategyReport f_identity(long n, int d) {
  const double p = p_param(n, d).value;
  const double dd = static_cast<double>(d) * d;
  return make_report(Strategy::identity, d, n, p + (1.0 - p) / dd, 0.0, 0, 0);
}

StrategyReport f_direct_mc(long n, int d, std::int64_t samples, RngStream& rng) {
  if (n < 1 || d < 2) throw std::invalid_argument("f_direct_mc: need n >= 1 and d >= 2");
  if (samples < 100) throw std::invalid_argument("f_direct_mc: need at least 100 samples");
  const auto est = mc_scalar_mean(
      [n, d](RngStream& r) {
        const Matrix u = haar_unitary(d, r);
        return std::norm(overlap(vectorize(unitary_power(u, n)), vectorize(u)));
      },
      samples, rng);
  return make_report(Strategy::direct_mc, d, n, est.mean, est.std_error, samples, rng.seed());
}

StrategyReport f_direct_closed(long n, int d) {
  if (n < 1 || d < 2) throw std::invalid_argument("f_direct_closed: need n >= 1 and d >= 2");
  const double f = (n == 1) ? 1.0
                            : static_cast<double>(std::min<long>(n - 1, d)) /
                                  (static_cast<double>(d) * d);
  return make_report(Strategy::direct, d, n, f, 0.0, 0, 0);
}

}  // namespace iterlab
