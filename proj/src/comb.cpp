#include "iterlab/comb.hpp"

namespace iterlab {

FactorizedSpace comb_space(Eigen::Index d) {
  return FactorizedSpace{{"1", d}, {"3", d}, {"0", d}, {"2", d}};
}

CombOperator make_comb(Eigen::Index d, Matrix R) {
  if (d < 2) throw std::invalid_argument("make_comb: dimension must be >= 2");
  const Eigen::Index dim = d * d * d * d;
  if (R.rows() != dim || R.cols() != dim)
    throw std::invalid_argument("make_comb: comb matrix must have dimension d^4");
  if (!is_hermitian(R)) throw std::invalid_argument("make_comb: comb matrix must be Hermitian");
  Matrix R1 = partial_trace(R, comb_space(d), {"2", "3"});
  return {d, std::move(R), std::move(R1)};
}

std::pair<double, double> causality_residuals(const CombOperator& comb) {
  const Eigen::Index d = comb.d;
  const FactorizedSpace space = comb_space(d);
  const Matrix lhs = partial_trace(comb.R, space, {"3"});  // on (1, 0, 2)
  const Matrix rhs = kron(comb.R1, Matrix::Identity(d, d) / static_cast<double>(d));
  const double r_a = (lhs - rhs).norm();

  const FactorizedSpace reduced{{"1", d}, {"0", d}};
  const Matrix t1 = partial_trace(comb.R1, reduced, {"1"});
  const double r_b = (t1 - Matrix::Identity(d, d) / static_cast<double>(d)).norm();
  return {r_a, r_b};
}

bool is_feasible(const CombOperator& comb, double tol) {
  const auto [r_a, r_b] = causality_residuals(comb);
  if (r_a > tol || r_b > tol) return false;
  if (std::abs(comb.R.trace().real() - 1.0) > tol) return false;
  return min_eigenvalue(comb.R) >= -tol * std::max(1.0, comb.R.norm());
}

ObjectiveMatrix build_objective(long n, Eigen::Index d, std::int64_t samples, RngStream& rng) {
  if (n < 1 || d < 2) throw std::invalid_argument("build_objective: need n >= 1 and d >= 2");
  if (samples < 1000) throw std::invalid_argument("build_objective: need at least 1000 samples");
  const double dd = static_cast<double>(d * d);

  // Accumulate on factor order (3, 0, 2, 1), where the first pair carries
  // |U^n>> and the second |U*>>, then permute into the canonical comb order.
  const auto est = mc_operator_mean(
      [n, d, dd](RngStream& r) -> Matrix {
        const Matrix u = haar_unitary(d, r);
        const Vector w = kron(vectorize(unitary_power(u, n)).amplitudes(),
                              vectorize(u.conjugate()).amplitudes());
        return dd * (w * w.adjoint());
      },
      samples, rng);

  const FactorizedSpace built{{"3", d}, {"0", d}, {"2", d}, {"1", d}};
  const std::vector<std::string> canonical{"1", "3", "0", "2"};
  ObjectiveMatrix obj;
  obj.d = d;
  obj.n = n;
  obj.matrix = hermitize(permute_factors(est.mean, built, canonical));
  obj.samples = est.samples;
  obj.norm_std_error = est.norm_std_error;
  return obj;
}

double objective_value(const CombOperator& comb, const ObjectiveMatrix& obj) {
  if (comb.d != obj.d) throw std::invalid_argument("objective_value: dimension mismatch");
  return (comb.R * obj.matrix).trace().real();
}

ChoiMatrix contract(const CombOperator& comb, const UnitaryGate& u) {
  const Eigen::Index d = comb.d;
  if (u.dim() != d) throw std::invalid_argument("contract: dimension mismatch");
  const Eigen::Index d2 = d * d;

  const Matrix rp = permute_factors(comb.R, comb_space(d), {"2", "1", "3", "0"});
  const Vector w = vectorize(u.matrix().conjugate()).amplitudes();

  Matrix out = Matrix::Zero(d2, d2);
  for (Eigen::Index x = 0; x < d2; ++x)
    for (Eigen::Index y = 0; y < d2; ++y)
      out.noalias() += std::conj(w(x)) * w(y) * rp.block(x * d2, y * d2, d2, d2);
  out *= static_cast<double>(d2);
  return ChoiMatrix(d, d, hermitize(out));  // on (3, 0): out = 3, in = 0
}

CombOperator identity_strategy_comb(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("identity_strategy_comb: dimension must be >= 2");
  const Matrix eye_over_d = Matrix::Identity(d, d) / static_cast<double>(d);
  Matrix R = kron(eye_over_d, kron(bell_projector(d), eye_over_d));
  return make_comb(d, std::move(R));
}

CombOperator direct_strategy_comb(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("direct_strategy_comb: dimension must be >= 2");
  const Matrix bell = bell_projector(d);
  const FactorizedSpace built{{"1", d}, {"0", d}, {"3", d}, {"2", d}};
  Matrix R = permute_factors(kron(bell, bell), built, {"1", "3", "0", "2"});
  return make_comb(d, std::move(R));
}

ScalarEstimate comb_fidelity_mc(const CombOperator& comb, long n,
                                std::int64_t samples, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("comb_fidelity_mc: order must be >= 1");
  if (samples < 100) throw std::invalid_argument("comb_fidelity_mc: need at least 100 samples");
  const Eigen::Index d = comb.d;
  const Matrix rp = permute_factors(comb.R, comb_space(d), {"2", "1", "3", "0"});
  const double dd = static_cast<double>(d * d);

  return mc_scalar_mean(
      [&rp, n, d, dd](RngStream& r) {
        const Matrix u = haar_unitary(d, r);
        const Vector z = kron(vectorize(u.conjugate()).amplitudes(),
                              vectorize(unitary_power(u, n)).amplitudes());
        return dd * z.dot(rp * z).real();
      },
      samples, rng);
}

}  // namespace iterlab
