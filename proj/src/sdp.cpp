#include "iterlab/sdp.hpp"

#include <cmath>

namespace iterlab {

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::infeasible_numerics: return "infeasible_numerics";
  }
  throw std::invalid_argument("to_string: unknown SDP status");
}

namespace {

// Replaces factor `label` by the maximally mixed state:
// D_label(M) = (1_label / d_label) (x) Tr_label(M), reinserted in place.
// These maps are commuting orthogonal projections in the Frobenius inner
// product, one per factor.
Matrix depolarize_factor(const Matrix& m, const FactorizedSpace& space,
                         const std::string& label) {
  const std::size_t pos = space.index_of(label);
  const Eigen::Index dim = space.factor(pos).dim;
  const Matrix reduced = partial_trace(m, space, {label});

  std::vector<Factor> with_label_first{space.factor(pos)};
  for (std::size_t i = 0; i < space.factor_count(); ++i)
    if (i != pos) with_label_first.push_back(space.factor(i));

  const Matrix lifted =
      kron(Matrix::Identity(dim, dim) / static_cast<double>(dim), reduced);
  return permute_factors(lifted, FactorizedSpace(std::move(with_label_first)),
                         space.labels());
}

// The causality constraints, with R1 eliminated as Tr_{2,3}(R), are
//   P1 R = 0 with P1 = (I - D_2) D_3,
//   P2 R = 0 with P2 = (I - D_0) D_1 D_2 D_3,
//   Tr R = 1,
// and P1, P2 and the identity direction are mutually orthogonal. The
// orthogonal projection onto the affine feasible set is therefore explicit.
struct CausalProjector {
  explicit CausalProjector(Eigen::Index d) : space(comb_space(d)), dim(d * d * d * d) {}

  Matrix p1(const Matrix& v) const {
    const Matrix a = depolarize_factor(v, space, "3");
    return a - depolarize_factor(a, space, "2");
  }

  Matrix p2(const Matrix& v) const {
    Matrix a = depolarize_factor(v, space, "3");
    a = depolarize_factor(a, space, "2");
    a = depolarize_factor(a, space, "1");
    return a - depolarize_factor(a, space, "0");
  }

  Matrix affine(const Matrix& v) const {
    const double trace_gap = v.trace().real() - 1.0;
    return v - p1(v) - p2(v) -
           (trace_gap / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  }

  FactorizedSpace space;
  Eigen::Index dim;
};

RealMatrix psd_project(const RealMatrix& w) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (w + w.transpose()));
  if (solver.info() != Eigen::Success)
    throw NumericalError("psd_project: eigendecomposition failed");
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  return solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
}

// Any W gives a valid dual bound: for feasible R,
//   Tr(M R) = <M - P1 W - P2 W, R> <= lambda_max(M - P1 W - P2 W) * Tr(R).
double dual_bound(const Matrix& objective, const Matrix& w, const CausalProjector& proj) {
  return max_eigenvalue(objective - proj.p1(w) - proj.p2(w));
}

}  // namespace

CombOperator nearest_feasible_comb(const Matrix& hermitian_guess, Eigen::Index d) {
  const CausalProjector proj(d);
  Matrix r = proj.affine(hermitize(hermitian_guess));
  const double lambda_min = min_eigenvalue(r);
  if (lambda_min < 0.0) {
    // Mix with the maximally mixed comb (feasible, full rank) just enough to
    // restore positivity; the affine constraints are preserved by convexity.
    const double dim = static_cast<double>(proj.dim);
    double eps = (-lambda_min * dim) / (1.0 - lambda_min * dim);
    eps = std::min(1.0, eps * (1.0 + 1e-9) + 1e-15);
    r = (1.0 - eps) * r +
        (eps / dim) * Matrix::Identity(proj.dim, proj.dim);
  }
  return make_comb(d, hermitize(r));
}

SdpSolution solve_optimal(const ObjectiveMatrix& obj, Eigen::Index d,
                          double tol_feas, double tol_gap, long max_iter) {
  if (obj.d != d) throw std::invalid_argument("solve_optimal: dimension mismatch");
  if (tol_feas <= 0.0 || tol_gap <= 0.0)
    throw std::invalid_argument("solve_optimal: tolerances must be positive");
  if (max_iter < 1) throw std::invalid_argument("solve_optimal: max_iter must be >= 1");
  if (!is_hermitian(obj.matrix))
    throw std::invalid_argument("solve_optimal: objective must be Hermitian");

  const CausalProjector proj(d);
  const Eigen::Index dim = proj.dim;
  const Matrix objective = psd_floor(hermitize(obj.matrix));

  // Real symmetric embedding; <realify(A), realify(B)> = 2 Tr(A B), so the
  // linear term enters the splitting step as realify(objective) / 2.
  const RealMatrix c_half = realify(objective) * 0.5;
  RealMatrix s = realify(Matrix::Identity(dim, dim) / static_cast<double>(dim));
  RealMatrix y = RealMatrix::Zero(2 * dim, 2 * dim);
  RealMatrix s_prev = s;

  double rho = 1.0;
  const double alpha = 1.6;  // over-relaxation
  constexpr int kCheckEvery = 25;
  constexpr int kAdaptEvery = 50;

  SdpSolution best;
  best.gap = std::numeric_limits<double>::infinity();
  best.status = SdpStatus::max_iter;

  const auto evaluate = [&](long iters_done) -> SdpSolution {
    SdpSolution sol;
    sol.comb = nearest_feasible_comb(complexify(s), d);
    sol.primal_value = (sol.comb.R * objective).trace().real();
    const Matrix w = objective - 2.0 * rho * complexify(y);
    const double bound = dual_bound(objective, w, proj);
    sol.gap = std::max(0.0, bound - sol.primal_value);
    const auto [r_a, r_b] = causality_residuals(sol.comb);
    sol.feasibility_residual = std::max(r_a, r_b);
    sol.iterations = iters_done;
    sol.status = (sol.gap <= tol_gap && sol.feasibility_residual <= tol_feas)
                     ? SdpStatus::optimal
                     : SdpStatus::max_iter;
    return sol;
  };

  for (long k = 0; k < max_iter; ++k) {
    // x-step: projection onto the affine set of the shifted point.
    const Matrix v = complexify(s - y + c_half / rho);
    const RealMatrix x = realify(proj.affine(v));
    const RealMatrix x_relaxed = alpha * x + (1.0 - alpha) * s;

    s_prev.swap(s);
    s = psd_project(x_relaxed + y);
    y += x_relaxed - s;

    if (!s.allFinite() || !y.allFinite()) {
      SdpSolution sol;
      if (best.gap < std::numeric_limits<double>::infinity()) {
        sol = best;
      } else {
        sol.comb = identity_strategy_comb(d);
        sol.primal_value = (sol.comb.R * objective).trace().real();
        sol.gap = std::numeric_limits<double>::infinity();
        sol.iterations = k + 1;
      }
      sol.status = SdpStatus::infeasible_numerics;
      return sol;
    }

    if ((k + 1) % kCheckEvery == 0 || k + 1 == max_iter) {
      SdpSolution sol = evaluate(k + 1);
      if (sol.status == SdpStatus::optimal) return sol;
      if (sol.gap < best.gap) best = sol;
    }

    if ((k + 1) % kAdaptEvery == 0) {
      const double r_primal = (x - s).norm();
      const double r_dual = rho * (s - s_prev).norm();
      if (r_primal > 10.0 * r_dual) {
        rho *= 2.0;
        y *= 0.5;
      } else if (r_dual > 10.0 * r_primal) {
        rho *= 0.5;
        y *= 2.0;
      }
    }
  }

  best.iterations = max_iter;
  best.status = SdpStatus::max_iter;
  return best;
}

}  // namespace iterlab
