#pragma once

#include <string>

#include "iterlab/comb.hpp"

namespace iterlab {

enum class SdpStatus { optimal, max_iter, infeasible_numerics };

std::string to_string(SdpStatus s);

/// Output of the comb optimization. When status == optimal, the returned comb
/// satisfies the causality constraints to within tol_feas (by construction it
/// is exactly affine-feasible and PSD) and
///   primal_value <= optimum <= primal_value + gap,
/// where the upper bound is certified from a dual spectral bound.
struct SdpSolution {
  CombOperator comb;
  double primal_value = 0.0;
  double gap = 0.0;
  double feasibility_residual = 0.0;
  long iterations = 0;
  SdpStatus status = SdpStatus::max_iter;
};

/// Projects a Hermitian guess onto the causality-feasible PSD set:
/// orthogonal projection onto the affine constraint set followed, if needed,
/// by mixing with the maximally mixed comb 1/d^4 to restore positivity.
/// This is the solver's own cleanup step, exposed for reuse and testing.
CombOperator nearest_feasible_comb(const Matrix& hermitian_guess, Eigen::Index d);

/// Maximizes Tr(R * Mtilde) over PSD combs satisfying the causality
/// constraints (the reduced comb R1 is eliminated via R1 = Tr_{2,3}(R)).
/// Operator-splitting (ADMM) iteration over the real symmetric embedding of
/// R: alternate a closed-form projection onto the affine constraint set with
/// a PSD projection by eigendecomposition. The Hermitized, PSD-floored
/// objective is used throughout. Terminates when the certified duality gap
/// is at most tol_gap and the feasibility residual at most tol_feas.
SdpSolution solve_optimal(const ObjectiveMatrix& obj, Eigen::Index d,
                          double tol_feas = 1e-8, double tol_gap = 1e-4,
                          long max_iter = 200000);

}  // namespace iterlab
