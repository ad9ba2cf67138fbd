#pragma once

#include <cstdint>
#include <utility>

#include "iterlab/channels.hpp"
#include "iterlab/haar.hpp"

namespace iterlab {

// A single-slot circuit fragment is a channel from in (x) slot-return to
// slot-feed (x) out. Its normalized Choi operator R lives on four d-dim
// factors in the fixed canonical order (1, 3, 0, 2):
//   0 = initial input state, 1 = wire feeding the slot,
//   2 = wire returning from the slot, 3 = final output.
// Causality of the fragment is equivalent to two linear constraints:
//   Tr_3(R) = R1 (x) 1_2/d      with R1 = Tr_{2,3}(R) on (1, 0),
//   Tr_1(R1) = 1_0/d,
// which force Tr(R) = 1 under the normalized Choi convention.

/// Labels ("1", "3", "0", "2") with dimension d each.
FactorizedSpace comb_space(Eigen::Index d);

struct CombOperator {
  Eigen::Index d = 0;
  Matrix R;   // d^4 on canonical order (1, 3, 0, 2)
  Matrix R1;  // d^2 on (1, 0)
};

/// Wraps a Hermitian matrix as a comb, deriving R1 = Tr_{2,3}(R).
/// Causality is not enforced here; see causality_residuals.
CombOperator make_comb(Eigen::Index d, Matrix R);

/// Frobenius norms of the two causality constraint violations:
/// r_a = |Tr_3(R) - R1 (x) 1_2/d|, r_b = |Tr_1(R1) - 1_0/d|.
std::pair<double, double> causality_residuals(const CombOperator& comb);

bool is_feasible(const CombOperator& comb, double tol = 1e-8);

/// Haar MC estimate of the objective matrix
///   Mtilde_n = d^2 E_U |U^n_{30}>><<U^n_{30}| (x) |U*_{21}>><<U*_{21}|,
/// accumulated on factor order (3, 0, 2, 1), then permuted to the canonical
/// comb order and Hermitized. Tr(Mtilde) = d^2 exactly (each summand has
/// unit projector traces).
struct ObjectiveMatrix {
  Eigen::Index d = 0;
  long n = 0;
  Matrix matrix;  // d^4 on canonical order (1, 3, 0, 2)
  std::int64_t samples = 0;
  double norm_std_error = 0.0;
};

ObjectiveMatrix build_objective(long n, Eigen::Index d, std::int64_t samples, RngStream& rng);

/// Fidelity of a comb against the objective, Tr(R * Mtilde).
double objective_value(const CombOperator& comb, const ObjectiveMatrix& obj);

/// Inserts a gate into the slot: the Choi of the composed channel (on (3, 0))
/// is d^2 <<u*_{21}| R |u*_{21}>>, contracting factors 2 and 1 with the
/// vectorized complex conjugate of u. Feasible combs yield a valid Choi for
/// every u.
ChoiMatrix contract(const CombOperator& comb, const UnitaryGate& u);

/// Feasible comb that discards the input gate and routes the input state
/// straight to the output: R = (1_1/d) (x) |1>><<1|_{30} (x) (1_2/d).
/// Objective value min(n, d)/d^2.
CombOperator identity_strategy_comb(Eigen::Index d);

/// Feasible comb that wires the input state into the slot and the slot's
/// return to the output: R = |1>><<1|_{10} (x) |1>><<1|_{32} (in canonical
/// order via permutation), so contract(., u) = |u>><<u|.
CombOperator direct_strategy_comb(Eigen::Index d);

/// Independent MC cross-check of the objective construction:
/// E_U <<U^n| contract(comb, U) |U^n>>, which agrees with Tr(R * Mtilde_n).
ScalarEstimate comb_fidelity_mc(const CombOperator& comb, long n,
                                std::int64_t samples, RngStream& rng);

}  // namespace iterlab
