#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "iterlab/sdp.hpp"
#include "iterlab/strategies.hpp"
#include "support.hpp"

using namespace iterlab;

namespace {

SdpSolution solve_case(long n, Eigen::Index d, std::int64_t samples, std::uint64_t stream,
                       double tol_gap = 1e-4) {
  RngStream rng(kDefaultSeed, stream);
  const ObjectiveMatrix obj = build_objective(n, d, samples, rng);
  return solve_optimal(obj, d, 1e-8, tol_gap, 50000);
}

}  // namespace

TEST_CASE("feasible projection produces causal PSD combs") {
  RngStream rng(1, 0);
  for (Eigen::Index d : {2, 3}) {
    for (int rep = 0; rep < 20; ++rep) {
      const CombOperator comb =
          nearest_feasible_comb(testsupport::random_hermitian(d * d * d * d, rng), d);
      const auto [ra, rb] = causality_residuals(comb);
      CHECK(ra < 1e-11);
      CHECK(rb < 1e-11);
      CHECK(std::abs(comb.R.trace().real() - 1.0) < 1e-11);
      CHECK(min_eigenvalue(comb.R) > -1e-12);
    }
  }
  // fixtures are fixed points of the projection
  for (Eigen::Index d : {2, 3}) {
    const CombOperator id = identity_strategy_comb(d);
    CHECK((nearest_feasible_comb(id.R, d).R - id.R).norm() < 1e-12);
    const CombOperator dir = direct_strategy_comb(d);
    CHECK((nearest_feasible_comb(dir.R, d).R - dir.R).norm() < 1e-12);
  }
}

TEST_CASE("contractions of combs from the solver cleanup path are valid channels") {
  RngStream rng(2, 0);
  const Eigen::Index d = 2;
  int produced = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const CombOperator comb =
        nearest_feasible_comb(testsupport::random_hermitian(16, rng), d);
    const UnitaryGate u(haar_unitary(d, rng));
    const ChoiMatrix choi = contract(comb, u);  // ChoiMatrix validates PSD + trace
    CHECK(std::abs(choi.matrix().trace().real() - 1.0) < 1e-8);
    ++produced;
  }
  CHECK(produced == 100);
}

TEST_CASE("perfect single use at n = 1") {
  const SdpSolution sol = solve_case(1, 2, 30000, 10);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(std::abs(sol.primal_value - 1.0) < 1e-3);
  CHECK(sol.feasibility_residual < 1e-8);
}

TEST_CASE("optimum at d = 2 coincides with the trivial strategies for n = 3") {
  const SdpSolution sol = solve_case(3, 2, 100000, 11);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(std::abs(sol.primal_value - 0.5) < 5e-3);
}

TEST_CASE("optimum at n = 2, d = 2 is strictly below 1 and above the fixtures") {
  const SdpSolution sol = solve_case(2, 2, 100000, 12);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.primal_value < 0.95);
  CHECK(sol.primal_value >= f_identity(2, 2).fidelity - 5e-3);
  CHECK(sol.primal_value >= f_direct_closed(2, 2).fidelity - 5e-3);
  CHECK(sol.primal_value >= f_random(2, 2).fidelity - 5e-3);
}

TEST_CASE("solution is certified") {
  RngStream rng(kDefaultSeed, 13);
  const ObjectiveMatrix obj = build_objective(2, 2, 30000, rng);
  const SdpSolution sol = solve_optimal(obj, 2, 1e-8, 1e-5, 50000);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.gap <= 1e-5);
  CHECK(sol.feasibility_residual <= 1e-8);
  // the fixtures are feasible, so the certified value dominates them
  CHECK(sol.primal_value + sol.gap >=
        objective_value(identity_strategy_comb(2), obj) - 1e-10);
  CHECK(sol.primal_value + sol.gap >=
        objective_value(direct_strategy_comb(2), obj) - 1e-10);
}

TEST_CASE("iteration cap is honored") {
  RngStream rng(kDefaultSeed, 14);
  const ObjectiveMatrix obj = build_objective(2, 2, 2000, rng);
  const SdpSolution sol = solve_optimal(obj, 2, 1e-14, 1e-14, 30);
  CHECK(sol.status == SdpStatus::max_iter);
  CHECK(sol.iterations == 30);
  // the returned iterate is still a feasible comb
  CHECK(is_feasible(sol.comb, 1e-9));
}

TEST_CASE("plateau of the optimum for n >= d" * doctest::timeout(600)) {
  SUBCASE("d = 2") {
    const SdpSolution a = solve_case(3, 2, 60000, 15);
    const SdpSolution b = solve_case(4, 2, 60000, 16);
    REQUIRE(a.status == SdpStatus::optimal);
    REQUIRE(b.status == SdpStatus::optimal);
    CHECK(std::abs(a.primal_value - b.primal_value) < 5e-3);
  }
  SUBCASE("d = 3") {
    const SdpSolution a = solve_case(3, 3, 30000, 17, 1e-3);
    const SdpSolution b = solve_case(4, 3, 30000, 18, 1e-3);
    REQUIRE(a.status == SdpStatus::optimal);
    REQUIRE(b.status == SdpStatus::optimal);
    CHECK(std::abs(a.primal_value - b.primal_value) < 5e-3);
  }
}

TEST_CASE("optimum sandwich at small scale") {
  for (const auto& [n, d, stream] :
       {std::tuple<long, Eigen::Index, std::uint64_t>{2, 2, 20}, {4, 2, 21}}) {
    const SdpSolution sol = solve_case(n, d, 30000, stream, 5e-4);
    REQUIRE(sol.status == SdpStatus::optimal);
    const double best_fixture =
        std::max({f_identity(n, static_cast<int>(d)).fidelity,
                  f_direct_closed(n, static_cast<int>(d)).fidelity,
                  f_random(n, static_cast<int>(d)).fidelity});
    CHECK(sol.primal_value >= best_fixture - 5e-3);
    CHECK(sol.primal_value <= 1.0 + 1e-9);
    if (n >= 2) CHECK(sol.primal_value <= 0.95);
  }
}

TEST_CASE("objective validation") {
  RngStream rng(kDefaultSeed, 30);
  ObjectiveMatrix obj = build_objective(2, 2, 2000, rng);
  CHECK_THROWS_AS(solve_optimal(obj, 3, 1e-8, 1e-4, 100), std::invalid_argument);
  CHECK_THROWS_AS(solve_optimal(obj, 2, -1.0, 1e-4, 100), std::invalid_argument);
  obj.matrix(0, 1) += Complex(0.5, 0.5);  // break Hermiticity
  CHECK_THROWS_AS(solve_optimal(obj, 2, 1e-8, 1e-4, 100), std::invalid_argument);
}
