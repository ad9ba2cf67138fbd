// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria. The CLI determinism criterion needs --cli PATH.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "iterlab/io.hpp"
#include "iterlab/sdp.hpp"
#include "iterlab/strategies.hpp"

using namespace iterlab;

namespace {

std::string g_cli_path;

struct Check {
  bool ok = true;
  std::ostringstream details;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      details << (details.str().empty() ? "" : "; ") << what;
    }
  }
};

// Criterion 1: closed forms are exact.
bool criterion_closed_forms(Check& c) {
  c.require(std::abs(f_random(3, 2).fidelity - 1.0 / 3.0) < 1e-12, "f_random(3,2) != 1/3");
  for (int d : {2, 3, 4}) {
    const double dd = double(d) * d;
    c.require(std::abs(f_random(1, d).fidelity - 1.0 / dd) < 1e-12, "f_random(1,d) != 1/d^2");
    c.require(std::abs(f_identity(1, d).fidelity - 1.0 / dd) < 1e-12,
              "f_identity(1,d) != 1/d^2");
    for (long n = d; n <= d + 4; ++n)
      c.require(std::abs(f_identity(n, d).fidelity - 1.0 / d) < 1e-12,
                "f_identity(n>=d,d) != 1/d");
  }
  return c.ok;
}

// Criterion 2: Haar moment identity E|Tr U^n|^2 = min(n, d).
bool criterion_trace_moments(Check& c) {
  std::uint64_t stream = 2000;
  double worst = 0.0;
  for (int d : {2, 3, 4})
    for (long n = 1; n <= 6; ++n) {
      RngStream rng(kDefaultSeed, stream++);
      const ScalarEstimate est = trace_moment(d, n, 100000, rng);
      const double dev = std::abs(est.mean - std::min<long>(n, d)) / est.std_error;
      worst = std::max(worst, dev);
      c.require(dev <= 5.0, "d=" + std::to_string(d) + " n=" + std::to_string(n) +
                                " off by " + std::to_string(dev) + " sigma");
    }
  c.details << "worst deviation " << worst << " sigma";
  return c.ok;
}

// Criterion 3: the Haar mean of |U^n>><<U^n| is the depolarizing mixture.
bool criterion_power_projector_mean(Check& c) {
  std::uint64_t stream = 3000;
  for (int d : {2, 3})
    for (long n = 1; n <= 3; ++n) {
      RngStream rng(kDefaultSeed, stream++);
      const OperatorEstimate est = mc_operator_mean(
          [d, n](RngStream& r) -> Matrix {
            const Vector v = vectorize(unitary_power(haar_unitary(d, r), n)).amplitudes();
            return v * v.adjoint();
          },
          10000, rng);
      const double p = p_param(n, d).value;
      const Matrix target = p * bell_projector(d) +
                            ((1.0 - p) / double(d * d)) *
                                Matrix::Identity(d * d, d * d);
      const double err = (est.mean - target).norm();
      c.require(err < 4.0 * est.norm_std_error,
                "d=" + std::to_string(d) + " n=" + std::to_string(n) + " |err| " +
                    std::to_string(err) + " vs 4*se " +
                    std::to_string(4.0 * est.norm_std_error));
    }
  return c.ok;
}

// Criterion 4: the depolarizing iterator reproduces the random-guess value.
bool criterion_depolarizing_consistency(Check& c) {
  std::uint64_t stream = 4000;
  for (const auto& [n, d] : std::vector<std::pair<long, int>>{{2, 2}, {3, 2}, {2, 3}}) {
    RngStream rng(kDefaultSeed, stream++);
    const ChoiMatrix choi = depolarizing_iterator_choi(n, d);
    const ScalarEstimate est = mc_scalar_mean(
        [&choi, n, d](RngStream& r) {
          const UnitaryGate un(unitary_power(haar_unitary(d, r), n));
          return fidelity_to_unitary(choi, un);
        },
        100000, rng);
    const double dev = std::abs(est.mean - f_random(n, d).fidelity) / est.std_error;
    c.require(dev <= 4.0, "(n=" + std::to_string(n) + ",d=" + std::to_string(d) +
                              ") off by " + std::to_string(dev) + " sigma");
  }
  return c.ok;
}

// Criterion 5: estimation dominates random guess; plateau against n = d.
bool criterion_estimation(Check& c) {
  std::map<std::pair<int, long>, StrategyReport> est;
  std::uint64_t stream = 5000;
  for (int d : {2, 3})
    for (long n = 1; n <= 6; ++n) {
      RngStream rng(kDefaultSeed, stream++);
      est[{d, n}] = f_estimation(n, d, 10000, rng);
    }
  for (int d : {2, 3})
    for (long n = 1; n <= 6; ++n) {
      const StrategyReport& r = est[{d, n}];
      c.require(r.fidelity >= f_random(n, d).fidelity - 4.0 * r.std_error,
                "dominance fails at d=" + std::to_string(d) + " n=" + std::to_string(n));
    }
  const StrategyReport& at_d = est[{2, 2}];
  for (long n = 3; n <= 6; ++n) {
    const StrategyReport& r = est[{2, n}];
    const double tol = 4.0 * std::hypot(r.std_error, at_d.std_error);
    c.require(std::abs(r.fidelity - at_d.fidelity) <= tol,
              "plateau fails at n=" + std::to_string(n) + ": |" +
                  std::to_string(r.fidelity) + " - " + std::to_string(at_d.fidelity) +
                  "| > " + std::to_string(tol));
  }
  return c.ok;
}

// Criterion 6: direct channel reaches 1/d beyond n = d, and 1/4 at (2, 2).
bool criterion_direct(Check& c) {
  std::uint64_t stream = 6000;
  for (int d : {2, 3})
    for (long n = d + 1; n <= d + 3; ++n) {
      RngStream rng(kDefaultSeed, stream++);
      const StrategyReport r = f_direct_mc(n, d, 100000, rng);
      c.require(std::abs(r.fidelity - 1.0 / d) <= 4.0 * r.std_error,
                "d=" + std::to_string(d) + " n=" + std::to_string(n));
    }
  RngStream rng(kDefaultSeed, stream++);
  const StrategyReport r22 = f_direct_mc(2, 2, 100000, rng);
  c.require(std::abs(r22.fidelity - 0.25) <= 4.0 * r22.std_error, "(2,2) far from 1/4");
  return c.ok;
}

struct SolvedCase {
  SdpSolution solution;
  std::int64_t samples = 0;
};

std::map<std::pair<int, long>, SolvedCase> g_solved;

const SolvedCase& solve_cached(int d, long n) {
  const auto key = std::make_pair(d, n);
  const auto it = g_solved.find(key);
  if (it != g_solved.end()) return it->second;
  const std::int64_t samples = d == 2 ? 100000 : 30000;
  const double tol_gap = d == 2 ? 2e-4 : 1e-3;
  RngStream rng(kDefaultSeed, 7000 + 100 * d + static_cast<std::uint64_t>(n));
  const ObjectiveMatrix obj = build_objective(n, d, samples, rng);
  SolvedCase sc{solve_optimal(obj, d, 1e-8, tol_gap, 100000), samples};
  return g_solved.emplace(key, std::move(sc)).first->second;
}

// Criterion 7: solver sanity and the known coincidences.
bool criterion_sdp_values(Check& c) {
  const SdpSolution& s12 = solve_cached(2, 1).solution;
  c.require(s12.status == SdpStatus::optimal, "(1,2) not optimal");
  c.require(std::abs(s12.primal_value - 1.0) <= 1e-3,
            "(1,2) primal " + std::to_string(s12.primal_value));
  for (long n : {3L, 4L}) {
    const SdpSolution& s = solve_cached(2, n).solution;
    c.require(s.status == SdpStatus::optimal, "(n,2) not optimal");
    c.require(std::abs(s.primal_value - 0.5) <= 5e-3,
              "(" + std::to_string(n) + ",2) primal " + std::to_string(s.primal_value));
  }
  for (long n : {2L, 3L}) {
    const SdpSolution& s = solve_cached(3, n).solution;
    c.require(s.status == SdpStatus::optimal, "(n,3) not optimal");
    RngStream rng(kDefaultSeed, 7500 + static_cast<std::uint64_t>(n));
    const StrategyReport est = f_estimation(n, 3, 10000, rng);
    const double best = std::max({f_identity(n, 3).fidelity, f_direct_closed(n, 3).fidelity,
                                  f_random(n, 3).fidelity,
                                  est.fidelity - 4.0 * est.std_error});
    c.require(s.primal_value >= best - 5e-3,
              "(" + std::to_string(n) + ",3) below the strategy sandwich");
    c.require(s.primal_value <= 1.0 - 0.05,
              "(" + std::to_string(n) + ",3) above the impossibility margin");
  }
  return c.ok;
}

// Criterion 8: no perfect iterator for n >= 2 (grid d=2: n in 2..6, d=3: n in 2..4).
bool criterion_no_go(Check& c) {
  for (long n = 2; n <= 6; ++n) {
    const SdpSolution& s = solve_cached(2, n).solution;
    c.require(s.primal_value <= 0.95,
              "(2," + std::to_string(n) + ") primal " + std::to_string(s.primal_value));
  }
  for (long n = 2; n <= 4; ++n) {
    const SdpSolution& s = solve_cached(3, n).solution;
    c.require(s.primal_value <= 0.95,
              "(3," + std::to_string(n) + ") primal " + std::to_string(s.primal_value));
  }
  return c.ok;
}

// Criterion 9: independent MC fidelity of the solved comb matches the primal.
bool criterion_cross_check(Check& c) {
  const SolvedCase& sc = solve_cached(2, 3);
  RngStream rng(kDefaultSeed, 9000);
  const ScalarEstimate mc = comb_fidelity_mc(sc.solution.comb, 3, 100000, rng);
  // the estimate and the objective carry independent MC error of the same scale
  const double tol = 4.0 * std::hypot(mc.std_error, mc.std_error) + sc.solution.gap;
  c.require(std::abs(mc.mean - sc.solution.primal_value) <= tol,
            "MC " + std::to_string(mc.mean) + " vs primal " +
                std::to_string(sc.solution.primal_value) + " tol " + std::to_string(tol));
  c.details << "MC " << mc.mean << " primal " << sc.solution.primal_value;
  return c.ok;
}

// Criterion 10: sweep reruns are byte-identical apart from the timestamp line.
bool criterion_cli_determinism(Check& c) {
  if (g_cli_path.empty()) {
    c.require(false, "no --cli PATH given");
    return c.ok;
  }
  const auto run_once = [&](const std::string& out) {
    const std::string cmd = g_cli_path + std::string(" sweep --figure 4 --seed 7 --out ") + out;
    return std::system(cmd.c_str()) == 0;
  };
  const std::string f1 = "acceptance_sweep_a.csv";
  const std::string f2 = "acceptance_sweep_b.csv";
  c.require(run_once(f1) && run_once(f2), "sweep invocation failed");
  if (!c.ok) return false;

  const auto body = [](const std::string& path) {
    std::ifstream is(path);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line))
      if (line.empty() || line[0] != '#') os << line << '\n';
    return os.str();
  };
  const std::string b1 = body(f1);
  const std::string b2 = body(f2);
  std::remove(f1.c_str());
  std::remove(f2.c_str());
  c.require(!b1.empty() && b1 == b2, "CSV bodies differ between reruns");
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "closed-form exactness", criterion_closed_forms},
      {2, "Haar trace moments match min(n,d)", criterion_trace_moments},
      {3, "power-projector mean is the depolarizing mixture", criterion_power_projector_mean},
      {4, "depolarizing iterator reproduces the random-guess fidelity",
       criterion_depolarizing_consistency},
      {5, "estimation dominance and plateau", criterion_estimation},
      {6, "direct channel coincidences", criterion_direct},
      {7, "optimal-iterator values and sandwich", criterion_sdp_values},
      {8, "no perfect iterator for n >= 2", criterion_no_go},
      {9, "solver value agrees with independent MC fidelity", criterion_cross_check},
      {10, "CLI sweep determinism", criterion_cli_determinism},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    Check check;
    bool ok = false;
    try {
      ok = crit.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    if (!ok) ++failures;
    std::printf("criterion %2d: %s  %s%s%s\n", crit.id, ok ? "PASS" : "FAIL", crit.name,
                check.details.str().empty() ? "" : "  -- ", check.details.str().c_str());
    std::fflush(stdout);
  }
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures;
}
