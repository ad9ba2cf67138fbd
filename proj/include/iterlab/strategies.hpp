#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iterlab/channels.hpp"
#include "iterlab/haar.hpp"

namespace iterlab {

/// p_n = (min(n, d) - 1) / (d^2 - 1): the depolarizing parameter of the Haar
/// average of n-th powers. Zero at n = 1, constant for n >= d.
struct PnParameter {
  long n = 0;
  int d = 0;
  double value = 0.0;
};

PnParameter p_param(long n, int d);

/// MC estimate of M_n = integral dU |U>><<U| (x) |U^n>><<U^n| (dimension d^4).
struct EstimationMoment {
  long n = 0;
  int d = 0;
  Matrix matrix;
  std::int64_t samples = 0;
  double norm_std_error = 0.0;
  std::vector<Matrix> block_means;
};

/// d^2 gates that are pairwise orthogonal under <<.|.>> and complete,
/// sum_j |U_j>><<U_j| = 1.
struct OrthonormalGateBasis {
  int d = 0;
  std::vector<UnitaryGate> gates;
};

enum class Strategy {
  random,
  random_mc,
  estimation,
  estimation_onb,
  identity,
  direct,
  direct_mc,
  optimal,
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// One fidelity datum. Closed forms carry std_error = 0 and samples = 0.
struct StrategyReport {
  Strategy strategy = Strategy::random;
  int d = 0;
  long n = 0;
  double fidelity = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

StrategyReport make_report(Strategy s, int d, long n, double fidelity,
                           double std_error, std::int64_t samples, std::uint64_t seed);

/// Closed form for the random-guess strategy: F = p_n^2 + (1 - p_n^2)/d^2.
StrategyReport f_random(long n, int d);

/// MC cross-check of f_random via F = E_{U,V} |<<U^n|V^n>>|^2.
StrategyReport f_random_mc(long n, int d, std::int64_t samples, RngStream& rng);

/// The depolarizing channel with parameter p_n; its Haar-averaged fidelity
/// against U^n equals f_random(n, d).
ChoiMatrix depolarizing_iterator_choi(long n, int d);

/// MC estimate of M_n (Hermitized mean of rank-1 tensor projectors, trace ~ 1).
EstimationMoment m_matrix(long n, int d, std::int64_t samples, RngStream& rng);

/// Estimation-strategy fidelity F = d^2 Tr(M_n^2), evaluated on the MC mean.
/// The quadratic functional of a noisy mean is biased upward by O(1/samples);
/// a note is emitted on std::clog when samples < 1e4. std_error by jackknife.
StrategyReport f_estimation(long n, int d, std::int64_t samples, RngStream& rng);

/// Choi operator of the estimation channel for a fixed input gate u:
/// R = d^2 <<u| ( integral dV |V>><<V| (x) |V^n>><<V^n| ) |u>>, estimated by
/// MC and renormalized to exact unit trace (the raw MC trace is 1 only in
/// expectation).
ChoiMatrix estimation_channel_choi(const UnitaryGate& u, long n,
                                   std::int64_t samples, RngStream& rng);

/// Shift/clock gate basis U_{a,b} = X^a Z^b with X|k> = |k+1 mod d> and
/// Z|k> = w^k |k>, w = exp(2 pi i / d). Orthonormal and complete for every d.
OrthonormalGateBasis weyl_basis(int d);

/// Estimation with a measurement over the orthonormal gate basis:
/// F = E_U sum_j |<<U_j|U>>|^2 |<<U^n|U_j^n>>|^2. The per-sample weights sum
/// to 1 (checked to 1e-10).
StrategyReport f_estimation_onb(long n, int d, std::int64_t samples, RngStream& rng);

/// Closed form for the identity-channel strategy: F = p_n + (1 - p_n)/d^2,
/// which equals min(n, d)/d^2 and hence 1/d for n >= d.
StrategyReport f_identity(long n, int d);

/// MC fidelity of using the gate itself once: F = E_U |<<U^n|U>>|^2.
StrategyReport f_direct_mc(long n, int d, std::int64_t samples, RngStream& rng);

/// Closed form for the direct strategy, derived from
/// |<<U^n|U>>|^2 = |Tr(U^{n-1})|^2 / d^2 and the Haar moment identity:
/// 1 for n = 1, min(n-1, d)/d^2 otherwise.
StrategyReport f_direct_closed(long n, int d);

}  // namespace iterlab
