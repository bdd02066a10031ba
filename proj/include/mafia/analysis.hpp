#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mafia/rational.hpp"
#include "mafia/rng.hpp"

// Exact verification of the stochastic identities that govern the reduced
// (R_t, M_t) game chain, plus the exact win-probability oracle.
//
// The reduced chain: at each round, the day vote eliminates a mafia member
// with probability M_t/R_t (a citizen otherwise), then the night kill removes
// a citizen. Mafia wins on weak majority 2*M_t >= R_t, citizens win at
// M_t = 0. Every identity below is computed in exact rational arithmetic;
// floating point appears only in Monte Carlo summaries and large-scale DP
// evaluation.

namespace mafia::analysis {

// ---- process values ----

// X(R, M) = M(M-1)/R. One-step drift of X is exactly zero over a full round.
ExactRational x_value(long R, long M);

// (M/R) X(R-2, M-1) + ((R-M)/R) X(R-2, M) - X(R, M). Domain: R >= 3,
// 1 <= M <= R-1. Always exactly zero.
ExactRational x_drift(long R, long M);

// Y(R, M) = M^2 (M-1)^2 / (R^2 - R M + c M^2 (M-1)^2) with c = 1/100.
// Submartingale on M >= k for a small threshold k (see find_min_k).
ExactRational y_value(long R, long M);
ExactRational y_drift(long R, long M); // domain: M >= 0, R >= M + 3

// Integer-scaled Y denominator: 100 R^2 - 100 R M + M^2 (M-1)^2,
// i.e. 100 * D(R, M).
BigInt y_denominator_scaled(long R, long M);

// The degree-9 drift numerator polynomial; y_drift(R, M) equals
// 10^4 * P(R, M) / (R * Dh(R,M) * Dh(R-2,M) * Dh(R-2,M-1)) with Dh the
// integer-scaled denominator above.
BigInt p_poly(long R, long M);

// Z(V, M) = M / (V + 1), the stage-three supermartingale.
ExactRational z_value(long V, long M);

struct ZDrift {
    ExactRational expectation_minus_z; // four-transition enumeration
    ExactRational closed_form;         // M((M-V)(U+V)+1-M) / ((U+M)(V+1)(U+V)(U+V-1))
};

// Both routes to E[Z_{t+1}] - Z. Domain: U >= 1, M >= 1, V > M. The two
// fields are always exactly equal and <= 0.
ZDrift z_drift_parts(long U, long V, long M);

// Convenience: the drift value; throws DomainError if the two routes disagree
// (they never do) or the preconditions fail.
ExactRational z_drift(long U, long V, long M);

// ---- win probability ----

// Memoized exact DP for the mafia win probability w(R, M) on the reduced
// chain. Adjudication is applied after every single elimination. Not thread
// safe; use one oracle per thread or the locked free function below.
class ExactWinOracle {
public:
    const ExactRational& at(long R, long M);

private:
    void ensure(long R, long M);
    long max_r_ = 0;
    std::vector<std::vector<ExactRational>> cols_; // cols_[M][R]
};

// w(R, M) through a process-wide oracle (internally locked).
ExactRational exact_win_probability(long R, long M);

// Same recursion evaluated in IEEE double; forward-stable (the recursion is
// a convex combination), used for large R where exact rationals are
// impractical. Agreement with the exact oracle is pinned by tests.
double win_probability_fp(long R, long M);

// Iterative fp DP over a whole column of M values at fixed max R; w(R, m)
// lookups for m <= m_max, r <= r_max. Backing store for threshold scans.
class FpWinTable {
public:
    explicit FpWinTable(long r_max);
    double at(long R, long M);

private:
    void ensure(long M);
    long r_max_;
    std::vector<std::vector<double>> cols_;
};

// Probability that a lone mafia member wins: product of day-survival factors
// (1 - 1/R_t) down to weak majority. Equals w(R, 1) exactly.
ExactRational single_mafia_win(long R);

// sqrt(2/(n+1)): upper bound on single_mafia_win(n).
double g_bound(long n);

// ---- polynomial positivity ----

// Smallest k >= 2 such that p_poly(R, M) > 0 for all k <= M <= R/2,
// M <= R <= r_max. nullopt if no such k <= r_max/2 exists.
std::optional<long> find_min_k(long r_max);

// ---- closed-form bounds ----

struct BoundValues {
    double p1;              // 2 sqrt(eta) / (1 - eta): early detective loss bound
    double mafia_floor;     // (eta^2/72) (eta/(8d))^d: mafia win floor vs d detectives
    double citizens_floor;  // 1 - d e^{-d}: citizens win floor, d^2-detective partition play
    double eps_tail;        // sqrt(8 eta): mafia win <= eps_tail whenever eta <= eps^2/8
};

BoundValues bound_values(double eta, long d);

// ---- chain simulation ----

struct TrajectoryPoint {
    int64_t t;
    int64_t R;
    int64_t M;
};

// X value at a trajectory point, as a double.
inline double x_of(int64_t R, int64_t M) {
    return static_cast<double>(M) * static_cast<double>(M - 1) / static_cast<double>(R);
}

struct Pattern {
    int day_steps = 1;   // d
    int round_steps = 2; // r; r - d night steps follow the d day steps
};

struct ReducedOutcome {
    bool mafia_won = false;
    int64_t rounds = 0;
    std::vector<TrajectoryPoint> trajectory; // recorded per round boundary
};

// Samples the reduced chain. Day step: mafia death with probability M/R,
// else citizen death; night step: citizen death. Adjudication (M = 0,
// weak majority, citizen extinction) is checked after every elimination.
// Patterns other than (r=2, d=1) generalize the round structure and are
// exploratory. Pure function of its arguments.
ReducedOutcome simulate_reduced(long R, long M, uint64_t seed, Pattern pattern = {},
                                bool record_trajectory = true);

} // namespace mafia::analysis
