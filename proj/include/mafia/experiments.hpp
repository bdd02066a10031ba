#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mafia/analysis.hpp"
#include "mafia/engine.hpp"
#include "mafia/strategies.hpp"

// Seeded, parallel Monte Carlo harness. Trial i of a run with master seed s
// is seeded by derive_seed(s, i); results aggregate by counting, so every
// operation here is a pure function of its arguments regardless of worker
// count or scheduling.

namespace mafia::experiments {

struct EstimateResult {
    uint64_t trials = 0;
    uint64_t wins = 0; // mafia wins
    double phat = 0.0;
    double stderr_ = 0.0;
    double ci_low = 0.0;  // Wilson score, 95%
    double ci_high = 0.0;
    uint64_t master_seed = 0;
};

struct WilsonInterval {
    double low;
    double high;
};

// 95% Wilson score interval for k successes in n trials.
WilsonInterval wilson95(uint64_t k, uint64_t n);

// Fills phat/stderr/CI from (trials, wins).
EstimateResult summarize(uint64_t trials, uint64_t wins, uint64_t master_seed);

// Mafia win rate under the named profile. Reduced-fidelity configs run the
// chain directly; protocol configs run the full engine (forced days resolved
// by their public law). workers = 0 picks the hardware concurrency.
EstimateResult estimate(const GameConfig& config, const std::string& profile_name,
                        uint64_t trials, uint64_t master_seed, int workers = 0);

// ---- eta sweep ----

struct SweepRow {
    double eta;
    int32_t R;
    int32_t M; // round(eta * sqrt(R))
    EstimateResult est;
};

std::vector<SweepRow> sweep_eta(int32_t R, std::span<const double> eta_grid, uint64_t trials,
                                uint64_t master_seed, int workers = 0);

// ---- the half-probability mafia size ----

enum class ThresholdMethod { exact_dp, monte_carlo };

struct ThresholdPoint {
    int32_t R;
    int32_t M_half; // smallest M with mafia win probability >= 1/2
    ThresholdMethod method;
};

// exact_dp scans the DP column; monte_carlo brackets with sequential
// estimates of at least `trials` games per probe.
ThresholdPoint threshold(int32_t R, ThresholdMethod method, uint64_t trials = 2000,
                         uint64_t master_seed = 0, int workers = 0);

struct FitResult {
    double c;        // coefficient of M = c * R^exponent
    double exponent;
    double residual; // sum of squared log-space residuals
};

// Least squares on (log R, log M_half). Needs >= 3 points with distinct R.
FitResult fit_power_law(std::span<const ThresholdPoint> points);

// ---- trajectories ----

struct TrajectoryRun {
    uint64_t run = 0;
    analysis::ReducedOutcome outcome;
};

// Full reduced-chain trajectories, one per run; run r is seeded by
// derive_seed(master_seed, r).
std::vector<TrajectoryRun> trajectories(int32_t R, int32_t M, uint64_t runs,
                                        uint64_t master_seed,
                                        analysis::Pattern pattern = {});

// ---- detective scenarios ----

struct ScenarioResult {
    EstimateResult est;      // mafia win rate, forfeits included
    uint64_t forfeits = 0;
    double citizen_rate = 0.0;
    double mafia_rate = 0.0;
    double forfeit_rate = 0.0;
};

// Runs the named detective profile on the full engine.
ScenarioResult scenario(const std::string& profile_name, const GameConfig& config,
                        const strategies::ScenarioParams& params, uint64_t trials,
                        uint64_t master_seed, int workers = 0);

// ---- protocol vs reduced cross-validation ----

struct CrossValidation {
    EstimateResult protocol_est; // full mechanics: broadcasts, votes, tie-breaks
    EstimateResult reduced_est;  // the (R_t, M_t) chain
    double difference = 0.0;
    double combined_stderr = 0.0;
    bool consistent = false; // |difference| <= 4 * combined_stderr
};

CrossValidation crossvalidate(int32_t R, int32_t M, uint64_t trials, uint64_t master_seed,
                              int workers = 0);

} // namespace mafia::experiments
