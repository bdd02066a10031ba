#include "mafia/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace mafia::experiments {

namespace {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct TrialCounts {
    uint64_t wins = 0;
    uint64_t forfeits = 0;
};

// Runs `trials` independent trials, trial i seeded by derive_seed(master, i),
// and sums the per-trial counts. The sum is independent of the partition of
// trials across workers.
template <typename TrialFn>
TrialCounts run_trials(uint64_t trials, uint64_t master_seed, int workers, TrialFn&& trial) {
    const int n_workers = resolve_workers(workers);
    std::atomic<uint64_t> next{0};
    std::vector<TrialCounts> partial(static_cast<size_t>(n_workers));
    auto body = [&](int w) {
        TrialCounts local;
        constexpr uint64_t kChunk = 16;
        for (;;) {
            const uint64_t start = next.fetch_add(kChunk);
            if (start >= trials) break;
            const uint64_t end = std::min(trials, start + kChunk);
            for (uint64_t i = start; i < end; ++i) {
                auto [mafia_won, forfeited] = trial(derive_seed(master_seed, i));
                local.wins += mafia_won ? 1 : 0;
                local.forfeits += forfeited ? 1 : 0;
            }
        }
        partial[static_cast<size_t>(w)] = local;
    };
    if (n_workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(body, w);
        for (auto& th : pool) th.join();
    }
    TrialCounts total;
    for (const auto& p : partial) {
        total.wins += p.wins;
        total.forfeits += p.forfeits;
    }
    return total;
}

} // namespace

WilsonInterval wilson95(uint64_t k, uint64_t n) {
    if (n == 0) throw UsageError("Wilson interval of an empty sample");
    constexpr double z = 1.959963984540054; // Phi^-1(0.975)
    const double nn = static_cast<double>(n);
    const double ph = static_cast<double>(k) / nn;
    const double z2n = z * z / nn;
    const double denom = 1.0 + z2n;
    const double center = ph + z2n / 2.0;
    const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2n / (4.0 * nn));
    WilsonInterval ci{std::max(0.0, (center - half) / denom),
                      std::min(1.0, (center + half) / denom)};
    if (k == 0) ci.low = 0.0;   // center and half cancel exactly in real arithmetic
    if (k == n) ci.high = 1.0;
    return ci;
}

EstimateResult summarize(uint64_t trials, uint64_t wins, uint64_t master_seed) {
    EstimateResult r;
    r.trials = trials;
    r.wins = wins;
    r.master_seed = master_seed;
    if (trials > 0) {
        r.phat = static_cast<double>(wins) / static_cast<double>(trials);
        r.stderr_ = std::sqrt(r.phat * (1.0 - r.phat) / static_cast<double>(trials));
        auto ci = wilson95(wins, trials);
        r.ci_low = ci.low;
        r.ci_high = ci.high;
    }
    return r;
}

EstimateResult estimate(const GameConfig& config, const std::string& profile_name,
                        uint64_t trials, uint64_t master_seed, int workers) {
    if (trials < 1) throw UsageError("estimate requires at least one trial");
    config.validate();
    TrialCounts counts;
    if (config.fidelity == Fidelity::reduced) {
        if (profile_name != "baseline-no-detective")
            throw ConfigError("reduced fidelity models baseline-no-detective only");
        const long R = config.r0, M = config.m0;
        counts = run_trials(trials, master_seed, workers, [&](uint64_t seed) {
            auto out = analysis::simulate_reduced(R, M, seed, {}, false);
            return std::pair<bool, bool>(out.mafia_won, false);
        });
    } else {
        auto profile = strategies::make_profile(profile_name);
        profile->validate(config);
        RunOptions options;
        options.record_trajectory = false;
        options.retain_log = false;
        options.fast_protocol = true;
        counts = run_trials(trials, master_seed, workers, [&](uint64_t seed) {
            auto out = run_game(config, *profile, seed, options);
            return std::pair<bool, bool>(out.winner == Faction::mafia, out.forfeited);
        });
    }
    return summarize(trials, counts.wins, master_seed);
}

std::vector<SweepRow> sweep_eta(int32_t R, std::span<const double> eta_grid, uint64_t trials,
                                uint64_t master_seed, int workers) {
    if (R < 1) throw UsageError("sweep requires R >= 1");
    std::vector<SweepRow> rows;
    rows.reserve(eta_grid.size());
    for (size_t i = 0; i < eta_grid.size(); ++i) {
        const double eta = eta_grid[i];
        const auto M = static_cast<int32_t>(std::llround(eta * std::sqrt(static_cast<double>(R))));
        if (M < 0 || 2 * M > R)
            throw ConfigError("eta grid point maps outside 0 <= M <= R/2");
        GameConfig config{R, M, 0};
        config.fidelity = Fidelity::reduced;
        // Decorrelate grid points: each gets its own seed stream.
        const uint64_t point_seed = derive_seed(master_seed, 1000003 + i);
        rows.push_back({eta, R, M,
                        estimate(config, "baseline-no-detective", trials, point_seed, workers)});
    }
    return rows;
}

ThresholdPoint threshold(int32_t R, ThresholdMethod method, uint64_t trials,
                         uint64_t master_seed, int workers) {
    if (R < 4) throw UsageError("threshold requires R >= 4");
    if (method == ThresholdMethod::exact_dp) {
        analysis::FpWinTable table(R);
        for (int32_t m = 1; 2 * m <= R + 2; ++m)
            if (table.at(R, m) >= 0.5) return {R, m, method};
        return {R, R / 2 + 1, method};
    }
    if (trials < 2000) throw UsageError("monte_carlo threshold requires >= 2000 trials per probe");
    auto probe = [&](int32_t m) {
        GameConfig config{R, m, 0};
        config.fidelity = Fidelity::reduced;
        const uint64_t probe_seed = derive_seed(master_seed, 2000003 + static_cast<uint64_t>(m));
        return estimate(config, "baseline-no-detective", trials, probe_seed, workers).phat;
    };
    // Exponential bracket, then bisection on the (monotone) win probability.
    int32_t lo = 0, hi = 1; // lo: phat < 1/2, hi: phat >= 1/2
    while (probe(hi) < 0.5) {
        lo = hi;
        hi = std::min(hi * 2, R / 2 + 1);
        if (hi == lo) break;
    }
    while (hi - lo > 1) {
        const int32_t mid = lo + (hi - lo) / 2;
        if (probe(mid) >= 0.5) hi = mid;
        else lo = mid;
    }
    return {R, hi, method};
}

FitResult fit_power_law(std::span<const ThresholdPoint> points) {
    if (points.size() < 3) throw UsageError("power-law fit requires at least 3 points");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].R == points[j].R) throw UsageError("fit points must have distinct R");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        if (p.M_half < 1) throw UsageError("fit points must have M_half >= 1");
        const double x = std::log(static_cast<double>(p.R));
        const double y = std::log(static_cast<double>(p.M_half));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double rss = 0;
    for (const auto& p : points) {
        const double x = std::log(static_cast<double>(p.R));
        const double y = std::log(static_cast<double>(p.M_half));
        const double e = y - (slope * x + intercept);
        rss += e * e;
    }
    return {std::exp(intercept), slope, rss};
}

std::vector<TrajectoryRun> trajectories(int32_t R, int32_t M, uint64_t runs,
                                        uint64_t master_seed, analysis::Pattern pattern) {
    if (runs < 1) throw UsageError("trajectories requires at least one run");
    std::vector<TrajectoryRun> out;
    out.reserve(runs);
    for (uint64_t r = 0; r < runs; ++r)
        out.push_back({r, analysis::simulate_reduced(R, M, derive_seed(master_seed, r), pattern,
                                                     true)});
    return out;
}

ScenarioResult scenario(const std::string& profile_name, const GameConfig& config,
                        const strategies::ScenarioParams& params, uint64_t trials,
                        uint64_t master_seed, int workers) {
    if (trials < 1) throw UsageError("scenario requires at least one trial");
    if (profile_name == "baseline-no-detective")
        throw ConfigError("scenario expects a detective profile; use estimate for the baseline");
    config.validate();
    auto profile = strategies::make_profile(profile_name, params);
    profile->validate(config);
    RunOptions options;
    options.record_trajectory = false;
    options.retain_log = false;
    options.fast_protocol = true;
    TrialCounts counts = run_trials(trials, master_seed, workers, [&](uint64_t seed) {
        auto out = run_game(config, *profile, seed, options);
        return std::pair<bool, bool>(out.winner == Faction::mafia, out.forfeited);
    });
    ScenarioResult r;
    r.est = summarize(trials, counts.wins, master_seed);
    r.forfeits = counts.forfeits;
    r.mafia_rate = r.est.phat;
    r.citizen_rate = 1.0 - r.est.phat;
    r.forfeit_rate = static_cast<double>(counts.forfeits) / static_cast<double>(trials);
    return r;
}

CrossValidation crossvalidate(int32_t R, int32_t M, uint64_t trials, uint64_t master_seed,
                              int workers) {
    if (trials < 1) throw UsageError("crossvalidate requires at least one trial");
    GameConfig config{R, M, 0};
    config.validate();
    auto profile = strategies::make_profile("baseline-no-detective");

    // Full mechanics on one stream, the reduced chain on another.
    RunOptions options;
    options.record_trajectory = false;
    options.retain_log = false;
    options.fast_protocol = false;
    const uint64_t protocol_seed = derive_seed(master_seed, 1);
    TrialCounts protocol_counts = run_trials(trials, protocol_seed, workers, [&](uint64_t seed) {
        auto out = run_game(config, *profile, seed, options);
        return std::pair<bool, bool>(out.winner == Faction::mafia, false);
    });

    const uint64_t reduced_seed = derive_seed(master_seed, 2);
    TrialCounts reduced_counts = run_trials(trials, reduced_seed, workers, [&](uint64_t seed) {
        auto out = analysis::simulate_reduced(R, M, seed, {}, false);
        return std::pair<bool, bool>(out.mafia_won, false);
    });

    CrossValidation cv;
    cv.protocol_est = summarize(trials, protocol_counts.wins, protocol_seed);
    cv.reduced_est = summarize(trials, reduced_counts.wins, reduced_seed);
    cv.difference = cv.protocol_est.phat - cv.reduced_est.phat;
    cv.combined_stderr = std::sqrt(cv.protocol_est.stderr_ * cv.protocol_est.stderr_ +
                                   cv.reduced_est.stderr_ * cv.reduced_est.stderr_);
    // Equal-probability corner: both stderrs can be zero (e.g. certain wins).
    cv.consistent = std::abs(cv.difference) <= 4.0 * cv.combined_stderr + 1e-12;
    return cv;
}

} // namespace mafia::experiments
