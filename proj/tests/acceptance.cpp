// Acceptance suite: one line per criterion, timed, asserted at the stated
// tolerances. Exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mafia/analysis.hpp"
#include "mafia/engine.hpp"
#include "mafia/experiments.hpp"
#include "mafia/output.hpp"
#include "mafia/strategies.hpp"
#include "mafia/version.hpp"

using namespace mafia;

namespace {

std::string g_cli;
int g_failures = 0;

struct Criterion {
    std::string name;
    double time_cap_s; // 0 = uncapped
    std::function<bool(std::string&)> body;
};

void run_criterion(const std::string& id, const Criterion& c) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = c.body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_cap_s > 0 && elapsed >= c.time_cap_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time cap of ") +
                  std::to_string(c.time_cap_s) + "s";
    }
    std::printf("[%s] %s %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id.c_str(), c.name.c_str(),
                elapsed, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& cli_args) {
    const std::string cmd = "'" + g_cli + "' " + cli_args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

// ---- criteria ----

bool a1_zero_drift(std::string& detail) {
    for (long R = 3; R <= 200; ++R)
        for (long M = 1; M <= R - 1; ++M)
            if (!analysis::x_drift(R, M).is_zero()) {
                detail = "nonzero drift at R=" + std::to_string(R) + " M=" + std::to_string(M);
                return false;
            }
    return true;
}

bool a2_submartingale_identity(std::string& detail) {
    for (long R = 5; R <= 200; ++R)
        for (long M = 2; M + 3 <= R; ++M) {
            const BigInt scale = BigInt(R) * analysis::y_denominator_scaled(R, M) *
                                 analysis::y_denominator_scaled(R - 2, M) *
                                 analysis::y_denominator_scaled(R - 2, M - 1);
            if (analysis::y_drift(R, M) * ExactRational(scale) !=
                ExactRational(BigInt(10000 * analysis::p_poly(R, M)))) {
                detail = "identity broken at R=" + std::to_string(R) + " M=" + std::to_string(M);
                return false;
            }
        }
    auto k = analysis::find_min_k(2000);
    if (!k) {
        detail = "no positivity threshold below 1000";
        return false;
    }
    for (long R = 2; R <= 2000; ++R)
        for (long M = *k; 2 * M <= R; ++M)
            if (sgn(analysis::p_poly(R, M)) <= 0) {
                detail = "non-positive numerator at R=" + std::to_string(R) +
                         " M=" + std::to_string(M) + " (k*=" + std::to_string(*k) + ")";
                return false;
            }
    detail = "k* = " + std::to_string(*k);
    return true;
}

bool a3_supermartingale(std::string& detail) {
    for (long U = 1; U <= 60; ++U)
        for (long M = 1; M <= 60; ++M)
            for (long V = M + 1; V <= 60; ++V) {
                auto parts = analysis::z_drift_parts(U, V, M);
                if (parts.expectation_minus_z != parts.closed_form) {
                    detail = "enumeration mismatch at U=" + std::to_string(U) +
                             " V=" + std::to_string(V) + " M=" + std::to_string(M);
                    return false;
                }
                if (parts.closed_form > ExactRational(0)) {
                    detail = "positive drift at U=" + std::to_string(U) +
                             " V=" + std::to_string(V) + " M=" + std::to_string(M);
                    return false;
                }
            }
    return true;
}

bool a4_oracle_agreement(std::string& detail) {
    analysis::ExactWinOracle oracle;
    long bound_violations = 0, odd_bound_violations = 0, equality_violations = 0;
    long first_bound_violation = 0;
    for (long R = 1; R <= 5000; ++R) {
        if (analysis::single_mafia_win(R) != oracle.at(R, 1)) ++equality_violations;
        if (analysis::single_mafia_win(R).to_double() > analysis::g_bound(R)) {
            if (bound_violations == 0) first_bound_violation = R;
            ++bound_violations;
            if (R % 2 == 1) ++odd_bound_violations;
        }
    }
    if (equality_violations > 0) {
        detail = std::to_string(equality_violations) + " product/DP mismatches";
        return false;
    }
    if (bound_violations > 0) {
        // Known defect of this criterion: under weak-majority adjudication the
        // even-R survival product stops at the (2, 1) day and telescopes to
        // sqrt(3/(n+1)), not sqrt(2/(n+1)); the sqrt(2/(n+1)) bound belongs to
        // the convention that plays the final day at R_t = 2. Exact equality
        // with the DP oracle holds on all 5000 points; the bound holds on
        // every odd n and fails on every even n. See the decisions ledger.
        detail = "DP equality exact on all R <= 5000; sqrt(2/(n+1)) bound holds on all odd n, "
                 "violated on " +
                 std::to_string(bound_violations) + " even n (first n=" +
                 std::to_string(first_bound_violation) +
                 "); odd-n violations: " + std::to_string(odd_bound_violations);
        return false;
    }
    return true;
}

bool a5_mc_vs_dp(std::string& detail) {
    const std::pair<int32_t, int32_t> grid[] = {{100, 5}, {1000, 31}, {10000, 100}};
    for (auto [R, M] : grid) {
        GameConfig c;
        c.r0 = R;
        c.m0 = M;
        c.fidelity = Fidelity::reduced;
        auto est = experiments::estimate(c, "baseline-no-detective", 100000,
                                         derive_seed(0xACCE5501, static_cast<uint64_t>(R)));
        const double w = analysis::win_probability_fp(R, M);
        if (std::abs(est.phat - w) > 4 * est.stderr_) {
            detail = "at (" + std::to_string(R) + "," + std::to_string(M) +
                     "): phat=" + output::fmt_double(est.phat) + " w=" + output::fmt_double(w);
            return false;
        }
    }
    return true;
}

bool a6_protocol_reduced(std::string& detail) {
    auto big = experiments::crossvalidate(101, 10, 100000, 0xACCE5502);
    if (!big.consistent) {
        detail = "(101,10): diff=" + output::fmt_double(big.difference) +
                 " tol=" + output::fmt_double(4 * big.combined_stderr);
        return false;
    }
    auto tiny = experiments::crossvalidate(3, 1, 100000, 0xACCE5503);
    if (!tiny.consistent) {
        detail = "(3,1): diff=" + output::fmt_double(tiny.difference) +
                 " tol=" + output::fmt_double(4 * tiny.combined_stderr);
        return false;
    }
    return true;
}

bool a7_threshold_fit(std::string& detail) {
    std::vector<experiments::ThresholdPoint> points;
    for (int32_t R : {400, 1600, 6400, 25600})
        points.push_back(experiments::threshold(R, experiments::ThresholdMethod::exact_dp));
    auto fit = experiments::fit_power_law(points);
    detail = "exponent=" + output::fmt_double(fit.exponent) + " c=" + output::fmt_double(fit.c);
    return fit.exponent >= 0.45 && fit.exponent <= 0.55;
}

bool a8_quantitative_tail(std::string& detail) {
    // eta = eps^2/8 with eps = 1/2; M = ceil(eta * sqrt(R)) at R = 10^4.
    const double eta = 1.0 / 32.0;
    const int32_t R = 10000;
    const auto M = static_cast<int32_t>(std::ceil(eta * std::sqrt(static_cast<double>(R))));
    GameConfig c;
    c.r0 = R;
    c.m0 = M;
    c.fidelity = Fidelity::reduced;
    auto est = experiments::estimate(c, "baseline-no-detective", 10000, 0xACCE5508);
    detail = "M=" + std::to_string(M) + " phat=" + output::fmt_double(est.phat);
    return est.phat <= 0.5;
}

bool a9_staged_direction(std::string& detail) {
    GameConfig c20;
    c20.r0 = 1000;
    c20.m0 = 20;
    c20.d0 = 1;
    auto s20 = experiments::scenario("staged-detective", c20, {}, 10000, 0xACCE5509);
    const double baseline_citizens = 1.0 - analysis::win_probability_fp(1000, 20);
    const double lift = s20.citizen_rate - baseline_citizens;
    if (lift <= 4 * s20.est.stderr_) {
        detail = "no lift over the detective-free baseline: " + output::fmt_double(lift);
        return false;
    }
    GameConfig c5 = c20;
    c5.m0 = 5;
    auto s5 = experiments::scenario("staged-detective", c5, {}, 10000, 0xACCE550A);
    const double se =
        std::sqrt(s5.est.stderr_ * s5.est.stderr_ + s20.est.stderr_ * s20.est.stderr_);
    if (s20.mafia_rate - s5.mafia_rate <= 4 * se) {
        detail = "mafia rate not increasing in M: " + output::fmt_double(s5.mafia_rate) + " vs " +
                 output::fmt_double(s20.mafia_rate);
        return false;
    }
    detail = "citizens " + output::fmt_double(s20.citizen_rate) + " vs baseline " +
             output::fmt_double(baseline_citizens);
    return true;
}

bool a10_partition(std::string& detail) {
    GameConfig c;
    c.r0 = 2000;
    c.m0 = 100;
    c.d0 = 100;
    auto r = experiments::scenario("partition-detective", c, {10, 0.45}, 2000, 0xACCE5510);
    detail = "citizen rate " + output::fmt_double(r.citizen_rate);
    return r.citizen_rate >= 0.99;
}

bool a11_nocrypto(std::string& detail) {
    GameConfig c;
    c.r0 = 1440;
    c.m0 = 19;
    c.d0 = 1;
    auto r = experiments::scenario("nocrypto-detective", c, {}, 100000, 0xACCE5511);
    detail = "citizen rate " + output::fmt_double(r.citizen_rate) +
             " (floor 1/108 = " + output::fmt_double(1.0 / 108.0) + ")";
    return r.citizen_rate >= 1.0 / 108.0;
}

bool a12_determinism(std::string& detail) {
    namespace fs = std::filesystem;
    fs::create_directories("acceptance_tmp");
    struct Cmd {
        const char* label;
        std::string base;
    };
    const Cmd cmds[] = {
        {"exact", "exact --R 400 --M 12 --table --output acceptance_tmp/{}.csv"},
        {"simulate", "simulate --R 200 --M 9 --trials 20000 --seed 5 --output acceptance_tmp/{}.json"},
        {"sweep",
         "sweep --R 2500 --eta-grid 0,0.5,1 --trials 4000 --seed 5 --format csv --output "
         "acceptance_tmp/{}.csv"},
        {"scenario",
         "scenario --profile staged-detective --R 200 --M 6 --D 1 --trials 4000 --seed 5 "
         "--output acceptance_tmp/{}.json"},
        {"crossvalidate", "crossvalidate --R 31 --M 4 --trials 4000 --seed 5 --output "
                          "acceptance_tmp/{}.json"},
    };
    auto with_name = [](std::string s, const std::string& name) {
        const auto pos = s.find("{}");
        return s.replace(pos, 2, name);
    };
    for (const auto& cmd : cmds) {
        const std::string file_a = "a_" + std::string(cmd.label);
        const std::string file_b = "b_" + std::string(cmd.label);
        if (run_cli(with_name(cmd.base, file_a)) != 0 ||
            run_cli(with_name(cmd.base, file_b) + " --workers 3") != 0) {
            detail = std::string(cmd.label) + " did not run";
            return false;
        }
        const std::string ext = cmd.base.find(".json") != std::string::npos ? ".json" : ".csv";
        if (slurp("acceptance_tmp/" + file_a + ext) != slurp("acceptance_tmp/" + file_b + ext) ||
            slurp("acceptance_tmp/" + file_a + ext).empty()) {
            detail = std::string(cmd.label) + " output differs across workers";
            return false;
        }
    }
    fs::remove_all("acceptance_tmp");
    return true;
}

} // namespace

int main(int argc, char** argv) {
    if (argc >= 2) g_cli = argv[1];
    std::printf("acceptance suite (%s)\n", kVersion);

    run_criterion("A1", {"zero one-round drift of M(M-1)/R, 3<=R<=200", 5.0, a1_zero_drift});
    run_criterion("A2", {"ratio-process drift identity to R=200; numerator positive to R=2000",
                         120.0, a2_submartingale_identity});
    run_criterion("A3", {"stage-three drift: enumeration = closed form <= 0 to 60", 30.0,
                         a3_supermartingale});
    run_criterion("A4", {"lone-mafia chain equals the DP oracle to R=5000, under sqrt(2/(n+1))",
                         10.0, a4_oracle_agreement});
    run_criterion("A5", {"Monte Carlo within 4 stderr of the DP oracle", 120.0, a5_mc_vs_dp});
    run_criterion("A6", {"full protocol agrees with the reduced chain", 300.0,
                         a6_protocol_reduced});
    run_criterion("A7", {"half-probability mafia size fits a square-root law", 600.0,
                         a7_threshold_fit});
    run_criterion("A8", {"mafia win rate at eta = 1/32 stays below one half", 0.0,
                         a8_quantitative_tail});
    run_criterion("A9", {"one detective beats the detective-free baseline", 0.0,
                         a9_staged_direction});
    run_criterion("A10", {"block-partition detectives win at least 99%", 0.0, a10_partition});
    run_criterion("A11", {"channel-free detective play clears the 1/108 floor", 0.0,
                          a11_nocrypto});
    if (g_cli.empty()) {
        std::printf("[SKIP] A12 determinism across reruns and worker counts -- no CLI path given\n");
        ++g_failures;
    } else {
        run_criterion("A12", {"byte-identical CLI output across reruns and worker counts", 0.0,
                              a12_determinism});
    }

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
