// Command-line surface for the game engine, the exact analysis suite and the
// Monte Carlo harness. Every command is deterministic: seeds default to a
// fixed constant and outputs are byte-identical across reruns and worker
// counts.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mafia/analysis.hpp"
#include "mafia/engine.hpp"
#include "mafia/experiments.hpp"
#include "mafia/output.hpp"
#include "mafia/strategies.hpp"
#include "mafia/version.hpp"

using nlohmann::json;
using namespace mafia;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

struct CommonArgs {
    int32_t R = 0;
    int32_t M = 0;
    int32_t D = 0;
    uint64_t trials = 10000;
    uint64_t seed = kDefaultSeed;
    int workers = 0;
    std::string output;
    std::string format = "json";
    std::string profile = "baseline-no-detective";
    std::string fidelity = "auto";
    int32_t d_blocks = 0;
    double delta = 0.0;
    std::string pattern = "2:1";
    std::string method = "exact";
    std::vector<int32_t> r_list;
    std::string suite = "all";
    int32_t rmax = 200;
    int32_t umax = 60;
    int32_t polymax = 2000;
    uint64_t runs = 3;
    bool table = false;
};

void emit(const CommonArgs& args, const std::string& text) {
    if (args.output.empty()) std::cout << text;
    else output::atomic_write(args.output, text);
}

analysis::Pattern parse_pattern(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw UsageError("pattern must look like r:d, e.g. 2:1");
    analysis::Pattern p;
    p.round_steps = std::stoi(s.substr(0, colon));
    p.day_steps = std::stoi(s.substr(colon + 1));
    if (p.day_steps < 1 || p.round_steps <= p.day_steps)
        throw UsageError("pattern requires r > d >= 1");
    return p;
}

GameConfig make_config(const CommonArgs& args) {
    GameConfig c;
    c.r0 = args.R;
    c.m0 = args.M;
    c.d0 = args.D;
    if (args.fidelity == "protocol") c.fidelity = Fidelity::protocol;
    else if (args.fidelity == "reduced") c.fidelity = Fidelity::reduced;
    else if (args.fidelity == "auto")
        c.fidelity = (args.D == 0 && args.profile == "baseline-no-detective")
                         ? Fidelity::reduced
                         : Fidelity::protocol;
    else throw UsageError("fidelity must be auto, protocol or reduced");
    return c;
}

// ---- commands ----

int cmd_simulate(const CommonArgs& args) {
    GameConfig c = make_config(args);
    auto est = experiments::estimate(c, args.profile, args.trials, args.seed, args.workers);
    emit(args, output::to_json(est).dump(2) + "\n");
    return kExitOk;
}

int cmd_exact(const CommonArgs& args) {
    if (args.R < 1 || args.M < 0 || args.M > args.R)
        throw UsageError("exact requires 1 <= R and 0 <= M <= R");
    if (args.R > 5000)
        throw UsageError("exact rational DP is supported up to R = 5000; use threshold for more");
    const ExactRational w = analysis::exact_win_probability(args.R, args.M);
    std::cout << w.str() << " " << output::fmt_double(w.to_double()) << "\n";
    if (args.table) {
        if (args.output.empty()) throw UsageError("--table needs --output");
        output::atomic_write(args.output, output::dp_table_csv(args.R, args.M, args.seed));
    }
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, const std::vector<double>& grid) {
    if (grid.empty()) throw UsageError("sweep requires --eta-grid");
    auto rows = experiments::sweep_eta(args.R, grid, args.trials, args.seed, args.workers);
    if (args.format == "csv") {
        emit(args, output::sweep_csv(rows, args.seed));
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            json j = output::to_json(r.est);
            j["eta"] = r.eta;
            j["R"] = r.R;
            j["M"] = r.M;
            arr.push_back(std::move(j));
        }
        emit(args, arr.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_threshold(const CommonArgs& args) {
    if (args.r_list.empty()) throw UsageError("threshold requires at least one --R");
    const auto method = args.method == "mc" ? experiments::ThresholdMethod::monte_carlo
                                            : experiments::ThresholdMethod::exact_dp;
    std::vector<experiments::ThresholdPoint> points;
    points.reserve(args.r_list.size());
    for (int32_t R : args.r_list)
        points.push_back(experiments::threshold(R, method, args.trials, args.seed, args.workers));
    std::string fit_text;
    json fit_json;
    if (points.size() >= 3) {
        auto fit = experiments::fit_power_law(points);
        fit_text = "# fit M = c*R^e: c=" + output::fmt_double(fit.c) +
                   " exponent=" + output::fmt_double(fit.exponent) +
                   " residual=" + output::fmt_double(fit.residual) + "\n";
        fit_json = json{{"c", fit.c}, {"exponent", fit.exponent}, {"residual", fit.residual}};
    }
    if (args.format == "csv") {
        emit(args, output::threshold_csv(points, args.seed) + fit_text);
    } else {
        json arr = json::array();
        for (const auto& p : points)
            arr.push_back(json{{"R", p.R},
                               {"M_half", p.M_half},
                               {"method", p.method == experiments::ThresholdMethod::exact_dp
                                              ? "exact_dp"
                                              : "monte_carlo"}});
        json j{{"points", std::move(arr)}};
        if (!fit_json.is_null()) j["fit"] = std::move(fit_json);
        emit(args, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_trajectory(const CommonArgs& args) {
    const auto pattern = parse_pattern(args.pattern);
    auto runs = experiments::trajectories(args.R, args.M, args.runs, args.seed, pattern);
    if (args.format == "csv") {
        const std::string full = output::trajectory_csv(runs, args.seed);
        if (args.output.empty()) {
            std::cout << full;
        } else {
            output::atomic_write(args.output, full);
            output::atomic_write(args.output + ".tail10000.csv",
                                 output::trajectory_tail_csv(runs, args.seed, 10000));
            output::atomic_write(args.output + ".tail100.csv",
                                 output::trajectory_tail_csv(runs, args.seed, 100));
        }
    } else {
        auto series = [&](size_t window) {
            json arr = json::array();
            for (const auto& run : runs) {
                const auto& traj = run.outcome.trajectory;
                const size_t first =
                    window == 0 || traj.size() <= window ? 0 : traj.size() - window;
                for (size_t i = first; i < traj.size(); ++i)
                    arr.push_back(json{{"run", run.run},
                                       {"t", traj[i].t},
                                       {"R_t", traj[i].R},
                                       {"M_t", traj[i].M},
                                       {"X_t", analysis::x_of(traj[i].R, traj[i].M)}});
            }
            return arr;
        };
        json j{{"full", series(0)}, {"tail10000", series(10000)}, {"tail100", series(100)}};
        emit(args, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_scenario(const CommonArgs& args) {
    GameConfig c;
    c.r0 = args.R;
    c.m0 = args.M;
    c.d0 = args.D;
    strategies::ScenarioParams params{args.d_blocks, args.delta};
    auto result =
        experiments::scenario(args.profile, c, params, args.trials, args.seed, args.workers);
    emit(args, output::to_json(result).dump(2) + "\n");
    return kExitOk;
}

int cmd_crossvalidate(const CommonArgs& args) {
    auto cv = experiments::crossvalidate(args.R, args.M, args.trials, args.seed, args.workers);
    emit(args, output::to_json(cv).dump(2) + "\n");
    return cv.consistent ? kExitOk : kExitVerification;
}

struct VerifyReport {
    std::string check;
    std::string domain;
    json violations = json::array();
    double elapsed = 0.0;
};

template <typename F>
VerifyReport timed_check(const std::string& name, const std::string& domain, F&& body) {
    VerifyReport report;
    report.check = name;
    report.domain = domain;
    const auto start = std::chrono::steady_clock::now();
    body(report.violations);
    report.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

int cmd_verify(const CommonArgs& args) {
    std::vector<VerifyReport> reports;
    const bool all = args.suite == "all";
    const long rmax = args.rmax;

    if (all || args.suite == "martingales") {
        reports.push_back(timed_check(
            "zero drift of M(M-1)/R", "3 <= R <= " + std::to_string(rmax) + ", 1 <= M <= R-1",
            [&](json& violations) {
                for (long R = 3; R <= rmax; ++R)
                    for (long M = 1; M <= R - 1; ++M)
                        if (!analysis::x_drift(R, M).is_zero())
                            violations.push_back(json{{"R", R}, {"M", M}});
            }));
    }
    if (all || args.suite == "submartingale") {
        reports.push_back(timed_check(
            "drift identity of the ratio process", "2 <= M, M+3 <= R <= " + std::to_string(rmax),
            [&](json& violations) {
                for (long R = 5; R <= rmax; ++R)
                    for (long M = 2; M + 3 <= R; ++M) {
                        const BigInt scale = BigInt(R) * analysis::y_denominator_scaled(R, M) *
                                             analysis::y_denominator_scaled(R - 2, M) *
                                             analysis::y_denominator_scaled(R - 2, M - 1);
                        if (analysis::y_drift(R, M) * ExactRational(scale) !=
                            ExactRational(BigInt(10000 * analysis::p_poly(R, M))))
                            violations.push_back(json{{"R", R}, {"M", M}});
                    }
            }));
        reports.push_back(timed_check(
            "drift numerator positivity", "k* <= M <= R/2, R <= " + std::to_string(args.polymax),
            [&](json& violations) {
                auto k = analysis::find_min_k(args.polymax);
                if (!k) {
                    violations.push_back(json{{"error", "no positivity threshold found"}});
                    return;
                }
                for (long R = 2; R <= args.polymax; ++R)
                    for (long M = *k; 2 * M <= R; ++M)
                        if (sgn(analysis::p_poly(R, M)) <= 0)
                            violations.push_back(json{{"R", R}, {"M", M}});
            }));
    }
    if (all || args.suite == "supermartingale") {
        reports.push_back(timed_check(
            "stage-three drift: closed form, enumeration, sign",
            "1 <= U,M <= " + std::to_string(args.umax) + ", M < V <= " + std::to_string(args.umax),
            [&](json& violations) {
                for (long U = 1; U <= args.umax; ++U)
                    for (long M = 1; M <= args.umax; ++M)
                        for (long V = M + 1; V <= args.umax; ++V) {
                            auto parts = analysis::z_drift_parts(U, V, M);
                            if (parts.expectation_minus_z != parts.closed_form ||
                                parts.closed_form > ExactRational(0))
                                violations.push_back(json{{"U", U}, {"V", V}, {"M", M}});
                        }
            }));
    }
    if (all || args.suite == "oracle") {
        const long nmax = std::max<long>(rmax, 1000);
        reports.push_back(timed_check(
            "lone-mafia chain equals the DP oracle and respects its parity bound",
            "R <= " + std::to_string(nmax), [&](json& violations) {
                // The survival product stops at the weak-majority state; it
                // telescopes to sqrt(2/(n+1)) on odd n and sqrt(3/(n+1)) on
                // even n (the even chain never plays a day at R_t = 2).
                analysis::ExactWinOracle oracle;
                for (long R = 1; R <= nmax; ++R) {
                    if (analysis::single_mafia_win(R) != oracle.at(R, 1))
                        violations.push_back(json{{"R", R}, {"what", "dp"}});
                    const double bound =
                        R % 2 == 1 ? analysis::g_bound(R)
                                   : std::sqrt(3.0 / (static_cast<double>(R) + 1.0));
                    if (analysis::single_mafia_win(R).to_double() > bound)
                        violations.push_back(json{{"R", R}, {"what", "bound"}});
                }
            }));
        reports.push_back(timed_check(
            "win probability monotone in M and in R at fixed parity",
            "R <= " + std::to_string(std::min<long>(rmax, 400)), [&](json& violations) {
                const long cap = std::min<long>(rmax, 400);
                analysis::ExactWinOracle oracle;
                for (long R = 4; R <= cap; ++R)
                    for (long M = 1; M <= R; ++M)
                        if (oracle.at(R, M) < oracle.at(R, M - 1))
                            violations.push_back(json{{"R", R}, {"M", M}, {"what", "M"}});
                for (long M = 1; M <= 20; ++M)
                    for (long R = M + 2; R <= cap; ++R)
                        if (oracle.at(R, M) > oracle.at(R - 2, M))
                            violations.push_back(json{{"R", R}, {"M", M}, {"what", "R"}});
            }));
    }
    if (reports.empty()) throw UsageError("unknown suite: " + args.suite);

    json out = json::array();
    uint64_t total_violations = 0;
    for (const auto& r : reports) {
        total_violations += r.violations.size();
        out.push_back(json{{"check", r.check},
                           {"domain", r.domain},
                           {"violations", r.violations},
                           {"elapsed", r.elapsed}});
    }
    emit(args, out.dump(2) + "\n");
    return total_violations == 0 ? kExitOk : kExitVerification;
}

// A JSON config file is an alternative spelling of the command line:
// {"command": "simulate", "R": 100, ...}. Exclusive with other flags.
std::vector<std::string> args_from_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file: " + path);
    json j;
    in >> j;
    if (!j.contains("command")) throw UsageError("config file needs a \"command\" entry");
    std::vector<std::string> args;
    args.push_back(j["command"].get<std::string>());
    for (const auto& [key, value] : j.items()) {
        if (key == "command") continue;
        if (key == "R" && value.is_array()) {
            for (const auto& v : value) {
                args.push_back("--R");
                args.push_back(std::to_string(v.get<int64_t>()));
            }
            continue;
        }
        if (key == "eta_grid") {
            std::string grid;
            for (const auto& v : value) {
                if (!grid.empty()) grid += ',';
                grid += output::fmt_double(v.get<double>());
            }
            args.push_back("--eta-grid");
            args.push_back(grid);
            continue;
        }
        args.push_back("--" + key);
        if (value.is_boolean()) {
            if (!value.get<bool>()) args.pop_back();
            continue;
        }
        if (value.is_string()) args.push_back(value.get<std::string>());
        else if (value.is_number_integer()) args.push_back(std::to_string(value.get<int64_t>()));
        else if (value.is_number_unsigned()) args.push_back(std::to_string(value.get<uint64_t>()));
        else args.push_back(output::fmt_double(value.get<double>()));
    }
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mafia: a simulation and verification laboratory for the Mafia game"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(0, 1);

    CommonArgs args;
    std::string eta_grid_text;

    auto add_common = [&](CLI::App* cmd, bool with_output = true) {
        cmd->add_option("--seed", args.seed, "master seed (fixed default keeps runs reproducible)");
        cmd->add_option("--workers", args.workers,
                        "worker threads; 0 = hardware (never affects results)");
        if (with_output) {
            cmd->add_option("--output", args.output, "write to this path (atomic) instead of stdout");
            cmd->add_option("--format", args.format, "csv or json")
                ->check(CLI::IsMember({"csv", "json"}));
        }
    };

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo mafia win rate");
    simulate->add_option("--R", args.R, "players")->required();
    simulate->add_option("--M", args.M, "mafia members")->required();
    simulate->add_option("--D", args.D, "detectives");
    simulate->add_option("--trials", args.trials, "independent games");
    simulate->add_option("--profile", args.profile, "strategy profile name");
    simulate->add_option("--fidelity", args.fidelity, "auto, protocol or reduced");
    add_common(simulate);

    auto* exact = app.add_subcommand("exact", "exact win probability w(R, M)");
    exact->add_option("--R", args.R, "players")->required();
    exact->add_option("--M", args.M, "mafia members")->required();
    exact->add_flag("--table", args.table, "export the DP table as CSV (needs --output)");
    add_common(exact);

    auto* sweep = app.add_subcommand("sweep", "win rate across eta = M/sqrt(R)");
    sweep->add_option("--R", args.R, "players")->required();
    sweep->add_option("--eta-grid", eta_grid_text, "comma-separated eta values")->required();
    sweep->add_option("--trials", args.trials, "games per grid point");
    add_common(sweep);

    auto* thresh = app.add_subcommand("threshold", "smallest M with w(R, M) >= 1/2");
    thresh->add_option("--R", args.r_list, "players (repeatable)")->required();
    thresh->add_option("--method", args.method, "exact or mc")
        ->check(CLI::IsMember({"exact", "mc"}));
    thresh->add_option("--trials", args.trials, "games per Monte Carlo probe");
    add_common(thresh);

    auto* traj = app.add_subcommand("trajectory", "chain trajectories with the martingale value");
    traj->add_option("--R", args.R, "players")->required();
    traj->add_option("--M", args.M, "mafia members")->required();
    traj->add_option("--runs", args.runs, "number of runs");
    traj->add_option("--pattern", args.pattern, "round pattern r:d (default 2:1)");
    add_common(traj);

    auto* scen = app.add_subcommand("scenario", "detective scenario win rates");
    scen->add_option("--profile", args.profile, "staged-, partition- or nocrypto-detective")
        ->required();
    scen->add_option("--R", args.R, "players")->required();
    scen->add_option("--M", args.M, "mafia members")->required();
    scen->add_option("--D", args.D, "detectives")->required();
    scen->add_option("--trials", args.trials, "independent games");
    scen->add_option("--d", args.d_blocks, "partition blocks");
    scen->add_option("--delta", args.delta, "partition delta in (0, 1/2)");
    add_common(scen);

    auto* verify = app.add_subcommand("verify", "exact identity verification suites");
    verify->add_option("--suite", args.suite,
                       "martingales, submartingale, supermartingale, oracle or all");
    verify->add_option("--rmax", args.rmax, "upper end of the R scan");
    verify->add_option("--umax", args.umax, "upper end of the stage-three scan");
    verify->add_option("--polymax", args.polymax, "upper end of the positivity scan");
    add_common(verify);

    auto* cross = app.add_subcommand("crossvalidate", "full protocol vs reduced chain");
    cross->add_option("--R", args.R, "players")->required();
    cross->add_option("--M", args.M, "mafia members")->required();
    cross->add_option("--trials", args.trials, "games per route");
    add_common(cross);

    // --config replaces the command line entirely.
    if (argc >= 2 && std::string(argv[1]) == "--config") {
        if (argc != 3) {
            std::cerr << "--config needs exactly one file path\n";
            return kExitUsage;
        }
        std::vector<std::string> synthesized;
        try {
            synthesized = args_from_config(argv[2]);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        std::vector<const char*> fake;
        fake.push_back(argv[0]);
        for (const auto& s : synthesized) fake.push_back(s.c_str());
        try {
            app.parse(static_cast<int>(fake.size()), const_cast<char**>(fake.data()));
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? kExitOk : kExitUsage;
        }
    } else {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? kExitOk : kExitUsage;
        }
    }

    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (exact->parsed()) return cmd_exact(args);
        if (sweep->parsed()) {
            std::vector<double> grid;
            std::stringstream ss(eta_grid_text);
            std::string item;
            while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
            return cmd_sweep(args, grid);
        }
        if (thresh->parsed()) return cmd_threshold(args);
        if (traj->parsed()) return cmd_trajectory(args);
        if (scen->parsed()) return cmd_scenario(args);
        if (verify->parsed()) return cmd_verify(args);
        if (cross->parsed()) return cmd_crossvalidate(args);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
