#include "mafia/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mafia/version.hpp"

namespace mafia::output {

using nlohmann::json;

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

std::string stamp_line(uint64_t master_seed) {
    return "# master_seed=" + std::to_string(master_seed) + " version=" + kVersion + "\n";
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot open output file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw UsageError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

// ---- JSON ----

json to_json(const experiments::EstimateResult& r) {
    return json{{"trials", r.trials},   {"wins", r.wins},       {"phat", r.phat},
                {"stderr", r.stderr_},  {"ci_low", r.ci_low},   {"ci_high", r.ci_high},
                {"master_seed", r.master_seed}};
}

json to_json(const experiments::ScenarioResult& r) {
    json j = to_json(r.est);
    j["forfeits"] = r.forfeits;
    j["citizen_rate"] = r.citizen_rate;
    j["mafia_rate"] = r.mafia_rate;
    j["forfeit_rate"] = r.forfeit_rate;
    return j;
}

json to_json(const experiments::CrossValidation& cv) {
    return json{{"protocol", to_json(cv.protocol_est)},
                {"reduced", to_json(cv.reduced_est)},
                {"difference", cv.difference},
                {"combined_stderr", cv.combined_stderr},
                {"consistent", cv.consistent}};
}

json to_json(const GameOutcome& outcome) {
    json traj = json::array();
    for (const auto& p : outcome.trajectory)
        traj.push_back(json{{"t", p.t}, {"R", p.R}, {"M", p.M}});
    return json{{"winner", outcome.winner == Faction::mafia ? "mafia" : "citizens"},
                {"rounds", outcome.rounds},
                {"forfeited", outcome.forfeited},
                {"trajectory", std::move(traj)}};
}

json to_json(const View& view) {
    json j;
    j["self_id"] = view.self_id;
    j["self_role"] = json{{"faction", view.self_role.faction == Faction::mafia ? "mafia" : "citizen"},
                          {"is_detective", view.self_role.is_detective}};
    j["t"] = view.t;
    j["alive"] = std::vector<PlayerId>(view.alive.begin(), view.alive.end());
    json log = json::array();
    if (view.public_log) {
        for (const auto& e : *view.public_log) {
            if (const auto* d = std::get_if<DayElimination>(&e))
                log.push_back(json{{"event", "day_elimination"},
                                   {"player", d->player},
                                   {"faction", d->faction == Faction::mafia ? "mafia" : "citizen"},
                                   {"was_detective", d->was_detective}});
            else if (const auto* n = std::get_if<NightElimination>(&e))
                log.push_back(json{{"event", "night_elimination"},
                                   {"player", n->player},
                                   {"was_detective", n->was_detective}});
            else if (const auto* a = std::get_if<Announcement>(&e))
                log.push_back(json{{"event", "announcement"},
                                   {"player", a->player},
                                   {"number", a->number}});
            else if (const auto* decl = std::get_if<Declaration>(&e))
                log.push_back(json{{"event", "declaration"},
                                   {"player", decl->player},
                                   {"ids", decl->ids}});
            else if (const auto* b = std::get_if<BallotResult>(&e))
                log.push_back(json{{"event", "ballot_result"}, {"target", b->target}});
        }
    }
    j["public_log"] = std::move(log);
    // Private information appears only where the rules grant it.
    if (view.self_role.faction == Faction::mafia)
        j["mafia_roster"] =
            std::vector<PlayerId>(view.mafia_roster.begin(), view.mafia_roster.end());
    if (view.self_role.is_detective && view.query_results) {
        json known = json::object();
        for (PlayerId p = 0; p < view.r0; ++p)
            if (view.query_results[p] >= 0)
                known[std::to_string(p)] = view.query_results[p] == 1 ? "mafia" : "citizen";
        j["query_results"] = std::move(known);
    }
    json inbox = json::array();
    for (const auto& m : view.inbox)
        inbox.push_back(json{{"from", m.from},
                             {"tag", static_cast<int>(m.tag)},
                             {"subject", m.subject},
                             {"ids", m.ids}});
    j["inbox"] = std::move(inbox);
    return j;
}

// ---- CSV ----

std::string sweep_csv(std::span<const experiments::SweepRow> rows, uint64_t master_seed) {
    std::string out = stamp_line(master_seed);
    out += "eta,R,M,trials,wins,phat,ci_low,ci_high\n";
    for (const auto& r : rows) {
        out += fmt_double(r.eta);
        out += ',' + std::to_string(r.R) + ',' + std::to_string(r.M) + ',' +
               std::to_string(r.est.trials) + ',' + std::to_string(r.est.wins) + ',' +
               fmt_double(r.est.phat) + ',' + fmt_double(r.est.ci_low) + ',' +
               fmt_double(r.est.ci_high) + '\n';
    }
    return out;
}

std::string threshold_csv(std::span<const experiments::ThresholdPoint> points,
                          uint64_t master_seed) {
    std::string out = stamp_line(master_seed);
    out += "R,M_half,method\n";
    for (const auto& p : points) {
        out += std::to_string(p.R) + ',' + std::to_string(p.M_half) + ',';
        out += p.method == experiments::ThresholdMethod::exact_dp ? "exact_dp" : "monte_carlo";
        out += '\n';
    }
    return out;
}

namespace {

void append_trajectory_rows(std::string& out, const experiments::TrajectoryRun& run,
                            size_t first) {
    const auto& traj = run.outcome.trajectory;
    for (size_t i = first; i < traj.size(); ++i) {
        const auto& p = traj[i];
        out += std::to_string(run.run) + ',' + std::to_string(p.t) + ',' + std::to_string(p.R) +
               ',' + std::to_string(p.M) + ',' + fmt_double(analysis::x_of(p.R, p.M)) + '\n';
    }
}

} // namespace

std::string trajectory_csv(std::span<const experiments::TrajectoryRun> runs,
                           uint64_t master_seed) {
    std::string out = stamp_line(master_seed);
    out += "run,t,R_t,M_t,X_t\n";
    for (const auto& run : runs) append_trajectory_rows(out, run, 0);
    return out;
}

std::string trajectory_tail_csv(std::span<const experiments::TrajectoryRun> runs,
                                uint64_t master_seed, size_t window) {
    std::string out = stamp_line(master_seed);
    out += "run,t,R_t,M_t,X_t\n";
    for (const auto& run : runs) {
        const size_t n = run.outcome.trajectory.size();
        append_trajectory_rows(out, run, n > window ? n - window : 0);
    }
    return out;
}

std::string dp_table_csv(long r_max, long m_max, uint64_t master_seed) {
    std::string out = stamp_line(master_seed);
    out += "R,M,w,w_num,w_den\n";
    analysis::ExactWinOracle oracle;
    for (long r = 1; r <= r_max; ++r) {
        for (long m = 0; m <= std::min(m_max, r); ++m) {
            const ExactRational& w = oracle.at(r, m);
            out += std::to_string(r) + ',' + std::to_string(m) + ',' +
                   fmt_double(w.to_double()) + ',' + to_string(w.numerator()) + ',' +
                   to_string(w.denominator()) + '\n';
        }
    }
    return out;
}

} // namespace mafia::output
