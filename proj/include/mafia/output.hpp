#pragma once

#include <string>

#include <json.hpp>

#include "mafia/analysis.hpp"
#include "mafia/engine.hpp"
#include "mafia/experiments.hpp"

// CSV/JSON emission. Every file starts with a comment line recording the
// master seed and artifact version, then a header row. Writes are atomic
// (temp file + rename). Numbers are formatted with up to 15 significant
// digits, so identical inputs produce byte-identical files.

namespace mafia::output {

std::string fmt_double(double x); // 15 significant digits

// "# master_seed=<seed> version=<version>\n"
std::string stamp_line(uint64_t master_seed);

void atomic_write(const std::string& path, const std::string& content);

// ---- JSON ----

nlohmann::json to_json(const experiments::EstimateResult& r);
nlohmann::json to_json(const experiments::ScenarioResult& r);
nlohmann::json to_json(const experiments::CrossValidation& cv);
nlohmann::json to_json(const GameOutcome& outcome); // winner/rounds/forfeited/trajectory
nlohmann::json to_json(const View& view);           // exactly the legally visible fields

// ---- CSV ----

// eta,R,M,trials,wins,phat,ci_low,ci_high
std::string sweep_csv(std::span<const experiments::SweepRow> rows, uint64_t master_seed);

// R,M_half,method
std::string threshold_csv(std::span<const experiments::ThresholdPoint> points,
                          uint64_t master_seed);

// run,t,R_t,M_t,X_t
std::string trajectory_csv(std::span<const experiments::TrajectoryRun> runs,
                           uint64_t master_seed);

// Tail window of each run (the last `window` recorded steps), same schema.
std::string trajectory_tail_csv(std::span<const experiments::TrajectoryRun> runs,
                                uint64_t master_seed, size_t window);

// R,M,w,w_num,w_den — w to 15 significant digits plus the exact fraction.
std::string dp_table_csv(long r_max, long m_max, uint64_t master_seed);

} // namespace mafia::output
