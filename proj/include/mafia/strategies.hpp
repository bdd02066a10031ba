#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mafia/engine.hpp"

// Pluggable decision procedures. Every decision consumes a View plus explicit
// randomness; strategies have no access to the game state and therefore
// cannot read hidden information. Per-player strategy objects may keep local
// state (query lists, received rosters, ...) across rounds of one game.

namespace mafia::strategies {

struct PrivateSend {
    PlayerId to;
    MessageTag tag;
    PlayerId subject = -1;
    std::vector<PlayerId> ids;
};

class PlayerStrategy {
public:
    virtual ~PlayerStrategy() = default;

    // Day sub-phases, called in this order for every live player.
    virtual bool forfeit(const View&) { return false; }
    virtual std::optional<uint32_t> day_announce(const View&, Rng&) { return std::nullopt; }
    virtual std::optional<Declaration> day_declare(const View&, Rng&) { return std::nullopt; }
    virtual std::vector<PrivateSend> day_send(const View&, Rng&) { return {}; }
    virtual std::optional<PlayerId> day_ballot(const View&, Rng&) { return std::nullopt; }
    virtual PlayerId day_vote(const View&, Rng&) = 0;

    // Night decision; consulted only on the designated live mafia member
    // (lowest id), since the mafia share all information.
    virtual PlayerId night_target(const View&, Rng&);

    // Detective query; consulted on live detectives. nullopt skips the round.
    virtual std::optional<PlayerId> night_query(const View&, Rng&) { return std::nullopt; }
};

// How today's open vote is determined, as a function of public information
// only. Drives the engine's fast day resolution; must agree with what the
// per-player procedures do (pinned by mode-equivalence tests).
enum class DayMode : uint8_t {
    uniform_random_sum, // broadcast-sum protocol: a uniform live resident falls
    fixed_target,       // everyone votes one publicly determined target
    deliberate          // anything else: run the full per-player machinery
};

struct DayPlan {
    DayMode mode = DayMode::deliberate;
    PlayerId target = -1; // fixed_target only
};

class StrategyProfile {
public:
    virtual ~StrategyProfile() = default;
    virtual const std::string& name() const = 0;
    virtual void validate(const GameConfig&) const {}
    // One strategy object per player id. `roles[p]` is handed only to player
    // p's own strategy.
    virtual std::vector<std::unique_ptr<PlayerStrategy>> make_players(const GameConfig&,
                                                                      std::span<const Role> roles,
                                                                      Rng& setup) const = 0;
    // Classifies today's vote dynamics from an observer view (no private
    // fields). Profiles whose forced days cover the whole game enable the
    // engine's fast path.
    virtual DayPlan day_plan(const View& observer) const {
        (void)observer;
        return {};
    }
    // Public-information gate: when false, no player can possibly forfeit
    // today and the engine skips the poll.
    virtual bool forfeit_possible(const View& observer) const {
        (void)observer;
        return false;
    }
};

struct ScenarioParams {
    int32_t d = 0;      // partition block count
    double delta = 0.0; // partition delta in (0, 1/2)
};

// Profiles by name: "baseline-no-detective", "staged-detective",
// "partition-detective", "nocrypto-detective". Unknown name: ConfigError.
std::shared_ptr<const StrategyProfile> make_profile(const std::string& name,
                                                    const ScenarioParams& params = {});

// ---- building blocks (unit-testable pieces of the profiles) ----

// Announcement for the random-sum protocol: uniform on [0, R_t - 1].
uint32_t random_sum_announcement(int32_t alive_count, Rng& rng);

// Rank selected by the day broadcast: n = 1 + (sum of announcements mod R_t);
// the vote target is the n-th live resident in increasing-id order.
PlayerId random_sum_target(const View& view);

// Uniform choice among live citizens; mafia's night rule. Protocol error if
// no citizen is alive.
PlayerId mafia_uniform_night_target(const View& view, Rng& rng);

// Stage-one length of the single-detective play: ceil(sqrt(eta) * R0).
int32_t staged_stage1_len(int32_t r0, double eta);

// Highest-ranked live member of an ordered roster; nullopt if none.
std::optional<PlayerId> first_alive_in(std::span<const PlayerId> roster, const View& view);

// The fixed pre-game partition used by partition-detective: d contiguous id
// blocks with sizes as equal as possible.
std::vector<std::vector<PlayerId>> partition_blocks(const GameConfig& config, int32_t d);

} // namespace mafia::strategies
