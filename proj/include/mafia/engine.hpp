#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mafia/errors.hpp"
#include "mafia/rng.hpp"

// The game state machine: round structure, eliminations, information
// reveals, plurality voting, termination, and the three trusted-moderator
// functionalities (simultaneous broadcast, anonymous ballot, private
// messages).
//
// Information rules. A day elimination reveals the victim's full role
// (faction and detective flag); a night elimination reveals only whether the
// victim was a detective. Detective queries reveal nothing publicly. Initial
// counts R0/M0/D0 are common knowledge. Because the night kill never removes
// a mafia member and day reveals include faction, the live mafia count is
// publicly derivable at all times.

namespace mafia {

using PlayerId = int32_t;

enum class Faction : uint8_t { citizens, mafia };

struct Role {
    Faction faction = Faction::citizens;
    bool is_detective = false;
};

enum class Phase : uint8_t { residents, mafia, detectives, terminated };

enum class Fidelity : uint8_t {
    protocol, // full engine: broadcasts, ballots, open votes, tie-breaks
    reduced   // the (R_t, M_t) chain; valid only without detectives
};

struct GameConfig {
    int32_t r0 = 0;
    int32_t m0 = 0;
    int32_t d0 = 0;
    bool adjudicate_majority = true; // mafia wins as soon as 2*M_t >= R_t
    Fidelity fidelity = Fidelity::protocol;

    double eta() const { return static_cast<double>(m0) / static_cast<double>(r0); }
    void validate() const; // throws ConfigError
};

// ---- public events ----

struct DayElimination {
    PlayerId player;
    Faction faction;
    bool was_detective;
};

struct NightElimination {
    PlayerId player;
    bool was_detective; // never carries faction
};

struct Announcement {
    PlayerId player;
    uint32_t number;
};

enum class DeclKind : uint8_t {
    request_elimination, // "eliminate me next"
    block_report,        // detective finished a block: ids = mafia found in it
    roster_publication   // detective publishes confirmed citizens: ids = the roster
};

struct Declaration {
    PlayerId player;
    DeclKind kind;
    std::vector<PlayerId> ids;
    int32_t block = -1;
};

struct BallotResult {
    PlayerId target; // winner of the anonymous ballot this day
};

using PublicEvent =
    std::variant<DayElimination, NightElimination, Announcement, Declaration, BallotResult>;

// ---- private channel ----

enum class MessageTag : uint8_t {
    vigilante_roster,  // ids = ordered confirmed-citizen roster
    ballot_instruction // ids = { target for today's anonymous ballot }
};

struct PrivateMessage {
    PlayerId from;
    MessageTag tag;
    PlayerId subject = -1;      // single-id payloads (ballot target)
    std::vector<PlayerId> ids;  // list payloads (rosters)
};

struct DeliveryReceipt {
    PlayerId from;
    PlayerId to;
};

// ---- views ----

// Everything a single player may legally see. Non-owning; valid only until
// the state next mutates.
struct View {
    PlayerId self_id = -1;
    Role self_role{};
    int32_t t = 0;
    Phase phase = Phase::residents;
    int32_t r0 = 0, m0 = 0, d0 = 0; // common knowledge

    std::span<const PlayerId> alive; // ascending ids
    const std::vector<PublicEvent>* public_log = nullptr;

    // Current-round public transcript and standing public claims.
    std::span<const Announcement> announcements;       // this day's broadcast
    uint64_t announcement_sum = 0;                     // sum of this day's numbers
    std::span<const Declaration> declarations;         // all declarations so far
    std::span<const PlayerId> pending_eliminations;    // declared, awaiting the vote
    std::optional<PlayerId> ballot_winner;             // this day's ballot, once held

    // Most recent eliminations, for cheap per-round state tracking.
    std::optional<DayElimination> last_day_elimination;
    std::optional<NightElimination> last_night_elimination;

    int32_t mafia_publicly_eliminated = 0; // day reveals with faction = mafia
    int32_t detectives_publicly_dead = 0;  // reveals with the detective flag set

    // Private information.
    std::span<const PlayerId> mafia_roster;     // mafia members only
    const int8_t* query_results = nullptr;      // detectives only; length r0; -1/0/1 = unknown/citizen/mafia
    std::span<const PrivateMessage> inbox;      // own received messages

    int32_t alive_count() const { return static_cast<int32_t>(alive.size()); }
    // Live mafia count, as derivable from public reveals (exact).
    int32_t mafia_alive_public() const { return m0 - mafia_publicly_eliminated; }
    // Alive resident of 1-based rank n in increasing-id order.
    PlayerId ranked_alive(int64_t rank) const { return alive[static_cast<size_t>(rank - 1)]; }
    bool knows_faction(PlayerId p) const { return query_results && query_results[p] >= 0; }
    Faction queried_faction(PlayerId p) const {
        return query_results[p] == 1 ? Faction::mafia : Faction::citizens;
    }
};

// ---- outcome ----

struct TrajectoryEntry {
    int32_t t;
    int32_t R;
    int32_t M;
};

struct GameOutcome {
    Faction winner = Faction::citizens;
    int32_t rounds = 0;
    bool forfeited = false; // strategy surrender; always a mafia win
    std::vector<TrajectoryEntry> trajectory;
};

// ---- game state ----

class GameState {
public:
    GameState(const GameConfig& config, std::vector<Role> roles);

    const GameConfig& config() const { return config_; }
    int32_t t() const { return t_; }
    Phase phase() const { return phase_; }
    std::optional<Faction> winner() const { return winner_; }

    std::span<const PlayerId> alive() const { return alive_; }
    int32_t alive_count() const { return static_cast<int32_t>(alive_.size()); }
    int32_t mafia_alive() const { return mafia_alive_; }
    int32_t citizens_alive() const { return alive_count() - mafia_alive_; }
    int32_t detectives_alive() const { return detectives_alive_; }
    bool is_alive(PlayerId p) const { return valid_id(p) && alive_mask_[static_cast<size_t>(p)]; }
    bool valid_id(PlayerId p) const { return p >= 0 && p < config_.r0; }

    // Moderator-only access. Strategies never touch this; they get Views.
    Role role(PlayerId p) const { return roles_[static_cast<size_t>(p)]; }

    const std::vector<PublicEvent>& public_log() const { return log_; }
    std::span<const Declaration> declarations() const { return declarations_; }
    std::span<const PlayerId> pending_eliminations() const { return pending_eliminations_; }
    std::span<const Announcement> current_announcements() const { return announcements_; }
    uint64_t announcement_sum() const { return announcement_sum_; }
    std::optional<PlayerId> ballot_winner() const { return ballot_winner_; }
    const std::optional<DayElimination>& last_day_elimination() const { return last_day_; }
    const std::optional<NightElimination>& last_night_elimination() const { return last_night_; }
    int32_t messages_sent(PlayerId p) const { return msg_sent_[static_cast<size_t>(p)]; }
    int32_t messages_received(PlayerId p) const { return msg_received_[static_cast<size_t>(p)]; }

    View view_of(PlayerId p) const;

    int32_t mafia_publicly_eliminated() const { return mafia_publicly_eliminated_; }
    int32_t detectives_publicly_dead() const { return detectives_publicly_dead_; }

    // Low-level mutators used by the round operations below.
    void eliminate_by_day(PlayerId p);
    void eliminate_by_night(PlayerId p);
    void record_announcements(std::span<const Announcement> batch);
    void record_declaration(Declaration d);
    void record_ballot_winner(PlayerId target);
    void deliver(PlayerId from, PlayerId to, MessageTag tag, PlayerId subject,
                 std::vector<PlayerId> ids);
    void record_query(PlayerId detective, PlayerId target);
    void set_phase(Phase p) { phase_ = p; }
    void advance_round(); // detectives -> residents, t+1; clears day transcript
    void settle(Faction winner);
    void drop_round_announcements(); // lean-log mode for bulk simulation

private:
    void remove_from_alive(PlayerId p);

    GameConfig config_;
    std::vector<Role> roles_;
    std::vector<uint8_t> alive_mask_;
    std::vector<PlayerId> alive_; // sorted ascending
    int32_t mafia_alive_ = 0;
    int32_t detectives_alive_ = 0;
    int32_t t_ = 0;
    Phase phase_ = Phase::residents;
    std::optional<Faction> winner_;

    std::vector<PublicEvent> log_;
    size_t round_log_start_ = 0;
    std::vector<Announcement> announcements_;
    uint64_t announcement_sum_ = 0;
    std::vector<Declaration> declarations_;
    std::vector<PlayerId> pending_eliminations_;
    std::optional<PlayerId> ballot_winner_;
    std::optional<DayElimination> last_day_;
    std::optional<NightElimination> last_night_;
    int32_t mafia_publicly_eliminated_ = 0;
    int32_t detectives_publicly_dead_ = 0;

    std::vector<PlayerId> mafia_roster_; // ascending
    std::vector<std::vector<int8_t>> knowledge_; // per detective id, else empty
    std::vector<std::vector<PrivateMessage>> inboxes_;
    std::vector<int32_t> msg_sent_;
    std::vector<int32_t> msg_received_;
};

// ---- engine operations ----

// Uniformly random role assignment: m0 mafia, d0 detectives among the
// non-mafia. Same (config, seed) always produces the same state.
GameState new_game(const GameConfig& config, uint64_t seed);
GameState new_game(const GameConfig& config, Rng& rng);

struct Vote {
    PlayerId voter;
    PlayerId target;
};

// Plurality winner; ties broken uniformly among the argmax set. Every vote
// must come from a live voter and point at a live target; an empty vote set
// against a non-empty alive set is a protocol error (voting is compulsory).
PlayerId tally_plurality(const GameState& state, std::span<const Vote> votes, Rng& rng);

// Day: plurality elimination with full role reveal; adjudicates; advances to
// the Mafia phase.
void residents_round(GameState& state, std::span<const Vote> votes, Rng& rng);

// Night: the mafia eliminate a citizen; only the detective flag is revealed;
// advances to the Detectives phase.
void mafia_round(GameState& state, PlayerId target);

struct DetectiveQuery {
    PlayerId detective;
    PlayerId target;
};

// Detective queries: truthful faction answers, revealed only to the asking
// detective. No public event. Advances to the next round.
void detectives_round(GameState& state, std::span<const DetectiveQuery> queries);

// Winner, if the position is decided: citizens at M_t = 0 (with residents
// remaining), mafia at citizen extinction, and -- when adjudicate_majority is
// on -- mafia at 2*M_t >= R_t.
std::optional<Faction> adjudicate(const GameState& state);

// ---- ideal functionalities (Assumption-1 moderator semantics) ----

struct BroadcastMessage {
    PlayerId sender;
    uint32_t value;
};

// Simultaneous broadcast: one value per live player, revealed at once; a
// silent player's value is 0. Returns the transcript in id order and records
// it in the public log.
std::vector<Announcement> ideal_simultaneous_broadcast(GameState& state,
                                                       std::span<const BroadcastMessage> messages);

struct BallotVote {
    PlayerId voter;
    std::optional<PlayerId> target; // nullopt = abstain
};

struct BallotCount {
    PlayerId target;
    int32_t count;
};

// Anonymous ballot: returns only the multiset of named targets (ascending by
// id); voter identities are erased, abstentions omitted.
std::vector<BallotCount> ideal_anonymous_ballot(const GameState& state,
                                                std::span<const BallotVote> votes);

// Private message: payload visible only to the recipient; the public record
// is the per-player send/receive counts.
DeliveryReceipt ideal_private_send(GameState& state, PlayerId from, PlayerId to, MessageTag tag,
                                   PlayerId subject, std::vector<PlayerId> ids = {});

// ---- full game driver ----

namespace strategies {
class StrategyProfile;
}

struct RunOptions {
    bool record_trajectory = true;
    bool retain_log = true;           // false: drop per-round announcements after the vote
    // When on, days whose outcome law is publicly forced (all players follow
    // the random-sum rule, or all vote one public target) are resolved by
    // sampling that law directly instead of collecting per-player decisions.
    // Distribution over outcomes is identical; per-seed results differ.
    bool fast_protocol = false;
    uint64_t decision_budget = 1u << 20; // max RNG draws per strategy decision
};

// Plays a full game under the profile. Pure function of (config, profile,
// seed). Forfeit signals from strategies end the game as a mafia win.
// `final_state`, when given, receives a copy of the terminal game state
// (log, knowledge, roles) for inspection.
GameOutcome run_game(const GameConfig& config, const strategies::StrategyProfile& profile,
                     uint64_t seed, const RunOptions& options = {},
                     GameState* final_state = nullptr);

} // namespace mafia
