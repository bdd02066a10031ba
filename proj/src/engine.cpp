#include "mafia/engine.hpp"

#include <algorithm>
#include <numeric>

#include "mafia/analysis.hpp"
#include "mafia/strategies.hpp"

namespace mafia {

void GameConfig::validate() const {
    if (r0 < 1) throw ConfigError("R0 must be at least 1");
    if (m0 < 0 || d0 < 0) throw ConfigError("M0 and D0 must be non-negative");
    if (m0 + d0 > r0) throw ConfigError("M0 + D0 must not exceed R0 (detectives are citizens)");
    if (fidelity == Fidelity::reduced && d0 != 0)
        throw ConfigError("reduced fidelity models the detective-free chain only");
}

GameState::GameState(const GameConfig& config, std::vector<Role> roles)
    : config_(config), roles_(std::move(roles)) {
    config_.validate();
    if (static_cast<int32_t>(roles_.size()) != config_.r0)
        throw ConfigError("role table size must equal R0");
    const size_t n = roles_.size();
    alive_mask_.assign(n, 1);
    alive_.resize(n);
    std::iota(alive_.begin(), alive_.end(), 0);
    knowledge_.resize(n);
    inboxes_.resize(n);
    msg_sent_.assign(n, 0);
    msg_received_.assign(n, 0);
    for (PlayerId p = 0; p < static_cast<PlayerId>(n); ++p) {
        const Role& r = roles_[static_cast<size_t>(p)];
        if (r.is_detective && r.faction == Faction::mafia)
            throw ConfigError("a detective must be a citizen");
        if (r.faction == Faction::mafia) {
            mafia_roster_.push_back(p);
            ++mafia_alive_;
        }
        if (r.is_detective) {
            ++detectives_alive_;
            knowledge_[static_cast<size_t>(p)].assign(n, -1);
        }
    }
    if (static_cast<int32_t>(mafia_roster_.size()) != config_.m0)
        throw ConfigError("role table must contain exactly M0 mafia members");
    if (detectives_alive_ != config_.d0)
        throw ConfigError("role table must contain exactly D0 detectives");
    if (auto w = adjudicate(*this)) settle(*w);
}

void GameState::remove_from_alive(PlayerId p) {
    if (!is_alive(p)) throw ProtocolError("player is not alive");
    alive_mask_[static_cast<size_t>(p)] = 0;
    alive_.erase(std::lower_bound(alive_.begin(), alive_.end(), p));
    const Role& r = roles_[static_cast<size_t>(p)];
    if (r.faction == Faction::mafia) --mafia_alive_;
    if (r.is_detective) --detectives_alive_;
    auto pending = std::find(pending_eliminations_.begin(), pending_eliminations_.end(), p);
    if (pending != pending_eliminations_.end()) pending_eliminations_.erase(pending);
}

void GameState::eliminate_by_day(PlayerId p) {
    remove_from_alive(p);
    const Role& r = roles_[static_cast<size_t>(p)];
    DayElimination ev{p, r.faction, r.is_detective};
    log_.push_back(ev);
    last_day_ = ev;
    if (r.faction == Faction::mafia) ++mafia_publicly_eliminated_;
    if (r.is_detective) ++detectives_publicly_dead_;
}

void GameState::eliminate_by_night(PlayerId p) {
    remove_from_alive(p);
    const Role& r = roles_[static_cast<size_t>(p)];
    NightElimination ev{p, r.is_detective};
    log_.push_back(ev);
    last_night_ = ev;
    if (r.is_detective) ++detectives_publicly_dead_;
}

void GameState::record_announcements(std::span<const Announcement> batch) {
    announcements_.assign(batch.begin(), batch.end());
    announcement_sum_ = 0;
    for (const auto& a : batch) announcement_sum_ += a.number;
    for (const auto& a : batch) log_.push_back(a);
}

void GameState::record_declaration(Declaration d) {
    if (!is_alive(d.player)) throw ProtocolError("declaration by a dead player");
    declarations_.push_back(d);
    // Every declaration doubles as "eliminate me next, to verify my claim";
    // the queue is served in declaration order.
    pending_eliminations_.push_back(d.player);
    log_.push_back(std::move(d));
}

void GameState::record_ballot_winner(PlayerId target) {
    ballot_winner_ = target;
    log_.push_back(BallotResult{target});
}

void GameState::deliver(PlayerId from, PlayerId to, MessageTag tag, PlayerId subject,
                        std::vector<PlayerId> ids) {
    inboxes_[static_cast<size_t>(to)].push_back(PrivateMessage{from, tag, subject, std::move(ids)});
    ++msg_sent_[static_cast<size_t>(from)];
    ++msg_received_[static_cast<size_t>(to)];
}

void GameState::record_query(PlayerId detective, PlayerId target) {
    auto& known = knowledge_[static_cast<size_t>(detective)];
    known[static_cast<size_t>(target)] =
        roles_[static_cast<size_t>(target)].faction == Faction::mafia ? 1 : 0;
}

void GameState::advance_round() {
    ++t_;
    phase_ = Phase::residents;
    announcements_.clear();
    announcement_sum_ = 0;
    ballot_winner_.reset();
    round_log_start_ = log_.size();
}

void GameState::settle(Faction winner) {
    winner_ = winner;
    phase_ = Phase::terminated;
}

void GameState::drop_round_announcements() {
    // Lean-log mode: keep eliminations/declarations/ballots, drop the bulky
    // per-player numbers of finished rounds.
    auto keep = [](const PublicEvent& e) { return !std::holds_alternative<Announcement>(e); };
    auto first = log_.begin() + static_cast<ptrdiff_t>(round_log_start_);
    log_.erase(std::stable_partition(first, log_.end(), keep), log_.end());
}

View GameState::view_of(PlayerId p) const {
    if (!valid_id(p)) throw ProtocolError("view requested for unknown player");
    const Role& role = roles_[static_cast<size_t>(p)];
    View v;
    v.self_id = p;
    v.self_role = role;
    v.t = t_;
    v.phase = phase_;
    v.r0 = config_.r0;
    v.m0 = config_.m0;
    v.d0 = config_.d0;
    v.alive = alive_;
    v.public_log = &log_;
    v.announcements = announcements_;
    v.announcement_sum = announcement_sum_;
    v.declarations = declarations_;
    v.pending_eliminations = pending_eliminations_;
    v.ballot_winner = ballot_winner_;
    v.last_day_elimination = last_day_;
    v.last_night_elimination = last_night_;
    v.mafia_publicly_eliminated = mafia_publicly_eliminated_;
    v.detectives_publicly_dead = detectives_publicly_dead_;
    if (role.faction == Faction::mafia) v.mafia_roster = mafia_roster_;
    if (role.is_detective) v.query_results = knowledge_[static_cast<size_t>(p)].data();
    v.inbox = inboxes_[static_cast<size_t>(p)];
    return v;
}

// Observer view: public information only, no player identity.
static View observer_view(const GameState& s) {
    View v;
    v.self_id = -1;
    v.t = s.t();
    v.phase = s.phase();
    v.r0 = s.config().r0;
    v.m0 = s.config().m0;
    v.d0 = s.config().d0;
    v.alive = s.alive();
    v.public_log = &s.public_log();
    v.announcements = s.current_announcements();
    v.announcement_sum = s.announcement_sum();
    v.declarations = s.declarations();
    v.pending_eliminations = s.pending_eliminations();
    v.ballot_winner = s.ballot_winner();
    v.last_day_elimination = s.last_day_elimination();
    v.last_night_elimination = s.last_night_elimination();
    v.mafia_publicly_eliminated = s.mafia_publicly_eliminated();
    v.detectives_publicly_dead = s.detectives_publicly_dead();
    return v;
}

// ---- operations ----

GameState new_game(const GameConfig& config, Rng& rng) {
    config.validate();
    const size_t n = static_cast<size_t>(config.r0);
    std::vector<PlayerId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    // Fisher-Yates; the first m0 entries become mafia, the next d0 detectives.
    for (size_t i = 0; i + 1 < n; ++i) {
        size_t j = i + static_cast<size_t>(rng.below(static_cast<uint64_t>(n - i)));
        std::swap(ids[i], ids[j]);
    }
    std::vector<Role> roles(n);
    for (int32_t k = 0; k < config.m0; ++k)
        roles[static_cast<size_t>(ids[static_cast<size_t>(k)])] = Role{Faction::mafia, false};
    for (int32_t k = 0; k < config.d0; ++k)
        roles[static_cast<size_t>(ids[static_cast<size_t>(config.m0 + k)])] =
            Role{Faction::citizens, true};
    return GameState(config, std::move(roles));
}

GameState new_game(const GameConfig& config, uint64_t seed) {
    Rng rng(seed);
    return new_game(config, rng);
}

std::optional<Faction> adjudicate(const GameState& state) {
    const int32_t r = state.alive_count();
    const int32_t m = state.mafia_alive();
    if (r > 0 && m == 0) return Faction::citizens;
    if (r > 0 && m == r) return Faction::mafia; // citizens extinct
    if (state.config().adjudicate_majority && r > 0 && 2 * m >= r) return Faction::mafia;
    return std::nullopt;
}

PlayerId tally_plurality(const GameState& state, std::span<const Vote> votes, Rng& rng) {
    if (votes.empty()) {
        if (state.alive_count() > 0)
            throw ProtocolError("open voting is compulsory: no votes cast");
        throw ProtocolError("no voters");
    }
    std::vector<int32_t> counts(static_cast<size_t>(state.config().r0), 0);
    std::vector<PlayerId> candidates;
    for (const Vote& v : votes) {
        if (!state.is_alive(v.voter)) throw ProtocolError("vote cast by a dead player");
        if (!state.valid_id(v.target) || !state.is_alive(v.target))
            throw ProtocolError("vote for a dead or unknown player");
        if (counts[static_cast<size_t>(v.target)]++ == 0) candidates.push_back(v.target);
    }
    int32_t best = 0;
    for (PlayerId c : candidates) best = std::max(best, counts[static_cast<size_t>(c)]);
    std::sort(candidates.begin(), candidates.end());
    std::vector<PlayerId> top;
    for (PlayerId c : candidates)
        if (counts[static_cast<size_t>(c)] == best) top.push_back(c);
    return top[static_cast<size_t>(rng.below(top.size()))];
}

void residents_round(GameState& state, std::span<const Vote> votes, Rng& rng) {
    if (state.phase() != Phase::residents) throw ProtocolError("not the Residents round");
    const PlayerId out = tally_plurality(state, votes, rng);
    state.eliminate_by_day(out);
    if (auto w = adjudicate(state)) {
        state.settle(*w);
        return;
    }
    state.set_phase(Phase::mafia);
}

void mafia_round(GameState& state, PlayerId target) {
    if (state.phase() != Phase::mafia) throw ProtocolError("not the Mafia round");
    if (!state.valid_id(target) || !state.is_alive(target))
        throw ProtocolError("night target is dead or unknown");
    if (state.role(target).faction == Faction::mafia)
        throw ProtocolError("the mafia cannot eliminate a mafia member");
    state.eliminate_by_night(target);
    if (auto w = adjudicate(state)) {
        state.settle(*w);
        return;
    }
    state.set_phase(Phase::detectives);
}

void detectives_round(GameState& state, std::span<const DetectiveQuery> queries) {
    if (state.phase() != Phase::detectives) throw ProtocolError("not the Detectives round");
    for (const auto& q : queries) {
        if (!state.valid_id(q.detective) || !state.is_alive(q.detective))
            throw ProtocolError("query by a dead or unknown player");
        if (!state.role(q.detective).is_detective)
            throw ProtocolError("query by a non-detective");
        if (!state.valid_id(q.target)) throw ProtocolError("query of an unknown player");
        state.record_query(q.detective, q.target);
    }
    state.advance_round();
}

// ---- ideal functionalities ----

std::vector<Announcement> ideal_simultaneous_broadcast(GameState& state,
                                                       std::span<const BroadcastMessage> messages) {
    std::vector<Announcement> transcript;
    transcript.reserve(state.alive().size());
    std::vector<uint32_t> value(static_cast<size_t>(state.config().r0), 0);
    for (const auto& m : messages) {
        if (!state.valid_id(m.sender) || !state.is_alive(m.sender))
            throw ProtocolError("broadcast from a dead or unknown player");
        value[static_cast<size_t>(m.sender)] = m.value;
    }
    // A silent player's value is 0; the transcript covers every live player
    // in id order.
    for (PlayerId p : state.alive()) transcript.push_back({p, value[static_cast<size_t>(p)]});
    state.record_announcements(transcript);
    return transcript;
}

std::vector<BallotCount> ideal_anonymous_ballot(const GameState& state,
                                                std::span<const BallotVote> votes) {
    std::vector<int32_t> counts(static_cast<size_t>(state.config().r0), 0);
    std::vector<PlayerId> named;
    for (const auto& v : votes) {
        if (!state.valid_id(v.voter) || !state.is_alive(v.voter))
            throw ProtocolError("ballot vote by a dead or unknown player");
        if (!v.target) continue; // abstention leaves no trace
        if (counts[static_cast<size_t>(*v.target)]++ == 0) named.push_back(*v.target);
    }
    std::sort(named.begin(), named.end());
    std::vector<BallotCount> multiset;
    multiset.reserve(named.size());
    for (PlayerId p : named) multiset.push_back({p, counts[static_cast<size_t>(p)]});
    return multiset;
}

DeliveryReceipt ideal_private_send(GameState& state, PlayerId from, PlayerId to, MessageTag tag,
                                   PlayerId subject, std::vector<PlayerId> ids) {
    if (!state.valid_id(from) || !state.is_alive(from))
        throw ProtocolError("private send from a dead or unknown player");
    if (!state.valid_id(to) || !state.is_alive(to))
        throw ProtocolError("undeliverable: recipient is dead or unknown");
    state.deliver(from, to, tag, subject, std::move(ids));
    return DeliveryReceipt{from, to};
}

// ---- full game driver ----

namespace {

using strategies::DayMode;
using strategies::PlayerStrategy;
using strategies::StrategyProfile;

class GameRunner {
public:
    GameRunner(const GameConfig& config, const StrategyProfile& profile, uint64_t seed,
               const RunOptions& options)
        : options_(options), rng_(seed), state_(new_game(config, rng_)), profile_(&profile) {
        profile.validate(config);
        std::vector<Role> roles(static_cast<size_t>(config.r0));
        for (PlayerId p = 0; p < config.r0; ++p) roles[static_cast<size_t>(p)] = state_.role(p);
        players_ = profile.make_players(config, roles, rng_);
        if (players_.size() != roles.size())
            throw ConfigError("profile must supply one strategy per player");
    }

    const GameState& state() const { return state_; }

    GameOutcome play() {
        GameOutcome out;
        record_point(out, state_.t());
        while (true) {
            if (auto w = finish_if_decided()) {
                out.winner = *w;
                out.rounds = state_.t();
                return out;
            }
            if (run_forfeit_poll()) {
                out.winner = Faction::mafia;
                out.forfeited = true;
                out.rounds = state_.t();
                state_.settle(Faction::mafia);
                return out;
            }
            run_day();
            if (state_.winner()) return finish_mid_round(out);
            run_night();
            if (state_.winner()) return finish_mid_round(out);
            run_queries();
            record_point(out, state_.t());
            if (!options_.retain_log) state_.drop_round_announcements();
        }
    }

private:
    void record_point(GameOutcome& out, int32_t t) {
        if (options_.record_trajectory)
            out.trajectory.push_back({t, state_.alive_count(), state_.mafia_alive()});
    }

    // Termination inside round t+1 (adjudication always fires on an
    // elimination, never at a round boundary mid-game).
    GameOutcome finish_mid_round(GameOutcome& out) {
        out.winner = *state_.winner();
        out.rounds = state_.t() + 1;
        record_point(out, state_.t() + 1);
        return std::move(out);
    }

    std::optional<Faction> finish_if_decided() {
        if (state_.phase() == Phase::terminated) return state_.winner();
        if (auto w = adjudicate(state_)) {
            state_.settle(*w);
            return w;
        }
        return std::nullopt;
    }

    PlayerStrategy& strategy(PlayerId p) { return *players_[static_cast<size_t>(p)]; }

    template <typename F>
    auto budgeted(F&& f) -> decltype(f()) {
        rng_.set_budget(options_.decision_budget);
        auto result = f();
        rng_.clear_budget();
        return result;
    }

    bool run_forfeit_poll() {
        if (!profile_->forfeit_possible(observer_view(state_))) return false;
        for (PlayerId p : state_.alive()) {
            View v = state_.view_of(p);
            if (strategy(p).forfeit(v)) return true;
        }
        return false;
    }

    void run_day() {
        // Public claims precede vote coordination. Only detectives ever
        // declare under the implemented profiles, so only they are polled.
        collect_declarations();

        const strategies::DayPlan plan =
            options_.fast_protocol ? profile_->day_plan(observer_view(state_))
                                   : strategies::DayPlan{DayMode::deliberate, -1};
        switch (plan.mode) {
        case DayMode::uniform_random_sum: {
            // The broadcast sum mod R_t is uniform whenever at least one
            // citizen draws honestly; sample the induced elimination law.
            const auto alive = state_.alive();
            const PlayerId out = alive[static_cast<size_t>(rng_.below(alive.size()))];
            state_.eliminate_by_day(out);
            break;
        }
        case DayMode::fixed_target: {
            if (!state_.is_alive(plan.target))
                throw ProtocolError("day plan named a dead target");
            state_.eliminate_by_day(plan.target);
            break;
        }
        case DayMode::deliberate:
            run_full_day();
            return; // residents_round settles adjudication itself
        }
        if (auto w = adjudicate(state_)) state_.settle(*w);
        else state_.set_phase(Phase::mafia);
    }

    void collect_declarations() {
        scratch_declarations_.clear();
        for (PlayerId p : state_.alive()) {
            if (!state_.role(p).is_detective) continue;
            View v = state_.view_of(p);
            auto decl = budgeted([&] { return strategy(p).day_declare(v, rng_); });
            if (decl) {
                decl->player = p;
                scratch_declarations_.push_back(std::move(*decl));
            }
        }
        for (auto& d : scratch_declarations_) state_.record_declaration(std::move(d));
    }

    void run_full_day() {
        // Simultaneous broadcast: values are decided against the pre-broadcast
        // state, then revealed at once.
        scratch_broadcast_.clear();
        for (PlayerId p : state_.alive()) {
            View v = state_.view_of(p);
            auto n = budgeted([&] { return strategy(p).day_announce(v, rng_); });
            if (n) scratch_broadcast_.push_back({p, *n});
        }
        if (!scratch_broadcast_.empty())
            ideal_simultaneous_broadcast(state_, scratch_broadcast_);

        // Private messages, also simultaneous.
        scratch_sends_.clear();
        for (PlayerId p : state_.alive()) {
            View v = state_.view_of(p);
            auto sends = budgeted([&] { return strategy(p).day_send(v, rng_); });
            for (auto& s : sends) scratch_sends_.emplace_back(p, std::move(s));
        }
        for (auto& [from, send] : scratch_sends_)
            ideal_private_send(state_, from, send.to, send.tag, send.subject,
                               std::move(send.ids));

        // Anonymous ballot, when anyone participates.
        scratch_ballot_.clear();
        for (PlayerId p : state_.alive()) {
            View v = state_.view_of(p);
            auto b = budgeted([&] { return strategy(p).day_ballot(v, rng_); });
            if (b) scratch_ballot_.push_back({p, *b});
        }
        if (!scratch_ballot_.empty()) {
            auto multiset = ideal_anonymous_ballot(state_, scratch_ballot_);
            int32_t best = 0;
            for (const auto& c : multiset) best = std::max(best, c.count);
            scratch_top_.clear();
            for (const auto& c : multiset)
                if (c.count == best) scratch_top_.push_back(c.target);
            state_.record_ballot_winner(
                scratch_top_[static_cast<size_t>(rng_.below(scratch_top_.size()))]);
        }

        // Compulsory open vote.
        scratch_votes_.clear();
        for (PlayerId p : state_.alive()) {
            View v = state_.view_of(p);
            PlayerId target = budgeted([&] { return strategy(p).day_vote(v, rng_); });
            scratch_votes_.push_back({p, target});
        }
        residents_round(state_, scratch_votes_, rng_);
    }

    void run_night() {
        if (state_.phase() != Phase::mafia) return;
        // The mafia share all information; the lowest-id live member decides.
        PlayerId decider = -1;
        for (PlayerId p : state_.alive())
            if (state_.role(p).faction == Faction::mafia) { decider = p; break; }
        if (decider < 0) throw ProtocolError("mafia round with no mafia alive");
        View v = state_.view_of(decider);
        PlayerId target = budgeted([&] { return strategy(decider).night_target(v, rng_); });
        mafia_round(state_, target);
    }

    void run_queries() {
        if (state_.phase() != Phase::detectives) return;
        scratch_queries_.clear();
        for (PlayerId p : state_.alive()) {
            if (!state_.role(p).is_detective) continue;
            View v = state_.view_of(p);
            auto q = budgeted([&] { return strategy(p).night_query(v, rng_); });
            if (q) scratch_queries_.push_back({p, *q});
        }
        detectives_round(state_, scratch_queries_);
    }

    RunOptions options_;
    Rng rng_;
    GameState state_;
    const StrategyProfile* profile_;
    std::vector<std::unique_ptr<PlayerStrategy>> players_;

    std::vector<Declaration> scratch_declarations_;
    std::vector<BroadcastMessage> scratch_broadcast_;
    std::vector<std::pair<PlayerId, strategies::PrivateSend>> scratch_sends_;
    std::vector<BallotVote> scratch_ballot_;
    std::vector<PlayerId> scratch_top_;
    std::vector<Vote> scratch_votes_;
    std::vector<DetectiveQuery> scratch_queries_;
};

} // namespace

GameOutcome run_game(const GameConfig& config, const strategies::StrategyProfile& profile,
                     uint64_t seed, const RunOptions& options, GameState* final_state) {
    if (config.fidelity == Fidelity::reduced) {
        config.validate();
        if (final_state) throw UsageError("reduced fidelity keeps no full game state");
        auto reduced = analysis::simulate_reduced(config.r0, config.m0, seed, {},
                                                  options.record_trajectory);
        GameOutcome out;
        out.winner = reduced.mafia_won ? Faction::mafia : Faction::citizens;
        out.rounds = static_cast<int32_t>(reduced.rounds);
        out.trajectory.reserve(reduced.trajectory.size());
        for (const auto& p : reduced.trajectory)
            out.trajectory.push_back({static_cast<int32_t>(p.t), static_cast<int32_t>(p.R),
                                      static_cast<int32_t>(p.M)});
        return out;
    }
    GameRunner runner(config, profile, seed, options);
    GameOutcome out = runner.play();
    if (final_state) *final_state = runner.state();
    return out;
}

} // namespace mafia
