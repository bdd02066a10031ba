#include "mafia/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mafia::strategies {

PlayerId PlayerStrategy::night_target(const View&, Rng&) {
    throw ProtocolError("this strategy makes no night decision");
}

// ---- building blocks ----

uint32_t random_sum_announcement(int32_t alive_count, Rng& rng) {
    return static_cast<uint32_t>(rng.below(static_cast<uint64_t>(alive_count)));
}

PlayerId random_sum_target(const View& view) {
    const uint64_t r = view.alive.size();
    const uint64_t n = 1 + (view.announcement_sum % r);
    return view.ranked_alive(static_cast<int64_t>(n));
}

namespace {

bool alive_contains(const View& view, PlayerId p) {
    return std::binary_search(view.alive.begin(), view.alive.end(), p);
}

int32_t count_alive_of(const View& view, std::span<const PlayerId> sorted_ids) {
    int32_t n = 0;
    for (PlayerId p : sorted_ids) n += alive_contains(view, p) ? 1 : 0;
    return n;
}

} // namespace

PlayerId mafia_uniform_night_target(const View& view, Rng& rng) {
    const int32_t mafia_alive = count_alive_of(view, view.mafia_roster);
    const int32_t citizens = view.alive_count() - mafia_alive;
    if (citizens <= 0) throw ProtocolError("no citizen left to eliminate at night");
    for (;;) {
        PlayerId pick = view.alive[static_cast<size_t>(rng.below(view.alive.size()))];
        if (!std::binary_search(view.mafia_roster.begin(), view.mafia_roster.end(), pick))
            return pick;
    }
}

int32_t staged_stage1_len(int32_t r0, double eta) {
    return static_cast<int32_t>(std::ceil(std::sqrt(eta) * static_cast<double>(r0)));
}

std::optional<PlayerId> first_alive_in(std::span<const PlayerId> roster, const View& view) {
    for (PlayerId p : roster)
        if (alive_contains(view, p)) return p;
    return std::nullopt;
}

std::vector<std::vector<PlayerId>> partition_blocks(const GameConfig& config, int32_t d) {
    if (d < 1) throw ConfigError("partition needs at least one block");
    // Contiguous id slices, sizes as equal as possible. Roles are assigned
    // uniformly at random, so any fixed partition is label-symmetric.
    std::vector<std::vector<PlayerId>> blocks(static_cast<size_t>(d));
    const int32_t base = config.r0 / d;
    const int32_t extra = config.r0 % d;
    PlayerId next = 0;
    for (int32_t b = 0; b < d; ++b) {
        const int32_t size = base + (b < extra ? 1 : 0);
        auto& block = blocks[static_cast<size_t>(b)];
        block.reserve(static_cast<size_t>(size));
        for (int32_t i = 0; i < size; ++i) block.push_back(next++);
    }
    return blocks;
}

// ---- profile scaffolding ----

namespace {

// Lowest-id live player outside `sorted_exclude` (both inputs ascending).
PlayerId first_alive_outside(const View& view, std::span<const PlayerId> sorted_exclude) {
    size_t j = 0;
    for (PlayerId p : view.alive) {
        while (j < sorted_exclude.size() && sorted_exclude[j] < p) ++j;
        if (j < sorted_exclude.size() && sorted_exclude[j] == p) continue;
        return p;
    }
    return -1;
}

// =====================================================================
// baseline-no-detective: the optimal detective-free play. Everyone
// announces a uniform number; everyone votes the broadcast-selected rank.
// =====================================================================

class BaselineCitizen : public PlayerStrategy {
public:
    std::optional<uint32_t> day_announce(const View& v, Rng& rng) override {
        return random_sum_announcement(v.alive_count(), rng);
    }
    PlayerId day_vote(const View& v, Rng&) override { return random_sum_target(v); }
};

class BaselineMafia : public PlayerStrategy {
public:
    std::optional<uint32_t> day_announce(const View& v, Rng& rng) override {
        // Indistinguishable from a citizen's draw.
        return random_sum_announcement(v.alive_count(), rng);
    }
    PlayerId day_vote(const View& v, Rng&) override { return random_sum_target(v); }
    PlayerId night_target(const View& v, Rng& rng) override {
        return mafia_uniform_night_target(v, rng);
    }
};

class BaselineProfile : public StrategyProfile {
public:
    const std::string& name() const override {
        static const std::string n = "baseline-no-detective";
        return n;
    }
    void validate(const GameConfig& c) const override {
        if (c.d0 != 0) throw ConfigError("baseline-no-detective requires D0 = 0");
    }
    std::vector<std::unique_ptr<PlayerStrategy>> make_players(const GameConfig&,
                                                              std::span<const Role> roles,
                                                              Rng&) const override {
        std::vector<std::unique_ptr<PlayerStrategy>> out;
        out.reserve(roles.size());
        for (const Role& r : roles) {
            if (r.faction == Faction::mafia) out.push_back(std::make_unique<BaselineMafia>());
            else out.push_back(std::make_unique<BaselineCitizen>());
        }
        return out;
    }
    DayPlan day_plan(const View&) const override { return {DayMode::uniform_random_sum, -1}; }
};

// =====================================================================
// staged-detective: the single-detective citizen play.
//
// Stage 1 (t < ceil(sqrt(eta) R0)): the detective works through a list of
// distinct ids written down before the game, one query per round, skipping
// (wasting) rounds whose listed id is already dead; days run the random-sum
// protocol. Stage 2 (t = stage-1 length): the detective compiles V, the
// ordered list of confirmed citizens still alive, sends it privately to every
// member of V, and publicly asks to be eliminated. Stage 3: the highest
// ranking survivor of V picks a uniform target outside V, instructs V by
// private message, V carries the anonymous ballot, everyone votes the ballot
// winner openly. The citizens give up if the detective dies before declaring,
// or once |V| <= M_t in stage 3.
// =====================================================================

struct StagedPublicState {
    // Derived from public information only.
    static bool declared(const View& v) { return !v.declarations.empty(); }
    static bool stage3(const View& v) {
        return declared(v) && !alive_contains(v, v.declarations.front().player);
    }
};

class StagedCitizen : public PlayerStrategy {
public:
    bool forfeit(const View& v) override {
        sync(v);
        if (v.detectives_publicly_dead > 0 && !StagedPublicState::declared(v))
            return true; // the detective died before finishing stage 1
        if (member_ && StagedPublicState::stage3(v) && alive_v_ <= v.mafia_alive_public())
            return true;
        return false;
    }

    std::optional<uint32_t> day_announce(const View& v, Rng& rng) override {
        sync(v);
        if (!v.pending_eliminations.empty() || StagedPublicState::stage3(v)) return std::nullopt;
        return random_sum_announcement(v.alive_count(), rng);
    }

    std::vector<PrivateSend> day_send(const View& v, Rng& rng) override {
        sync(v);
        if (!member_ || !StagedPublicState::stage3(v)) return {};
        if (!is_leader(v)) return {};
        // Uniform target outside V among the living.
        PlayerId k = -1;
        for (;;) {
            PlayerId pick = v.alive[static_cast<size_t>(rng.below(v.alive.size()))];
            if (!in_roster(pick)) { k = pick; break; }
        }
        today_target_ = k;
        target_round_ = v.t;
        std::vector<PrivateSend> sends;
        sends.reserve(roster_.size());
        for (PlayerId p : roster_)
            if (p != v.self_id && alive_contains(v, p))
                sends.push_back({p, MessageTag::ballot_instruction, k, {}});
        return sends;
    }

    std::optional<PlayerId> day_ballot(const View& v, Rng&) override {
        sync(v);
        if (!member_ || !StagedPublicState::stage3(v)) return std::nullopt; // abstain
        if (target_round_ == v.t && today_target_ >= 0) return today_target_;
        return std::nullopt;
    }

    PlayerId day_vote(const View& v, Rng&) override {
        sync(v);
        if (!v.pending_eliminations.empty()) return v.pending_eliminations.front();
        if (v.ballot_winner) return *v.ballot_winner;
        if (!v.announcements.empty()) return random_sum_target(v);
        // No ballot was held (the published roster can be empty): fall back
        // to a fixed public choice so the round still eliminates someone.
        return v.alive.front();
    }

private:
    void sync(const View& v) {
        // Adopt the roster and the day's ballot instruction from new mail.
        for (; inbox_cursor_ < v.inbox.size(); ++inbox_cursor_) {
            const PrivateMessage& m = v.inbox[inbox_cursor_];
            if (m.tag == MessageTag::vigilante_roster && !member_) {
                roster_.assign(m.ids.begin(), m.ids.end());
                sorted_roster_ = roster_;
                std::sort(sorted_roster_.begin(), sorted_roster_.end());
                dead_.assign(roster_.size(), 0);
                alive_v_ = static_cast<int32_t>(roster_.size());
                member_ = true;
            } else if (m.tag == MessageTag::ballot_instruction) {
                today_target_ = m.subject;
                target_round_ = v.t;
            }
        }
        // Account the previous round's eliminations against the roster.
        if (member_ && v.t != deaths_synced_round_) {
            deaths_synced_round_ = v.t;
            if (v.last_day_elimination) mark_dead(v.last_day_elimination->player);
            if (v.last_night_elimination) mark_dead(v.last_night_elimination->player);
        }
    }

    bool in_roster(PlayerId p) const {
        return std::binary_search(sorted_roster_.begin(), sorted_roster_.end(), p);
    }

    void mark_dead(PlayerId p) {
        if (!in_roster(p)) return;
        for (size_t i = 0; i < roster_.size(); ++i) {
            if (roster_[i] == p && !dead_[i]) {
                dead_[i] = 1;
                --alive_v_;
                return;
            }
        }
    }

    bool is_leader(const View& v) const {
        // Highest-ranked roster member still alive.
        auto lead = first_alive_in(roster_, v);
        return lead && *lead == v.self_id;
    }

    bool member_ = false;
    std::vector<PlayerId> roster_;        // rank order
    std::vector<PlayerId> sorted_roster_; // id order
    std::vector<uint8_t> dead_;           // by rank
    int32_t alive_v_ = 0;
    size_t inbox_cursor_ = 0;
    int32_t deaths_synced_round_ = -1;
    PlayerId today_target_ = -1;
    int32_t target_round_ = -1;
};

class StagedMafia : public PlayerStrategy {
public:
    std::optional<uint32_t> day_announce(const View& v, Rng& rng) override {
        if (!v.pending_eliminations.empty() || StagedPublicState::stage3(v)) return std::nullopt;
        return random_sum_announcement(v.alive_count(), rng);
    }
    std::optional<PlayerId> day_ballot(const View& v, Rng&) override {
        if (!StagedPublicState::stage3(v)) return std::nullopt;
        // Concentrate the mafia's secret votes on one citizen. V outvotes
        // them whenever |V| > M, so the ballot winner is unaffected.
        PlayerId p = first_alive_outside(v, v.mafia_roster);
        if (p < 0) return std::nullopt;
        return p;
    }
    PlayerId day_vote(const View& v, Rng&) override {
        if (!v.pending_eliminations.empty()) return v.pending_eliminations.front();
        if (v.ballot_winner) return *v.ballot_winner;
        if (!v.announcements.empty()) return random_sum_target(v);
        return v.alive.front();
    }
    PlayerId night_target(const View& v, Rng& rng) override {
        return mafia_uniform_night_target(v, rng);
    }
};

class StagedDetective : public PlayerStrategy {
public:
    StagedDetective(const GameConfig& config, PlayerId self, Rng& setup) {
        stage1_len_ = staged_stage1_len(config.r0, config.eta());
        // The query list is committed before the game: distinct uniform ids,
        // self excluded.
        std::vector<PlayerId> ids;
        ids.reserve(static_cast<size_t>(config.r0) - 1);
        for (PlayerId p = 0; p < config.r0; ++p)
            if (p != self) ids.push_back(p);
        const size_t want = std::min(ids.size(), static_cast<size_t>(stage1_len_));
        for (size_t i = 0; i < want; ++i) {
            size_t j = i + static_cast<size_t>(setup.below(ids.size() - i));
            std::swap(ids[i], ids[j]);
        }
        query_list_.assign(ids.begin(), ids.begin() + static_cast<ptrdiff_t>(want));
    }

    std::optional<uint32_t> day_announce(const View& v, Rng& rng) override {
        if (!v.pending_eliminations.empty() || v.t >= stage1_len_) return std::nullopt;
        return random_sum_announcement(v.alive_count(), rng);
    }

    std::optional<Declaration> day_declare(const View& v, Rng&) override {
        if (declared_ || v.t < stage1_len_) return std::nullopt;
        declared_ = true;
        compile_roster(v);
        Declaration d;
        d.player = v.self_id;
        d.kind = DeclKind::request_elimination;
        return d;
    }

    std::vector<PrivateSend> day_send(const View&, Rng&) override {
        if (!declared_ || roster_sent_) return {};
        roster_sent_ = true;
        std::vector<PrivateSend> sends;
        sends.reserve(roster_.size());
        for (PlayerId p : roster_)
            sends.push_back({p, MessageTag::vigilante_roster, -1, roster_});
        return sends;
    }

    PlayerId day_vote(const View& v, Rng&) override {
        if (!v.pending_eliminations.empty()) return v.pending_eliminations.front();
        if (!v.announcements.empty()) return random_sum_target(v);
        return v.alive.front();
    }

    std::optional<PlayerId> night_query(const View& v, Rng&) override {
        if (v.t >= static_cast<int32_t>(query_list_.size())) return std::nullopt;
        PlayerId q = query_list_[static_cast<size_t>(v.t)];
        if (!alive_contains(v, q)) return std::nullopt; // wasted round
        return q;
    }

    std::span<const PlayerId> compiled_roster() const { return roster_; }

private:
    void compile_roster(const View& v) {
        // Confirmed citizens still alive, in query order.
        for (PlayerId q : query_list_)
            if (v.knows_faction(q) && v.queried_faction(q) == Faction::citizens &&
                alive_contains(v, q))
                roster_.push_back(q);
    }

    int32_t stage1_len_ = 0;
    std::vector<PlayerId> query_list_;
    std::vector<PlayerId> roster_;
    bool declared_ = false;
    bool roster_sent_ = false;
};

class StagedProfile : public StrategyProfile {
public:
    const std::string& name() const override {
        static const std::string n = "staged-detective";
        return n;
    }
    void validate(const GameConfig& c) const override {
        if (c.d0 != 1) throw ConfigError("staged-detective requires exactly one detective");
    }
    std::vector<std::unique_ptr<PlayerStrategy>> make_players(const GameConfig& config,
                                                              std::span<const Role> roles,
                                                              Rng& setup) const override {
        std::vector<std::unique_ptr<PlayerStrategy>> out;
        out.reserve(roles.size());
        for (PlayerId p = 0; p < static_cast<PlayerId>(roles.size()); ++p) {
            const Role& r = roles[static_cast<size_t>(p)];
            if (r.faction == Faction::mafia) out.push_back(std::make_unique<StagedMafia>());
            else if (r.is_detective)
                out.push_back(std::make_unique<StagedDetective>(config, p, setup));
            else out.push_back(std::make_unique<StagedCitizen>());
        }
        return out;
    }
    DayPlan day_plan(const View& v) const override {
        // Stage 2 (roster distribution) and stage 3 (ballot) need the full
        // machinery; stage-1 days are plain random-sum days.
        if (!v.pending_eliminations.empty() || StagedPublicState::declared(v))
            return {DayMode::deliberate, -1};
        return {DayMode::uniform_random_sum, -1};
    }
    bool forfeit_possible(const View& v) const override {
        return v.detectives_publicly_dead > 0;
    }
};

// =====================================================================
// partition-detective: d^2 detectives, residents pre-partitioned into d
// blocks of size <= floor(delta/4 R0). Each detective picks a block at
// random and queries its unresolved members one per round; a finished
// detective reveals the mafia of its block and asks to be eliminated.
// Day priority: (1) pending self-reported detectives, (2) revealed mafia
// from verified reports, (3) random-sum.
// =====================================================================

struct PartitionPlan {
    std::vector<std::vector<PlayerId>> blocks;
};

std::shared_ptr<const PartitionPlan> make_partition_plan(const GameConfig& config, int32_t d) {
    auto plan = std::make_shared<PartitionPlan>();
    plan->blocks = partition_blocks(config, d);
    return plan;
}

// The public day priority shared by every resident in this scenario.
// Returns -1 when the day falls back to the random-sum protocol.
PlayerId partition_public_target(const View& v) {
    if (!v.pending_eliminations.empty()) return v.pending_eliminations.front();
    PlayerId best = -1;
    for (const Declaration& d : v.declarations) {
        if (d.kind != DeclKind::block_report) continue;
        if (alive_contains(v, d.player)) continue; // not verified yet
        for (PlayerId m : d.ids) {
            if (!alive_contains(v, m)) continue;
            if (best < 0 || m < best) best = m;
        }
    }
    return best;
}

class PartitionResident : public PlayerStrategy {
public:
    std::optional<uint32_t> day_announce(const View& v, Rng& rng) override {
        if (partition_public_target(v) >= 0) return std::nullopt;
        return random_sum_announcement(v.alive_count(), rng);
    }
    PlayerId day_vote(const View& v, Rng&) override {
        PlayerId t = partition_public_target(v);
        if (t >= 0) return t;
        if (!v.announcements.empty()) return random_sum_target(v);
        return v.alive.front();
    }
};

class PartitionMafia : public PartitionResident {
public:
    PlayerId night_target(const View& v, Rng& rng) override {
        return mafia_uniform_night_target(v, rng);
    }
};

class PartitionDetective : public PartitionResident {
public:
    PartitionDetective(std::shared_ptr<const PartitionPlan> plan, Rng& setup)
        : plan_(std::move(plan)) {
        block_ = static_cast<int32_t>(setup.below(plan_->blocks.size()));
        const auto& members = plan_->blocks[static_cast<size_t>(block_)];
        resolved_.assign(members.size(), 0);
    }

    std::optional<Declaration> day_declare(const View& v, Rng&) override {
        sync(v);
        if (declared_ || !complete_) return std::nullopt;
        declared_ = true;
        Declaration d;
        d.player = v.self_id;
        d.kind = DeclKind::block_report;
        d.block = block_;
        for (PlayerId m : members())
            if (v.knows_faction(m) && v.queried_faction(m) == Faction::mafia &&
                alive_contains(v, m))
                d.ids.push_back(m);
        return d;
    }

    std::optional<PlayerId> night_query(const View& v, Rng&) override {
        sync(v);
        if (complete_) return std::nullopt;
        PlayerId q = members()[cursor_];
        pending_query_ = q;
        return q;
    }

private:
    std::span<const PlayerId> members() const {
        return plan_->blocks[static_cast<size_t>(block_)];
    }

    void sync(const View& v) {
        // A member's status resolves when this detective queried it or when
        // it died (day deaths reveal the role; night victims are citizens).
        if (pending_query_ >= 0) {
            resolve(pending_query_);
            pending_query_ = -1;
        }
        if (v.last_day_elimination) resolve(v.last_day_elimination->player);
        if (v.last_night_elimination) resolve(v.last_night_elimination->player);
        while (cursor_ < resolved_.size() && resolved_[cursor_]) ++cursor_;
        complete_ = cursor_ >= resolved_.size();
    }

    void resolve(PlayerId p) {
        const auto m = members();
        auto it = std::lower_bound(m.begin(), m.end(), p);
        if (it != m.end() && *it == p) resolved_[static_cast<size_t>(it - m.begin())] = 1;
    }

    std::shared_ptr<const PartitionPlan> plan_;
    int32_t block_ = 0;
    std::vector<uint8_t> resolved_;
    size_t cursor_ = 0;
    bool complete_ = false;
    bool declared_ = false;
    PlayerId pending_query_ = -1;
};

class PartitionProfile : public StrategyProfile {
public:
    explicit PartitionProfile(ScenarioParams params) : params_(params) {}
    const std::string& name() const override {
        static const std::string n = "partition-detective";
        return n;
    }
    void validate(const GameConfig& c) const override {
        if (params_.delta <= 0.0 || params_.delta >= 0.5)
            throw ConfigError("partition-detective requires delta in (0, 1/2)");
        if (static_cast<double>(params_.d) <= 4.0 / params_.delta + 1.0)
            throw ConfigError("partition-detective requires d > 4/delta + 1");
        if (c.d0 < params_.d * params_.d)
            throw ConfigError("partition-detective requires at least d^2 detectives");
        const int32_t max_block = (c.r0 + params_.d - 1) / params_.d;
        const auto cap = static_cast<int32_t>(std::floor(params_.delta / 4.0 * c.r0));
        if (max_block > cap)
            throw ConfigError("partition blocks would exceed floor(delta/4 * R0)");
    }
    std::vector<std::unique_ptr<PlayerStrategy>> make_players(const GameConfig& config,
                                                              std::span<const Role> roles,
                                                              Rng& setup) const override {
        auto plan = make_partition_plan(config, params_.d);
        std::vector<std::unique_ptr<PlayerStrategy>> out;
        out.reserve(roles.size());
        for (const Role& r : roles) {
            if (r.faction == Faction::mafia) out.push_back(std::make_unique<PartitionMafia>());
            else if (r.is_detective)
                out.push_back(std::make_unique<PartitionDetective>(plan, setup));
            else out.push_back(std::make_unique<PartitionResident>());
        }
        return out;
    }
    DayPlan day_plan(const View& v) const override {
        PlayerId t = partition_public_target(v);
        if (t >= 0) return {DayMode::fixed_target, t};
        return {DayMode::uniform_random_sum, -1};
    }

private:
    ScenarioParams params_;
};

// =====================================================================
// nocrypto-detective: no private channels at all. The detective queries
// uniform residents until the confirmed-citizen set (including himself)
// is a strict majority of the living, then publishes it and asks to be
// eliminated. Everyone then eliminates the non-published residents in
// increasing-id order.
// =====================================================================

// Lowest-id live resident outside the published roster of the first
// verified publication; -1 when no verified publication exists.
PlayerId nocrypto_public_target(const View& v) {
    if (!v.pending_eliminations.empty()) return v.pending_eliminations.front();
    for (const Declaration& d : v.declarations) {
        if (d.kind != DeclKind::roster_publication) continue;
        if (alive_contains(v, d.player)) continue; // unverified until eliminated
        return first_alive_outside(v, d.ids);
    }
    return -1;
}

class NocryptoResident : public PlayerStrategy {
public:
    std::optional<uint32_t> day_announce(const View& v, Rng& rng) override {
        if (nocrypto_public_target(v) >= 0) return std::nullopt;
        return random_sum_announcement(v.alive_count(), rng);
    }
    PlayerId day_vote(const View& v, Rng&) override {
        PlayerId t = nocrypto_public_target(v);
        if (t >= 0) return t;
        if (!v.announcements.empty()) return random_sum_target(v);
        return v.alive.front();
    }
};

class NocryptoMafia : public NocryptoResident {
public:
    PlayerId night_target(const View& v, Rng& rng) override {
        return mafia_uniform_night_target(v, rng);
    }
};

class NocryptoDetective : public NocryptoResident {
public:
    explicit NocryptoDetective(const GameConfig& config)
        : confirmed_(static_cast<size_t>(config.r0), 0) {}

    std::optional<Declaration> day_declare(const View& v, Rng&) override {
        sync(v);
        if (published_) return std::nullopt;
        // Strict majority: the known-good set {self} + confirmed living.
        if (2 * (confirmed_alive_ + 1) <= v.alive_count()) return std::nullopt;
        published_ = true;
        Declaration d;
        d.player = v.self_id;
        d.kind = DeclKind::roster_publication;
        for (PlayerId p = 0; p < static_cast<PlayerId>(confirmed_.size()); ++p)
            if (confirmed_[static_cast<size_t>(p)]) d.ids.push_back(p);
        return d;
    }

    std::optional<PlayerId> night_query(const View& v, Rng& rng) override {
        sync(v);
        if (published_) return std::nullopt;
        // Uniform over the living, with replacement across rounds.
        PlayerId q = v.alive[static_cast<size_t>(rng.below(v.alive.size()))];
        pending_query_ = q;
        return q;
    }

private:
    void sync(const View& v) {
        if (pending_query_ >= 0) {
            PlayerId q = pending_query_;
            pending_query_ = -1;
            if (q != v.self_id && v.knows_faction(q) &&
                v.queried_faction(q) == Faction::citizens && !confirmed_[static_cast<size_t>(q)] &&
                alive_contains(v, q)) {
                confirmed_[static_cast<size_t>(q)] = 1;
                ++confirmed_alive_;
            }
        }
        if (v.last_day_elimination) drop(v.last_day_elimination->player);
        if (v.last_night_elimination) drop(v.last_night_elimination->player);
    }

    void drop(PlayerId p) {
        if (confirmed_[static_cast<size_t>(p)]) {
            confirmed_[static_cast<size_t>(p)] = 0;
            --confirmed_alive_;
        }
    }

    std::vector<uint8_t> confirmed_;
    int32_t confirmed_alive_ = 0;
    bool published_ = false;
    PlayerId pending_query_ = -1;
};

class NocryptoProfile : public StrategyProfile {
public:
    const std::string& name() const override {
        static const std::string n = "nocrypto-detective";
        return n;
    }
    void validate(const GameConfig& c) const override {
        if (c.d0 < 1) throw ConfigError("nocrypto-detective requires at least one detective");
    }
    std::vector<std::unique_ptr<PlayerStrategy>> make_players(const GameConfig& config,
                                                              std::span<const Role> roles,
                                                              Rng&) const override {
        std::vector<std::unique_ptr<PlayerStrategy>> out;
        out.reserve(roles.size());
        for (const Role& r : roles) {
            if (r.faction == Faction::mafia) out.push_back(std::make_unique<NocryptoMafia>());
            else if (r.is_detective) out.push_back(std::make_unique<NocryptoDetective>(config));
            else out.push_back(std::make_unique<NocryptoResident>());
        }
        return out;
    }
    DayPlan day_plan(const View& v) const override {
        PlayerId t = nocrypto_public_target(v);
        if (t >= 0) return {DayMode::fixed_target, t};
        return {DayMode::uniform_random_sum, -1};
    }
};

} // namespace

std::shared_ptr<const StrategyProfile> make_profile(const std::string& name,
                                                    const ScenarioParams& params) {
    if (name == "baseline-no-detective") return std::make_shared<BaselineProfile>();
    if (name == "staged-detective") return std::make_shared<StagedProfile>();
    if (name == "partition-detective") return std::make_shared<PartitionProfile>(params);
    if (name == "nocrypto-detective") return std::make_shared<NocryptoProfile>();
    throw ConfigError("unknown strategy profile: " + name);
}

} // namespace mafia::strategies
