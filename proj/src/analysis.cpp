#include "mafia/analysis.hpp"

#include <cmath>
#include <mutex>

namespace mafia::analysis {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw DomainError(what);
}

} // namespace

// ---- X ----

ExactRational x_value(long R, long M) {
    require(R >= 1, "x_value requires R >= 1");
    return ExactRational(BigInt(M) * BigInt(M - 1), BigInt(R));
}

ExactRational x_drift(long R, long M) {
    require(R >= 3, "x_drift requires R >= 3");
    require(M >= 1 && M <= R - 1, "x_drift requires 1 <= M <= R-1");
    ExactRational pm(M, R);
    ExactRational pc(R - M, R);
    return pm * x_value(R - 2, M - 1) + pc * x_value(R - 2, M) - x_value(R, M);
}

// ---- Y ----

BigInt y_denominator_scaled(long R, long M) {
    BigInt r(R), m(M);
    return 100 * r * r - 100 * r * m + m * m * (m - 1) * (m - 1);
}

ExactRational y_value(long R, long M) {
    BigInt den = y_denominator_scaled(R, M);
    require(sgn(den) > 0, "y_value requires positive denominator");
    BigInt m(M);
    return ExactRational(100 * m * m * (m - 1) * (m - 1), den);
}

ExactRational y_drift(long R, long M) {
    require(M >= 0 && R >= M + 3, "y_drift requires R >= M + 3");
    ExactRational pm(M, R);
    ExactRational pc(R - M, R);
    return pm * y_value(R - 2, M - 1) + pc * y_value(R - 2, M) - y_value(R, M);
}

BigInt p_poly(long R, long M) {
    // Coefficients of M^1 .. M^9, each a polynomial in R (descending powers):
    //   M^1: 400 R^4 - 1600 R^3 + 1600 R^2
    //   M^2: -800 R^4 + 2400 R^3 - 384 R^2 - 2416 R
    //   M^3: 400 R^4 + 100 R^3 - 4076 R^2 + 4456 R + 16
    //   M^4: -1000 R^3 + 2844 R^2 - 1448 R - 72
    //   M^5: 100 R^3 + 64 R^2 - 847 R + 122
    //   M^6: -36 R^2 + 308 R - 88
    //   M^7: -12 R^2 - 66 R + 12
    //   M^8: 12 R + 16
    //   M^9: R - 6
    BigInt r(R);
    const BigInt r2 = r * r, r3 = r2 * r, r4 = r3 * r;
    const BigInt c[10] = {
        BigInt(0),
        400 * r4 - 1600 * r3 + 1600 * r2,
        -800 * r4 + 2400 * r3 - 384 * r2 - 2416 * r,
        400 * r4 + 100 * r3 - 4076 * r2 + 4456 * r + 16,
        -1000 * r3 + 2844 * r2 - 1448 * r - 72,
        100 * r3 + 64 * r2 - 847 * r + 122,
        -36 * r2 + 308 * r - 88,
        -12 * r2 - 66 * r + 12,
        12 * r + 16,
        r - 6,
    };
    BigInt m(M);
    BigInt acc = c[9];
    for (int k = 8; k >= 1; --k) acc = acc * m + c[k];
    return acc * m;
}

// ---- Z ----

ExactRational z_value(long V, long M) {
    require(V >= 0, "z_value requires V >= 0");
    return ExactRational(BigInt(M), BigInt(V + 1));
}

ZDrift z_drift_parts(long U, long V, long M) {
    require(U >= 1 && M >= 1 && V > M, "z_drift requires U >= 1, M >= 1, V > M");
    const ExactRational day_mafia(M, U + M);
    const ExactRational day_citizen(U, U + M);
    // Night victim is uniform among the surviving citizens.
    const ExactRational night_v_after_mafia(V, U + V);
    const ExactRational night_u_after_mafia(U, U + V);
    const ExactRational night_v_after_citizen(V, U + V - 1);
    const ExactRational night_u_after_citizen(U - 1, U + V - 1);

    ExactRational expectation =
        day_mafia * night_v_after_mafia * z_value(V - 1, M - 1) +
        day_mafia * night_u_after_mafia * z_value(V, M - 1) +
        day_citizen * night_v_after_citizen * z_value(V - 1, M) +
        day_citizen * night_u_after_citizen * z_value(V, M);

    BigInt u(U), v(V), m(M);
    BigInt num = m * ((m - v) * (u + v) + 1 - m);
    BigInt den = (u + m) * (v + 1) * (u + v) * (u + v - 1);

    return ZDrift{expectation - z_value(V, M), ExactRational(num, den)};
}

ExactRational z_drift(long U, long V, long M) {
    ZDrift d = z_drift_parts(U, V, M);
    if (d.expectation_minus_z != d.closed_form)
        throw DomainError("z drift enumeration disagrees with closed form");
    return d.closed_form;
}

// ---- exact win probability ----

// Post-day-elimination continuation: adjudicate, apply the night kill,
// adjudicate again. `col` is the w(., m) column, already filled below row r.
namespace {

double fp_continue(long r, long m, const std::vector<double>& col) {
    if (m == 0) return 0.0;
    if (2 * m >= r) return 1.0;
    const long rr = r - 1; // night victim is a citizen
    if (2 * m >= rr) return 1.0;
    return col[static_cast<size_t>(rr)];
}

ExactRational exact_continue(long r, long m, const std::vector<ExactRational>& col) {
    if (m == 0) return ExactRational(0);
    if (2 * m >= r) return ExactRational(1);
    const long rr = r - 1;
    if (2 * m >= rr) return ExactRational(1);
    return col[static_cast<size_t>(rr)];
}

} // namespace

void ExactWinOracle::ensure(long R, long M) {
    if (R > max_r_) {
        // Extend existing columns first (lowest M first: column m reads m-1).
        for (size_t m = 0; m < cols_.size(); ++m) {
            auto& col = cols_[m];
            col.resize(static_cast<size_t>(R) + 1);
            if (m == 0) continue;
            const auto& prev = cols_[m - 1];
            const long mm = static_cast<long>(m);
            for (long r = max_r_ + 1; r <= R; ++r) {
                if (2 * mm >= r) { col[static_cast<size_t>(r)] = ExactRational(1); continue; }
                ExactRational a = exact_continue(r - 1, mm - 1, prev);
                ExactRational b = exact_continue(r - 1, mm, col);
                col[static_cast<size_t>(r)] =
                    (ExactRational(mm, r) * a) + (ExactRational(r - mm, r) * b);
            }
        }
        max_r_ = R;
    }
    for (long m = static_cast<long>(cols_.size()); m <= M; ++m) {
        std::vector<ExactRational> col(static_cast<size_t>(max_r_) + 1, ExactRational(0));
        if (m > 0) {
            const auto& prev = cols_[static_cast<size_t>(m - 1)];
            for (long r = 1; r <= max_r_; ++r) {
                if (2 * m >= r) { col[static_cast<size_t>(r)] = ExactRational(1); continue; }
                ExactRational a = exact_continue(r - 1, m - 1, prev);
                ExactRational b = exact_continue(r - 1, m, col);
                col[static_cast<size_t>(r)] =
                    (ExactRational(m, r) * a) + (ExactRational(r - m, r) * b);
            }
        }
        cols_.push_back(std::move(col));
    }
}

const ExactRational& ExactWinOracle::at(long R, long M) {
    require(M >= 0 && R >= 1 && M <= R, "win probability requires 0 <= M <= R");
    ensure(R, M);
    return cols_[static_cast<size_t>(M)][static_cast<size_t>(R)];
}

ExactRational exact_win_probability(long R, long M) {
    static ExactWinOracle oracle;
    static std::mutex lock;
    std::scoped_lock guard(lock);
    return oracle.at(R, M);
}

double win_probability_fp(long R, long M) {
    if (M < 0 || M > R || R < 1) throw DomainError("win probability requires 0 <= M <= R");
    FpWinTable table(R);
    return table.at(R, M);
}

FpWinTable::FpWinTable(long r_max) : r_max_(r_max) {
    require(r_max >= 1, "FpWinTable requires r_max >= 1");
}

void FpWinTable::ensure(long M) {
    for (long m = static_cast<long>(cols_.size()); m <= M; ++m) {
        std::vector<double> col(static_cast<size_t>(r_max_) + 1, 0.0);
        if (m > 0) {
            const auto& prev = cols_[static_cast<size_t>(m - 1)];
            for (long r = 1; r <= r_max_; ++r) {
                if (2 * m >= r) { col[static_cast<size_t>(r)] = 1.0; continue; }
                double a = fp_continue(r - 1, m - 1, prev);
                double b = fp_continue(r - 1, m, col);
                col[static_cast<size_t>(r)] =
                    (static_cast<double>(m) * a + static_cast<double>(r - m) * b) / static_cast<double>(r);
            }
        }
        cols_.push_back(std::move(col));
    }
}

double FpWinTable::at(long R, long M) {
    require(M >= 0 && R >= 1 && M <= R && R <= r_max_, "FpWinTable lookup out of range");
    if (M == 0) return 0.0;
    if (2 * M >= R) return 1.0;
    ensure(M);
    return cols_[static_cast<size_t>(M)][static_cast<size_t>(R)];
}

// ---- single mafia chain and bound ----

ExactRational single_mafia_win(long R) {
    require(R >= 1, "single_mafia_win requires R >= 1");
    static std::vector<ExactRational> memo; // memo[r] = w(r, 1)
    static std::mutex lock;
    std::scoped_lock guard(lock);
    if (memo.empty()) memo = {ExactRational(0), ExactRational(1), ExactRational(1)};
    for (long r = static_cast<long>(memo.size()); r <= R; ++r)
        memo.push_back(ExactRational(r - 1, r) * memo[static_cast<size_t>(r - 2)]);
    return memo[static_cast<size_t>(R)];
}

double g_bound(long n) {
    require(n >= 1, "g_bound requires n >= 1");
    return std::sqrt(2.0 / (static_cast<double>(n) + 1.0));
}

// ---- polynomial positivity scan ----

std::optional<long> find_min_k(long r_max) {
    require(r_max >= 10, "find_min_k requires r_max >= 10");
    long worst = 1; // M = 1 gives p_poly = 0, never strictly positive
    for (long R = 2; R <= r_max; ++R) {
        for (long M = 2; 2 * M <= R; ++M) {
            if (M <= worst) continue;
            if (sgn(p_poly(R, M)) <= 0) worst = M;
        }
    }
    const long k = worst + 1;
    if (2 * k > r_max) return std::nullopt;
    return k;
}

// ---- bounds ----

BoundValues bound_values(double eta, long d) {
    require(eta > 0.0 && eta < 1.0, "bound_values requires 0 < eta < 1");
    require(d >= 1, "bound_values requires d >= 1");
    BoundValues b{};
    b.p1 = 2.0 * std::sqrt(eta) / (1.0 - eta);
    b.mafia_floor = (eta * eta / 72.0) * std::pow(eta / (8.0 * static_cast<double>(d)), static_cast<double>(d));
    b.citizens_floor = 1.0 - static_cast<double>(d) * std::exp(-static_cast<double>(d));
    b.eps_tail = std::sqrt(8.0 * eta);
    return b;
}

// ---- chain simulation ----

ReducedOutcome simulate_reduced(long R, long M, uint64_t seed, Pattern pattern,
                                bool record_trajectory) {
    require(M >= 0 && M <= R && R >= 1, "simulate_reduced requires 0 <= M <= R");
    require(pattern.day_steps >= 1 && pattern.round_steps > pattern.day_steps,
            "pattern requires r > d >= 1");
    Rng rng(seed);
    ReducedOutcome out;
    int64_t r = R, m = M, t = 0;
    if (record_trajectory) out.trajectory.push_back({t, r, m});

    auto adjudicated = [&]() -> bool {
        if (m == 0) { out.mafia_won = false; return true; }
        if (2 * m >= r) { out.mafia_won = true; return true; }
        return false;
    };

    while (!adjudicated()) {
        bool done = false;
        for (int i = 0; i < pattern.day_steps && !done; ++i) {
            if (rng.below(static_cast<uint64_t>(r)) < static_cast<uint64_t>(m)) --m;
            --r;
            done = adjudicated();
        }
        const int nights = pattern.round_steps - pattern.day_steps;
        for (int i = 0; i < nights && !done; ++i) {
            --r; // night removes a citizen
            done = adjudicated();
        }
        ++t;
        if (record_trajectory) out.trajectory.push_back({t, r, m});
        if (done) break;
    }
    out.rounds = t;
    return out;
}

} // namespace mafia::analysis
