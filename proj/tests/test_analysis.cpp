#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mafia/analysis.hpp"
#include "mafia/rng.hpp"

using namespace mafia;
using namespace mafia::analysis;

namespace {
ExactRational q(long num, long den) { return ExactRational(num, den); }
}

TEST_CASE("x value") {
    CHECK(x_value(10, 3) == q(3, 5));
    CHECK(x_value(7, 1) == ExactRational(0));
    CHECK(x_value(7, 0) == ExactRational(0));
    CHECK_THROWS_AS(x_value(0, 0), DomainError);
}

TEST_CASE("x drift vanishes") {
    CHECK(x_drift(10, 3) == ExactRational(0));
    CHECK(x_drift(7, 1) == ExactRational(0));
    CHECK(x_drift(101, 50) == ExactRational(0));
    for (long R = 3; R <= 60; ++R)
        for (long M = 1; M <= R - 1; ++M)
            CHECK(x_drift(R, M) == ExactRational(0));
    CHECK_THROWS_AS(x_drift(2, 1), DomainError);
    CHECK_THROWS_AS(x_drift(10, 0), DomainError);
    CHECK_THROWS_AS(x_drift(10, 10), DomainError);
}

TEST_CASE("y value and drift") {
    CHECK(y_value(10, 1) == ExactRational(0));
    CHECK(y_drift(10, 1) == ExactRational(0));
    CHECK(y_drift(100, 10) > ExactRational(0));
    // Direct evaluation: Y(10,3) = 100*36 / (100*100 - 100*30 + 36).
    CHECK(y_value(10, 3) == q(3600, 7036));
    CHECK_THROWS_AS(y_drift(5, 3), DomainError);
}

TEST_CASE("drift numerator polynomial") {
    // Hand-computed reference value.
    CHECK(p_poly(10, 3) == BigInt(18785856));
    CHECK(p_poly(50, 0) == BigInt(0));
    CHECK(p_poly(50, 1) == BigInt(0));
    CHECK(p_poly(123, 1) == BigInt(0));
}

TEST_CASE("y drift equals the scaled polynomial") {
    // y_drift(R, M) * R * Dh(R,M) * Dh(R-2,M) * Dh(R-2,M-1) == 10^4 * P(R,M)
    for (long R = 5; R <= 80; ++R) {
        for (long M = 2; M + 3 <= R; ++M) {
            const ExactRational drift = y_drift(R, M);
            const BigInt scale = BigInt(R) * y_denominator_scaled(R, M) *
                                 y_denominator_scaled(R - 2, M) *
                                 y_denominator_scaled(R - 2, M - 1);
            CHECK(drift * ExactRational(scale) == ExactRational(BigInt(10000 * p_poly(R, M))));
        }
    }
}

TEST_CASE("z drift") {
    SUBCASE("hand-enumerated values") {
        CHECK(z_drift(1, 2, 1) == q(-1, 12));
        CHECK(z_drift(2, 3, 1) == q(-1, 24));
    }
    SUBCASE("closed form matches enumeration and is nonpositive") {
        for (long U = 1; U <= 25; ++U)
            for (long M = 1; M <= 25; ++M)
                for (long V = M + 1; V <= 25; ++V) {
                    ZDrift d = z_drift_parts(U, V, M);
                    CHECK(d.expectation_minus_z == d.closed_form);
                    CHECK(d.closed_form <= ExactRational(0));
                }
    }
    SUBCASE("domain") {
        CHECK_THROWS_AS(z_drift(0, 2, 1), DomainError);
        CHECK_THROWS_AS(z_drift(1, 1, 1), DomainError);
        CHECK_THROWS_AS(z_drift(1, 2, 0), DomainError);
    }
}

TEST_CASE("exact win probability") {
    SUBCASE("hand-enumerated values") {
        // (3,1): the day vote hits the mafia member with probability 1/3,
        // otherwise the mafia reaches parity.
        CHECK(exact_win_probability(3, 1) == q(2, 3));
        // (5,1): survive two day votes, 4/5 * 2/3.
        CHECK(exact_win_probability(5, 1) == q(8, 15));
    }
    SUBCASE("absorbing states") {
        CHECK(exact_win_probability(17, 0) == ExactRational(0));
        CHECK(exact_win_probability(4, 2) == ExactRational(1));
        CHECK(exact_win_probability(9, 5) == ExactRational(1));
    }
    SUBCASE("domain") { CHECK_THROWS_AS(exact_win_probability(3, 4), DomainError); }
    SUBCASE("agrees with the floating-point table") {
        FpWinTable table(120);
        ExactWinOracle oracle;
        for (long R = 1; R <= 120; ++R)
            for (long M = 0; M <= R; ++M)
                CHECK(std::abs(oracle.at(R, M).to_double() - table.at(R, M)) < 1e-12);
    }
    SUBCASE("monotone in M, monotone in R at equal parity") {
        ExactWinOracle oracle;
        for (long R = 4; R <= 150; ++R)
            for (long M = 1; M <= R; ++M)
                CHECK(oracle.at(R, M) >= oracle.at(R, M - 1));
        for (long M = 1; M <= 20; ++M)
            for (long R = M + 2; R <= 150; ++R)
                CHECK(oracle.at(R, M) <= oracle.at(R - 2, M));
    }
}

TEST_CASE("single mafia chain") {
    CHECK(single_mafia_win(3) == q(2, 3));
    CHECK(single_mafia_win(5) == q(8, 15));
    CHECK(single_mafia_win(1) == ExactRational(1));
    CHECK(single_mafia_win(2) == ExactRational(1));
    SUBCASE("equals the DP oracle") {
        ExactWinOracle oracle;
        for (long R = 1; R <= 600; ++R) CHECK(single_mafia_win(R) == oracle.at(R, 1));
    }
    SUBCASE("survival-product bounds by parity") {
        // The odd chain telescopes to sqrt(2/(n+1)). The even chain stops at
        // the weak-majority state (2, 1) and telescopes to sqrt(3/(n+1))
        // instead; sqrt(2/(n+1)) is not a valid bound for it.
        CHECK(single_mafia_win(99).to_double() <= g_bound(99));
        CHECK(g_bound(99) == doctest::Approx(std::sqrt(0.02)));
        for (long n = 3; n <= 2000; n += 2)
            CHECK(single_mafia_win(n).to_double() <= g_bound(n));
        for (long n = 4; n <= 2000; n += 2) {
            CHECK(single_mafia_win(n).to_double() <=
                  std::sqrt(3.0 / (static_cast<double>(n) + 1.0)));
            CHECK(single_mafia_win(n).to_double() > g_bound(n)); // the clash is structural
        }
    }
}

TEST_CASE("positivity threshold of the drift polynomial") {
    auto k500 = find_min_k(500);
    auto k1000 = find_min_k(1000);
    REQUIRE(k500.has_value());
    REQUIRE(k1000.has_value());
    CHECK(*k500 == *k1000); // stable in the scan range
    const long k = *k1000;
    CHECK(k >= 2);
    // A witness below k exists...
    bool witness = false;
    for (long R = 2 * (k - 1); R <= 1000 && !witness; ++R)
        if (sgn(p_poly(R, k - 1)) <= 0) witness = true;
    CHECK(witness);
    // ...and the boundary point at k itself is positive.
    CHECK(p_poly(2 * k, k) > 0);
}

TEST_CASE("closed-form bounds") {
    auto b = bound_values(0.02, 1);
    CHECK(b.p1 == doctest::Approx(0.2886150127292031).epsilon(1e-12));
    auto b10 = bound_values(0.25, 10);
    CHECK(b10.citizens_floor == doctest::Approx(1.0 - 10.0 * std::exp(-10.0)).epsilon(1e-12));
    auto b02 = bound_values(0.2, 1);
    CHECK(b02.mafia_floor == doctest::Approx((0.04 / 72.0) * 0.025).epsilon(1e-12));
    CHECK(bound_values(1.0 / 32.0, 1).eps_tail == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(bound_values(0.0, 1), DomainError);
    CHECK_THROWS_AS(bound_values(0.5, 0), DomainError);
}

TEST_CASE("reduced chain simulation") {
    SUBCASE("no mafia ends immediately") {
        auto out = simulate_reduced(50, 0, 7);
        CHECK_FALSE(out.mafia_won);
        CHECK(out.rounds == 0);
        CHECK(out.trajectory.size() == 1);
    }
    SUBCASE("deterministic in the seed") {
        auto a = simulate_reduced(200, 14, 123456);
        auto b = simulate_reduced(200, 14, 123456);
        REQUIRE(a.trajectory.size() == b.trajectory.size());
        for (size_t i = 0; i < a.trajectory.size(); ++i) {
            CHECK(a.trajectory[i].R == b.trajectory[i].R);
            CHECK(a.trajectory[i].M == b.trajectory[i].M);
        }
        CHECK(a.mafia_won == b.mafia_won);
    }
    SUBCASE("bookkeeping along the trajectory") {
        auto out = simulate_reduced(101, 9, 99);
        for (size_t i = 1; i < out.trajectory.size(); ++i) {
            CHECK(out.trajectory[i].R < out.trajectory[i - 1].R);
            CHECK(out.trajectory[i].M <= out.trajectory[i - 1].M);
        }
        const auto& last = out.trajectory.back();
        CHECK((last.M == 0 || 2 * last.M >= last.R));
        CHECK(out.mafia_won == (2 * last.M >= last.R && last.M > 0));
    }
    SUBCASE("generalized round patterns run") {
        auto out = simulate_reduced(500, 40, 5, Pattern{2, 3});
        CHECK(out.trajectory.size() >= 2);
        // two day steps then one night step per round: R drops by 3
        const auto& t1 = out.trajectory[1];
        CHECK(t1.R == 497);
        CHECK_THROWS_AS(simulate_reduced(10, 2, 1, Pattern{2, 2}), DomainError);
    }
    SUBCASE("win frequency matches the DP oracle") {
        const double w = win_probability_fp(100, 8);
        int64_t wins = 0;
        const int64_t n = 40000;
        for (int64_t i = 0; i < n; ++i)
            wins += simulate_reduced(100, 8, derive_seed(505, static_cast<uint64_t>(i)), {}, false)
                        .mafia_won
                        ? 1
                        : 0;
        const double phat = static_cast<double>(wins) / static_cast<double>(n);
        const double se = std::sqrt(w * (1 - w) / static_cast<double>(n));
        CHECK(std::abs(phat - w) <= 4 * se);
    }
    SUBCASE("stopped X averages to X0") {
        // Optional stopping at (100, 8): E[X_T] = X_0 = 0.56.
        const int64_t n = 100000;
        double sum = 0, sumsq = 0;
        for (int64_t i = 0; i < n; ++i) {
            auto out = simulate_reduced(100, 8, derive_seed(606, static_cast<uint64_t>(i)));
            const auto& last = out.trajectory.back();
            const double x = x_of(last.R, last.M);
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / static_cast<double>(n);
        const double var = sumsq / static_cast<double>(n) - mean * mean;
        const double se = std::sqrt(var / static_cast<double>(n));
        CHECK(std::abs(mean - 0.56) <= 4 * se);
    }
}
