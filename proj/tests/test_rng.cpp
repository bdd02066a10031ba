#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "mafia/rng.hpp"
#include "test_support.hpp"

using namespace mafia;

TEST_CASE("streams are reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
    Rng c(43);
    CHECK(a.next() != c.next());
}

TEST_CASE("derive_seed separates trials") {
    CHECK(derive_seed(7, 0) != derive_seed(7, 1));
    CHECK(derive_seed(7, 0) != derive_seed(8, 0));
    // fixed function: pin a value so accidental changes surface
    CHECK(derive_seed(0, 0) == mix64(mix64(1)));
}

TEST_CASE("bounded draws stay in range and look uniform") {
    Rng rng(2024);
    std::vector<int64_t> counts(13, 0);
    for (int i = 0; i < 130000; ++i) {
        uint64_t v = rng.below(13);
        REQUIRE(v < 13);
        ++counts[static_cast<size_t>(v)];
    }
    CHECK(testsupport::chi_square_uniform(counts) < testsupport::chi_square_crit99(12));
}

TEST_CASE("uniform01 lies in the unit interval") {
    Rng rng(5);
    double lo = 1, hi = 0;
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform01();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("decision budget interrupts runaway draws") {
    Rng rng(1);
    rng.set_budget(10);
    for (int i = 0; i < 10; ++i) rng.next();
    CHECK_THROWS_AS(rng.next(), LivenessError);
    rng.clear_budget();
    CHECK_NOTHROW(rng.next());
}
