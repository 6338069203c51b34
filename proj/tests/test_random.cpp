#include "doctest.h"
#include "oracles.hpp"
#include "ultratree/random.hpp"
#include "ultratree/represent.hpp"
#include "ultratree/sdz.hpp"

using namespace ultratree;

TEST_CASE("forced shapes") {
    const auto one = random_ultrametric(1, 3, 9);
    CHECK(one.size() == 1);
    CHECK(one(0, 0) == 0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto two = random_ultrametric(2, 1, seed);
        CHECK(two.values().size() == 2);
        CHECK(two(0, 1) > 0);
    }
}

TEST_CASE("generated matrices are SDZ ultrametrics") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto kind = seed % 2 ? RadiusKind::irregular : RadiusKind::dyadic;
        const auto m = random_ultrametric(1 + seed % 40, 1 + seed % 7, seed, kind);
        CHECK(validate(m).is_ultrametric);
        CHECK(oracle::is_ultrametric(m));
        CHECK(check_sdz(m.values()));
        CHECK(m.values().size() <= 1 + 1 + seed % 7);
    }
}

TEST_CASE("same seed, same matrix") {
    CHECK(random_ultrametric(30, 5, 42) == random_ultrametric(30, 5, 42));
    CHECK_FALSE(random_ultrametric(30, 5, 42) == random_ultrametric(30, 5, 43));
}

TEST_CASE("seeded instance round-trips through the tree") {
    CHECK(verify_isometry(random_ultrametric(8, 3, 2024)).ok);
}

TEST_CASE("uniform_below stays in range") {
    std::mt19937_64 rng(1);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[uniform_below(rng, 7)];
    for (int h : hits) CHECK(h > 800);
    CHECK_THROWS(uniform_below(rng, 0));
}
