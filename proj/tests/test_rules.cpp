#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ca2d/rules.hpp"
#include "helpers.hpp"

using namespace ca2d;

TEST_CASE("neighbor weight table") {
    auto off = [](int bit) { return neighbor_offset(bit); };
    REQUIRE((off(1).dr == 0 && off(1).dc == 0));
    REQUIRE((off(2).dr == 0 && off(2).dc == 1));
    REQUIRE((off(4).dr == 1 && off(4).dc == 1));
    REQUIRE((off(8).dr == 1 && off(8).dc == 0));
    REQUIRE((off(16).dr == 1 && off(16).dc == -1));
    REQUIRE((off(32).dr == 0 && off(32).dc == -1));
    REQUIRE((off(64).dr == -1 && off(64).dc == -1));
    REQUIRE((off(128).dr == -1 && off(128).dc == 0));
    REQUIRE((off(256).dr == -1 && off(256).dc == 1));
    REQUIRE_THROWS_AS(neighbor_offset(3), InvalidRule);
    REQUIRE_THROWS_AS(neighbor_offset(512), InvalidRule);
}

TEST_CASE("fundamental matrices on a 2x3 grid") {
    // Rule 1 reads the cell itself: the identity on the 6-vector.
    REQUIRE(rule_matrix(1, 2, 3) == BitMatrix::identity(6));

    // Rule 2 reads the right neighbor; rightmost column hits the null
    // boundary, so rows 2 and 5 are empty.
    REQUIRE(helpers::to_dense(rule_matrix(2, 2, 3)) == helpers::Dense{
                {0, 1, 0, 0, 0, 0},
                {0, 0, 1, 0, 0, 0},
                {0, 0, 0, 0, 0, 0},
                {0, 0, 0, 0, 1, 0},
                {0, 0, 0, 0, 0, 1},
                {0, 0, 0, 0, 0, 0},
            });

    // Rule 8 reads the cell below; the bottom row is all boundary.
    REQUIRE(helpers::to_dense(rule_matrix(8, 2, 3)) == helpers::Dense{
                {0, 0, 0, 1, 0, 0},
                {0, 0, 0, 0, 1, 0},
                {0, 0, 0, 0, 0, 1},
                {0, 0, 0, 0, 0, 0},
                {0, 0, 0, 0, 0, 0},
                {0, 0, 0, 0, 0, 0},
            });
}

TEST_CASE("composite rules are XOR sums of fundamentals") {
    // 15 = 8 + 4 + 2 + 1 and 82 = 64 + 16 + 2.
    BitMatrix r15 = add(add(rule_matrix(1, 2, 3), rule_matrix(2, 2, 3)),
                        add(rule_matrix(4, 2, 3), rule_matrix(8, 2, 3)));
    REQUIRE(rule_matrix(15, 2, 3) == r15);
    BitMatrix r82 = add(add(rule_matrix(64, 3, 3), rule_matrix(16, 3, 3)),
                        rule_matrix(2, 3, 3));
    REQUIRE(rule_matrix(82, 3, 3) == r82);
    REQUIRE_THROWS_AS(rule_matrix(512, 2, 2), InvalidRule);
    REQUIRE_THROWS_AS(evolve_direct(BitMatrix(2, 2), 512), InvalidRule);
}

TEST_CASE("rule 15 worked example on ((1,0,0),(0,1,0))") {
    BitMatrix state = helpers::from_dense({{1, 0, 0}, {0, 1, 0}});
    helpers::Dense expect = {{0, 1, 0}, {1, 1, 0}};
    REQUIRE(helpers::to_dense(evolve_direct(state, 15)) == expect);
    BitVector evolved = multiply(rule_matrix(15, 2, 3), state.vectorize());
    REQUIRE(helpers::to_dense(BitMatrix::devectorize(evolved, 2, 3)) == expect);
}

TEST_CASE("matrix path equals direct evolution for all 512 rules") {
    std::mt19937_64 rng(31337);
    for (unsigned rule = 0; rule < 512; ++rule) {
        for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 3}, {4, 6}}) {
            BitMatrix mat = rule_matrix(rule, m, n);
            for (int trial = 0; trial < 3; ++trial) {
                BitMatrix state = helpers::random_matrix(m, n, rng);
                REQUIRE(multiply(mat, state.vectorize()) ==
                        evolve_direct(state, rule).vectorize());
            }
        }
    }
}

TEST_CASE("transpose identities between mirrored neighbors") {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 3}, {5, 5}}) {
        REQUIRE(rule_matrix(32, m, n) == transpose(rule_matrix(2, m, n)));
        REQUIRE(rule_matrix(64, m, n) == transpose(rule_matrix(4, m, n)));
        REQUIRE(rule_matrix(128, m, n) == transpose(rule_matrix(8, m, n)));
        REQUIRE(rule_matrix(256, m, n) == transpose(rule_matrix(16, m, n)));
    }
}

TEST_CASE("rule groups count set weights") {
    REQUIRE(rule_group(0) == 0);
    REQUIRE(rule_group(8) == 1);
    REQUIRE(rule_group(82) == 3);
    REQUIRE(rule_group(511) == 9);
    // 9-choose-k rules in each group.
    std::array<int, 10> expected = {1, 9, 36, 84, 126, 126, 84, 36, 9, 1};
    std::array<int, 10> got{};
    for (unsigned r = 0; r < 512; ++r) got[static_cast<std::size_t>(rule_group(r))]++;
    for (int k = 0; k <= 9; ++k) REQUIRE(got[static_cast<std::size_t>(k)] == expected[k]);
}

TEST_CASE("invertible-rule enumeration") {
    SECTION("1x1 grid: exactly the rules with the center weight") {
        std::vector<unsigned> rules = enumerate_invertible_rules(1, 1);
        REQUIRE(rules.size() == 256);
        for (unsigned r : rules) REQUIRE((r & 1) == 1);
    }
    SECTION("measured counts at small grids") {
        REQUIRE(enumerate_invertible_rules(2, 2).size() == 232);
        REQUIRE(enumerate_invertible_rules(2, 3).size() == 232);
        REQUIRE(enumerate_invertible_rules(3, 3).size() == 160);
    }
    SECTION("5x5 grid: 101 rules, all carrying the center weight") {
        std::vector<unsigned> rules = enumerate_invertible_rules(5, 5);
        REQUIRE(rules.size() == 101);
        REQUIRE(std::is_sorted(rules.begin(), rules.end()));
        for (unsigned r : rules) REQUIRE((r & 1) == 1);
        std::set<unsigned> set(rules.begin(), rules.end());
        REQUIRE(set.count(1) == 1);
        REQUIRE(set.count(15) == 1);
        REQUIRE(set.count(31) == 1);
        REQUIRE(set.count(493) == 1);
        REQUIRE(set.count(2) == 0);     // misses the center weight
        REQUIRE(set.count(277) == 0);   // carries it yet is singular
    }
    SECTION("every 5x5 entry inverts and the inverse undoes a step") {
        std::mt19937_64 rng(404);
        for (unsigned r : enumerate_invertible_rules(5, 5)) {
            BitMatrix mat = rule_matrix(r, 5, 5);
            BitMatrix inv = invert(mat);
            REQUIRE(multiply(mat, inv) == BitMatrix::identity(25));
            BitMatrix state = helpers::random_matrix(5, 5, rng);
            BitVector stepped = evolve_direct(state, r).vectorize();
            REQUIRE(multiply(inv, stepped) == state.vectorize());
        }
    }
}

TEST_CASE("hybrid matrices") {
    SECTION("worked 4x4 per-cell example is nonsingular with known inverse") {
        BitMatrix mixed = helpers::from_dense({
            {1, 0, 1, 1},
            {0, 1, 1, 0},
            {0, 0, 0, 1},
            {1, 1, 1, 0},
        });
        REQUIRE(is_nonsingular(mixed));
        REQUIRE(helpers::to_dense(invert(mixed)) == helpers::Dense{
                    {0, 1, 0, 1},
                    {1, 0, 1, 1},
                    {1, 1, 1, 1},
                    {0, 0, 1, 0},
                });
    }
    SECTION("generator is deterministic, seed-sensitive, always nonsingular") {
        REQUIRE(hybrid_rule_matrix(5, 5, 7) == hybrid_rule_matrix(5, 5, 7));
        REQUIRE(hybrid_rule_matrix(5, 5, 7) != hybrid_rule_matrix(5, 5, 8));
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            BitMatrix m = hybrid_rule_matrix(2, 3, seed);
            REQUIRE(m.rows() == 6);
            REQUIRE(is_nonsingular(m));
        }
    }
}
