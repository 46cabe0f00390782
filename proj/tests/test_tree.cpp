#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "drx/tree.hpp"

using namespace drx;

namespace {

Rational R(long n, long d) { return make_ratio(Integer(n), Integer(d)); }

LeafConfig random_config(std::mt19937_64& rng, size_t leaves, long xstar_top) {
    LeafConfig cfg;
    cfg.xstar.resize(leaves);
    cfg.u.resize(leaves);
    for (size_t v = 0; v < leaves; ++v) {
        cfg.xstar[v] = 1 + static_cast<long>(rng() % static_cast<uint64_t>(xstar_top));
        cfg.u[v] = static_cast<uint8_t>(rng() % 2);
    }
    return cfg;
}

// Mixed difference computed right from its definition, as a signed sum of
// root-indicator evaluations over all sub-subsets.
long nabla_reference(int m, int n, const LeafConfig& cfg, uint32_t a_mask, long target) {
    long acc = 0;
    int bits = std::popcount(a_mask);
    uint32_t b = a_mask;
    while (true) {
        int sign = ((bits - std::popcount(b)) % 2 == 0) ? 1 : -1;
        acc += sign * (eval_root(m, n, cfg, b) == target ? 1 : 0);
        if (b == 0) break;
        b = (b - 1) & a_mask;
    }
    return acc;
}

} // namespace

TEST_CASE("leaf counts and width guard") {
    CHECK(cone_leaf_count(2, 0) == 1);
    CHECK(cone_leaf_count(2, 3) == 8);
    CHECK(cone_leaf_count(3, 2) == 9);
    CHECK(cone_leaf_count(2, 5) == 32);
    CHECK_THROWS_AS(cone_leaf_count(2, 6), SpecError);
    CHECK_THROWS_AS(cone_leaf_count(1, 2), SpecError);
    CHECK_THROWS_AS(cone_leaf_count(2, -1), SpecError);
}

TEST_CASE("cone evaluation applies marks, forcing, and the shifted sum") {
    LeafConfig cfg;
    cfg.xstar = {2, 1, 1, 1};
    cfg.u = {1, 0, 0, 0};
    auto levels = eval_cone(2, 2, cfg, 0);
    REQUIRE(levels.size() == 3);
    CHECK(levels[0] == std::vector<long>{2, 0, 0, 0});
    CHECK(levels[1] == std::vector<long>{1, 0});
    CHECK(levels[2] == std::vector<long>{0});
    CHECK(eval_root(2, 2, cfg, 0) == 0);

    LeafConfig pair;
    pair.xstar = {2, 2};
    pair.u = {0, 0};
    CHECK(eval_root(2, 1, pair, 0) == 0);
    // Forcing a leaf overrides its mark with the seed value.
    CHECK(eval_root(2, 1, pair, 0b01) == 1);
    CHECK(eval_root(2, 1, pair, 0b11) == 3);

    LeafConfig bad;
    bad.xstar = {2};
    bad.u = {1, 1};
    CHECK_THROWS_AS(eval_root(2, 1, bad, 0), SpecError);
}

TEST_CASE("single-leaf mixed difference") {
    LeafConfig cfg;
    cfg.xstar = {2};
    cfg.u = {0};
    CHECK(nabla_root_indicator(2, 0, cfg, 0b1, 0) == -1);
    CHECK(nabla_root_indicator(2, 0, cfg, 0b1, 2) == 1);
    CHECK(nabla_root_indicator(2, 0, cfg, 0b1, 1) == 0);
    // The empty set gives the plain indicator.
    CHECK(nabla_root_indicator(2, 0, cfg, 0, 0) == 1);
}

TEST_CASE("mixed differences match the signed subset sum") {
    std::mt19937_64 rng(20250814);
    for (int trial = 0; trial < 40; ++trial) {
        auto cfg = random_config(rng, cone_leaf_count(2, 2), 2);
        for (uint32_t a = 0; a < 16; ++a)
            for (long target = 0; target <= 2; ++target)
                CHECK(nabla_root_indicator(2, 2, cfg, a, target) ==
                      nabla_reference(2, 2, cfg, a, target));
    }
    for (int trial = 0; trial < 10; ++trial) {
        auto cfg = random_config(rng, cone_leaf_count(3, 1), 3);
        for (uint32_t a = 0; a < 8; ++a)
            CHECK(nabla_root_indicator(3, 1, cfg, a, 1) ==
                  nabla_reference(3, 1, cfg, a, 1));
    }
}

TEST_CASE("forcing more leaves never lowers the root") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        auto cfg = random_config(rng, cone_leaf_count(2, 2), 3);
        uint32_t a = static_cast<uint32_t>(rng() % 16);
        long forced = eval_root(2, 2, cfg, a);
        long sup = 0;
        uint32_t b = a;
        while (true) {
            sup = std::max(sup, eval_root(2, 2, cfg, b));
            if (b == 0) break;
            b = (b - 1) & a;
        }
        CHECK(sup == forced);
    }
}

TEST_CASE("ancestor and frontier sets of small cones") {
    auto one = cone_sets(2, 2, 0b0001);
    CHECK(one.O == std::vector<std::pair<int, long>>{{1, 0}, {2, 0}});
    CHECK(one.L == std::vector<std::pair<int, long>>{{0, 1}, {1, 1}});

    auto diag = cone_sets(2, 2, 0b1001);
    CHECK(diag.O == std::vector<std::pair<int, long>>{{1, 0}, {1, 1}, {2, 0}});
    CHECK(diag.L == std::vector<std::pair<int, long>>{{0, 1}, {0, 2}});

    // Both leaves under one parent: the sibling frontier is empty at level 0.
    auto sib = cone_sets(2, 2, 0b0011);
    CHECK(sib.O == std::vector<std::pair<int, long>>{{1, 0}, {2, 0}});
    CHECK(sib.L == std::vector<std::pair<int, long>>{{1, 1}});

    CHECK(cone_sets(2, 2, 0).O.empty());
    CHECK(cone_sets(2, 2, 0).L.empty());
}

TEST_CASE("cylinder derivative identity on small cones") {
    auto star2 = StarLaw::dirac(2);
    for (int n : {0, 1}) {
        long leaves = static_cast<long>(cone_leaf_count(2, n));
        for (int k = 1; k <= 2; ++k) {
            if (k > leaves) continue;
            auto rep = cylinder_derivative_check(2, n, k, star2, R(1, 5), n);
            CAPTURE(n);
            CAPTURE(k);
            CHECK(rep.targets > 0);
            CHECK(rep.mismatches == 0);
            CHECK(rep.all_equal);
        }
    }

    auto mixed = StarLaw::finite({{1, R(1, 2)}, {2, R(1, 2)}});
    auto rep = cylinder_derivative_check(2, 1, 1, mixed, R(1, 2), 2);
    CHECK(rep.all_equal);

    auto deeper = cylinder_derivative_check(2, 2, 1, star2, R(1, 5), 1);
    CHECK(deeper.all_equal);

    auto at_zero = cylinder_derivative_check(2, 1, 1, star2, Rational(0), 1);
    CHECK(at_zero.all_equal);

    CHECK_THROWS_AS(cylinder_derivative_check(2, 1, 1, star2, Rational(1), 1), SpecError);
    CHECK_THROWS_AS(cylinder_derivative_check(2, 1, -1, star2, R(1, 5), 1), SpecError);
}

TEST_CASE("structure checks find no violations exhaustively") {
    auto rep = cone_structure_check_exhaustive(2, 2, StarLaw::finite({{1, R(1, 2)}, {2, R(1, 2)}}));
    CHECK(rep.ok);
    CHECK(rep.configs == 256);
    CHECK(rep.active == 1611);
    CHECK(rep.value_bound_violations == 0);
    CHECK(rep.forced_floor_violations == 0);
    CHECK(rep.child_split_violations == 0);
    CHECK(rep.frontier_sum_violations == 0);
    CHECK(rep.frontier_size_violations == 0);

    CHECK(cone_structure_check_exhaustive(2, 1, StarLaw::dirac(2)).ok);
}

TEST_CASE("randomized structure checks are deterministic per seed") {
    auto a = cone_structure_check_randomized(2, 3, StarLaw::dirac(2), 1500, 42);
    auto b = cone_structure_check_randomized(2, 3, StarLaw::dirac(2), 1500, 42);
    CHECK(a.ok);
    CHECK(a.configs == 1500);
    CHECK(a.active == b.active);
    CHECK(a.active > 0);
}

TEST_CASE("spine weights collapse to closed forms") {
    for (int n = 1; n <= 4; ++n) CHECK(spine_weight_sum(2, n, 1) == 1);
    for (int n = 1; n <= 3; ++n) CHECK(spine_weight_sum(3, n, 1) == 1);

    for (int n = 1; n <= 4; ++n) {
        CHECK(spine_weight_sum(2, n, 2) == R(n, 2));
        CHECK(spine_weight_sum(2, n, 3) == R(static_cast<long>(n) * (n - 1), 4));
    }

    // More leaves than |A|: the sum over an empty family is zero.
    CHECK(spine_weight_sum(2, 1, 3) == 0);
}

TEST_CASE("spine weights respect the coarse bound") {
    for (int m : {2, 3})
        for (int n = 1; n <= 3; ++n)
            for (int k = 1; k <= 3; ++k) {
                if (static_cast<size_t>(k) > cone_leaf_count(m, n)) continue;
                CHECK(spine_weight_bound_ok(m, n, k));
            }
    CHECK(spine_weight_bound_ok(2, 4, 2));
}

TEST_CASE("derivative magnitude bound for the zero mass") {
    auto star2 = StarLaw::dirac(2);
    auto mixed = StarLaw::finite({{1, R(1, 2)}, {2, R(1, 2)}});
    for (int n = 0; n <= 2; ++n)
        for (int k = 1; k <= 2; ++k) {
            if (static_cast<size_t>(k) > cone_leaf_count(2, n)) continue;
            CHECK(zero_derivative_bound_check(2, n, k, star2, R(1, 5)));
            CHECK(zero_derivative_bound_check(2, n, k, mixed, R(1, 3)));
        }
}
