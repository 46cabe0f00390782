#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drx/model.hpp"
#include "drx/observables.hpp"

using namespace drx;

namespace {

Rational R(long n, long d) { return make_ratio(Integer(n), Integer(d)); }

ModelSpec spec_p(long num, long den) {
    ModelSpec spec;
    spec.p = R(num, den);
    return spec;
}

} // namespace

TEST_CASE("bracket rows at the degenerate mixing probabilities") {
    // p = 1: the orbit is the point mass at 2^N + 1, so L_N = 1 exactly
    // and U_N = (2^N + 1) / 2^N.
    auto table = free_energy_table_exact(spec_p(1, 1), 5);
    REQUIRE(table.size() == 6);
    CHECK(table[5].L == 1);
    CHECK(table[5].U == R(33, 32));
    CHECK(table[5].mean == 33);
    CHECK(table[5].mass0 == 0);

    // p = 0: everything sits at zero, L_N = -1 / 2^N, U_N = 0.
    auto zero = free_energy_table_exact(spec_p(0, 1), 3);
    CHECK(zero[3].L == -R(1, 8));
    CHECK(zero[3].U == 0);
    CHECK(zero[3].mass0 == 1);
}

TEST_CASE("frozen bracket row at the critical point") {
    auto table = free_energy_table_exact(spec_p(1, 5), 4);
    const auto& r = table[4];
    CHECK(r.L == -R(303548919, 6103515625));
    CHECK(r.U == R(1246732921, 97656250000));
    CHECK(r.partial_sum == r.L);
    CHECK(r.mean == R(1246732921, 6103515625));
    CHECK(r.mass0 == R(26306674688, 30517578125));
}

TEST_CASE("bracket identities hold along every table") {
    struct Case {
        ModelSpec spec;
        int N;
    };
    ModelSpec m3;
    m3.m = 3;
    m3.star = StarLaw::finite({{1, R(1, 2)}, {2, R(1, 2)}});
    m3.p = R(1, 4);
    std::vector<Case> cases{{spec_p(1, 5), 8}, {spec_p(2, 5), 8}, {m3, 5}};

    for (const auto& c : cases) {
        auto table = free_energy_table_exact(c.spec, c.N);
        REQUIRE(table.size() == static_cast<size_t>(c.N) + 1);
        Rational mN = 1;
        for (size_t n = 0; n < table.size(); ++n) {
            const auto& r = table[n];
            CHECK(r.N == static_cast<int>(n));
            // The bracket width is pinned: (U - L) m^N (m-1) = 1.
            CHECK((r.U - r.L) * mN * (c.spec.m - 1) == 1);
            CHECK(r.partial_sum == r.L);
            if (n > 0) {
                CHECK(table[n - 1].L <= r.L);
                CHECK(r.U <= table[n - 1].U);
            }
            mN *= c.spec.m;
        }
    }
}

TEST_CASE("float bracket table tracks the exact one") {
    auto spec = spec_p(1, 5);
    auto te = free_energy_table_exact(spec, 8);
    auto tf = free_energy_table_float(spec, 8);
    REQUIRE(te.size() == tf.size());
    for (size_t n = 0; n < te.size(); ++n) {
        CHECK(std::abs(to_double(te[n].L) - tf[n].L) <= 1e-12);
        CHECK(std::abs(to_double(te[n].U) - tf[n].U) <= 1e-12);
        CHECK(std::abs(to_double(te[n].mean) - tf[n].mean) <= 1e-12);
        CHECK(std::abs(to_double(te[n].mass0) - tf[n].mass0) <= 1e-12);
    }
}

TEST_CASE("one-step mean identity along orbits") {
    for (auto& spec : {spec_p(1, 10), spec_p(1, 5), spec_p(1, 2)}) {
        auto orbit = iterate_exact(initial_dist_exact(spec), 2, 6);
        CHECK(mean_identity_holds(orbit, 2));
    }
    // By hand at p = 1/5: E(X_1) = 2 E(X_0) - 1 + P(X_0=0)^2 = 11/25.
    auto orbit = iterate_exact(initial_dist_exact(spec_p(1, 5)), 2, 1);
    CHECK(orbit[1].mean() == R(11, 25));

    ModelSpec m3;
    m3.m = 3;
    m3.star = StarLaw::finite({{2, R(1, 3)}, {3, R(2, 3)}});
    m3.p = R(1, 7);
    CHECK(mean_identity_holds(iterate_exact(initial_dist_exact(m3), 3, 4), 3));
}

TEST_CASE("criticality gap keeps its sign under the recursion") {
    auto at = [](const Rational& p) {
        ModelSpec spec;
        spec.p = p;
        return gap_sequence_exact(iterate_exact(initial_dist_exact(spec), 2, 4), 2);
    };

    auto crit = at(R(1, 5));
    for (const auto& g : crit) CHECK(g == 0);
    CHECK(gap_sign_constant(crit));

    auto sub = at(R(1, 5) - R(1, 100));
    for (const auto& g : sub) CHECK(g > 0);
    CHECK(gap_sign_constant(sub));

    auto super = at(R(1, 5) + R(1, 100));
    for (const auto& g : super) CHECK(g < 0);
    CHECK(gap_sign_constant(super));

    CHECK_FALSE(gap_sign_constant({Rational(1), Rational(-1)}));
    CHECK_FALSE(gap_sign_constant({Rational(0), Rational(1)}));
}

TEST_CASE("cdf sandwich between the seed sum and its shift") {
    CHECK(sandwich_check_exact(spec_p(1, 5), 0));
    CHECK(sandwich_check_exact(spec_p(1, 5), 1));
    CHECK(sandwich_check_exact(spec_p(1, 5), 2));
    CHECK(sandwich_check_exact(spec_p(9, 10), 2));

    ModelSpec m3;
    m3.m = 3;
    m3.star = StarLaw::finite({{1, R(1, 2)}, {2, R(1, 2)}});
    m3.p = R(1, 6);
    CHECK(sandwich_check_exact(m3, 1));
}

TEST_CASE("minimum depth for the concentration setup") {
    CHECK(hoeffding_min_n(2, StarLaw::dirac(2), 1) == 3);
    CHECK(hoeffding_min_n(2, StarLaw::dirac(2), 2) == 4);
    CHECK(hoeffding_min_n(2, StarLaw::finite({{1, R(3, 4)}, {2, R(1, 4)}}), 1) == 5);
    CHECK_THROWS_AS(hoeffding_min_n(2, StarLaw::dirac(1), 1), DegenerateStructureError);
    CHECK_THROWS_AS(hoeffding_min_n(2, StarLaw::dirac(2), 0), SpecError);
}

TEST_CASE("concentration bound holds at high mixing probability") {
    auto spec = spec_p(3, 4);          // exactly 1 - c1/4 for the default seed
    auto chk = hoeffding_tail_check(spec, 6, 1, 100000, 20250814);
    CHECK(chk.applicable);
    CHECK(chk.n_min == 3);
    CHECK(chk.p_required == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(chk.bound == doctest::Approx(std::exp(-63.0 / 32.0)).epsilon(1e-12));
    CHECK(chk.samples == 100000);
    CHECK(chk.pass);
    CHECK(chk.estimate <= chk.bound + 3 * chk.sigma);
    // The event is far out in the tail here, so the estimate is tiny.
    CHECK(chk.estimate < 0.01);
}

TEST_CASE("concentration check refuses out-of-scope parameters") {
    CHECK_FALSE(hoeffding_tail_check(spec_p(3, 4), 2, 1, 1000, 1).applicable);
    CHECK_FALSE(hoeffding_tail_check(spec_p(1, 2), 6, 1, 1000, 1).applicable);
}

TEST_CASE("zero-mass decay accelerates supercritically") {
    auto rows = zero_mass_decay_float(spec_p(2, 5), 10);
    REQUIRE(rows.size() == 11);
    for (const auto& r : rows) {
        if (r.mass0 > 0 && r.mass0 < 1)
            CHECK(r.loglog == doctest::Approx(std::log(-std::log(r.mass0))).epsilon(1e-12));
    }
    // Doubly exponential decay looks affine with slope log 2 here.
    for (int n = 8; n < 10; ++n) {
        double inc = rows[static_cast<size_t>(n) + 1].loglog - rows[static_cast<size_t>(n)].loglog;
        CHECK(inc > std::log(2.0) - 0.2);
        CHECK(inc < std::log(2.0) + 0.2);
    }
}

TEST_CASE("monte carlo law is close to the exact one in total variation") {
    double tv = tv_distance_mc_exact(spec_p(1, 5), 5, 100000, 20250814);
    CHECK(tv >= 0);
    CHECK(tv <= 0.02);
    CHECK(tv == tv_distance_mc_exact(spec_p(1, 5), 5, 100000, 20250814));
    double tv2 = tv_distance_mc_exact(spec_p(1, 5), 5, 100000, 99);
    CHECK(tv2 <= 0.02);
    CHECK(tv != tv2);
}
