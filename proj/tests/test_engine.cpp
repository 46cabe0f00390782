#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "drx/engine.hpp"

using namespace drx;

namespace {

Rational R(long n, long d) { return make_ratio(Integer(n), Integer(d)); }

ExactDist random_law(std::mt19937_64& rng, long top) {
    std::vector<Integer> num(static_cast<size_t>(top) + 1);
    Integer total = 0;
    for (auto& x : num) {
        x = static_cast<long>(rng() % 8);
        total += x;
    }
    if (total == 0) {
        num[0] = 1;
        total = 1;
    }
    return ExactDist(std::move(num), total);
}

// Reference m-fold convolution by repeated schoolbook products, sharing no
// code with the packed big-integer path.
ExactDist conv_pow_naive(const ExactDist& d, int m) {
    std::vector<Integer> acc{Integer(1)};
    Integer den = 1;
    for (int r = 0; r < m; ++r) {
        std::vector<Integer> next(acc.size() + d.size() - 1, Integer(0));
        for (size_t i = 0; i < acc.size(); ++i)
            for (size_t j = 0; j < d.size(); ++j)
                next[i + j] += acc[i] * d.numerator(j);
        acc = std::move(next);
        den *= d.denominator();
    }
    return ExactDist(std::move(acc), den);
}

ExactDist dr_step_naive(const ExactDist& d, int m) {
    auto conv = conv_pow_naive(d, m);
    std::vector<Integer> shifted(std::max<size_t>(conv.size() - 1, 1), Integer(0));
    shifted[0] = conv.numerator(0);
    if (conv.size() > 1) shifted[0] += conv.numerator(1);
    for (size_t k = 2; k < conv.size(); ++k) shifted[k - 1] = conv.numerator(k);
    return ExactDist(std::move(shifted), conv.denominator());
}

ModelSpec spec_p(long num, long den) {
    ModelSpec spec;
    spec.p = R(num, den);
    return spec;
}

} // namespace

TEST_CASE("one step maps the half-half law to the expected triple") {
    auto d = ExactDist::from_rationals({{0, R(1, 2)}, {2, R(1, 2)}});
    auto y = dr_step(d, 2);
    CHECK(y.mass(0) == R(1, 4));
    CHECK(y.mass(1) == R(1, 2));
    CHECK(y.mass(2) == 0);
    CHECK(y.mass(3) == R(1, 4));
    CHECK(y.mass_sum_is_one());

    auto yf = dr_step(FloatDist::from_exact(d), 2);
    CHECK(yf.mass(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(yf.mass(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(yf.mass(3) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("packed convolution power agrees with schoolbook products") {
    std::mt19937_64 rng(20250814);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 2 + static_cast<int>(rng() % 3);
        auto d = random_law(rng, 1 + static_cast<long>(rng() % 5));
        CAPTURE(trial);
        CAPTURE(m);
        CHECK(convolve_power(d, m).same_law(conv_pow_naive(d, m)));
        CHECK(dr_step(d, m).same_law(dr_step_naive(d, m)));
    }
}

TEST_CASE("packed convolution survives huge numerators") {
    Integer big = (Integer(1) << 100) + 7;
    std::vector<Integer> num{Integer(1), big, Integer(3)};
    Integer den = Integer(4) + big;
    ExactDist d(std::move(num), den);
    CHECK(convolve_power(d, 3).same_law(conv_pow_naive(d, 3)));
}

TEST_CASE("float convolution power of a two-atom law") {
    FloatDist d(std::vector<double>{0.9, 0.0, 0.1});
    auto c = convolve_power(d, 3);
    CHECK(c.mass(0) == doctest::Approx(0.729).epsilon(1e-15));
    CHECK(c.mass(2) == doctest::Approx(0.243).epsilon(1e-15));
    CHECK(c.mass(4) == doctest::Approx(0.027).epsilon(1e-15));
    CHECK(c.mass(6) == doctest::Approx(0.001).epsilon(1e-15));
    CHECK(c.mass(1) == 0.0);
}

TEST_CASE("pure seed orbit doubles and re-centers") {
    // From a point mass at 2 with m = 2 the orbit stays a point mass at
    // 2^n + 1 from the first step on.
    auto orbit = iterate_exact(ExactDist::delta(2), 2, 4);
    std::vector<long> expected{2, 3, 5, 9, 17};
    REQUIRE(orbit.size() == 5);
    for (size_t n = 0; n < orbit.size(); ++n) {
        CHECK(orbit[n].mean() == expected[n]);
        CHECK(orbit[n].mass(expected[n]) == 1);
    }
}

TEST_CASE("mixed-seed orbit stays a probability law") {
    auto spec = spec_p(1, 5);
    auto orbit = iterate_exact(initial_dist_exact(spec), 2, 6);
    for (const auto& d : orbit) CHECK(d.mass_sum_is_one());

    // First generation by hand: the pair sums 0,2,4 shift to 0,1,3.
    CHECK(orbit[1].mass(0) == R(16, 25));
    CHECK(orbit[1].mass(1) == R(8, 25));
    CHECK(orbit[1].mass(3) == R(1, 25));

    // Frozen second generation.
    CHECK(orbit[2].mass(0) == R(512, 625));
    CHECK(orbit[2].mass(1) == R(64, 625));
    CHECK(orbit[2].mass(2) == R(32, 625));
    CHECK(orbit[2].mass(3) == R(16, 625));
    CHECK(orbit[2].mass(5) == R(1, 625));
}

TEST_CASE("exact and float orbits agree to near machine precision") {
    auto spec = spec_p(1, 5);
    auto oe = iterate_exact(initial_dist_exact(spec), 2, 6);
    auto of = iterate_float(initial_dist_float(spec), 2, 6);
    REQUIRE(oe.size() == of.size());
    for (size_t n = 0; n < oe.size(); ++n) {
        long top = std::max(oe[n].max_value(), of[n].max_value());
        for (long k = 0; k <= top; ++k)
            CHECK(std::abs(to_double(oe[n].mass(k)) - of[n].mass(k)) <= 1e-12);
    }
}

TEST_CASE("support grows by at most a factor m minus the shift") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int m = 2 + static_cast<int>(rng() % 2);
        auto d = random_law(rng, 3);
        d.trim();
        auto y = dr_step(d, m);
        y.trim();
        CHECK(y.max_value() <= std::max<long>(m * d.max_value() - 1, 0));
    }
}

TEST_CASE("reject policy throws once the cap is exceeded") {
    EngineOptions opt;
    opt.support_cap = 3;
    auto d1 = dr_step(ExactDist::delta(2), 2, opt);   // point mass at 3, still fits
    CHECK(d1.mass(3) == 1);
    CHECK_THROWS_AS(dr_step(d1, 2, opt), SupportCapError);
}

TEST_CASE("lump policies keep mass and bracket the true law") {
    auto spec = spec_p(1, 2);
    EngineOptions cap_opt;
    cap_opt.support_cap = 3;

    EngineOptions zero_opt = cap_opt;
    zero_opt.tail_policy = TailPolicy::lump_at_zero;
    cap_opt.tail_policy = TailPolicy::lump_at_cap;

    auto true_orbit = iterate_exact(initial_dist_exact(spec), 2, 5);
    auto cap_orbit = iterate_exact(initial_dist_exact(spec), 2, 5, cap_opt);
    auto zero_orbit = iterate_exact(initial_dist_exact(spec), 2, 5, zero_opt);
    for (size_t n = 0; n < true_orbit.size(); ++n) {
        CHECK(cap_orbit[n].mass_sum_is_one());
        CHECK(zero_orbit[n].mass_sum_is_one());
        // Folding down pushes mass toward zero, folding up cannot exceed
        // the true mean since the cap clamps every excursion.
        CHECK(zero_orbit[n].mean() <= cap_orbit[n].mean());
        CHECK(cap_orbit[n].mean() <= true_orbit[n].mean());
        CHECK(zero_orbit[n].mass_at_zero() >= true_orbit[n].mass_at_zero());
    }
    CHECK(cap_orbit[5].tail_mass() > 0);
}

TEST_CASE("float tail folding mirrors the exact one") {
    auto spec = spec_p(1, 2);
    EngineOptions opt;
    opt.support_cap = 3;
    opt.tail_policy = TailPolicy::lump_at_cap;
    auto oe = iterate_exact(initial_dist_exact(spec), 2, 4, opt);
    auto of = iterate_float(initial_dist_float(spec), 2, 4, opt);
    for (size_t n = 0; n < oe.size(); ++n) {
        for (long k = 0; k <= 3; ++k)
            CHECK(std::abs(to_double(oe[n].mass(k)) - of[n].mass(k)) <= 1e-12);
        CHECK(std::abs(to_double(oe[n].tail_mass()) - of[n].tail()) <= 1e-12);
    }
}

TEST_CASE("a lumped tail is materialized before convolving") {
    ExactDist d({Integer(2), Integer(1)}, Integer(4));
    d.set_tail(Integer(1), TailPolicy::lump_at_cap);
    auto proxy = ExactDist::from_rationals({{0, R(1, 2)}, {1, R(1, 2)}});
    CHECK(convolve_power(d, 2).same_law(convolve_power(proxy, 2)));
}

#ifdef DRX_HAVE_FFTW3
TEST_CASE("fft convolution matches the direct reference") {
    std::mt19937_64 rng(99);
    std::vector<double> masses(60);
    double total = 0;
    for (auto& x : masses) {
        x = static_cast<double>(rng() % 1000);
        total += x;
    }
    for (auto& x : masses) x /= total;
    FloatDist d(std::move(masses));

    EngineOptions fft_opt;
    fft_opt.use_fft = true;
    for (int m : {2, 3}) {
        auto direct = convolve_power(d, m);
        auto fast = convolve_power(d, m, fft_opt);
        REQUIRE(fast.size() == direct.size());
        for (long k = 0; k <= direct.max_value(); ++k)
            CHECK(std::abs(fast.mass(k) - direct.mass(k)) <= 1e-10);
    }

    FftStats stats;
    auto raw = convolve_power_fft(d, 2, &stats);
    CHECK(stats.max_clamped <= 1e-12);
    CHECK(raw.mass(0) == doctest::Approx(d.mass(0) * d.mass(0)).epsilon(1e-9));
}

TEST_CASE("small supports take the direct path even with fft on") {
    FloatDist d(std::vector<double>{0.9, 0.0, 0.1});
    EngineOptions fft_opt;
    fft_opt.use_fft = true;
    auto a = convolve_power(d, 3);
    auto b = convolve_power(d, 3, fft_opt);
    REQUIRE(a.size() == b.size());
    for (long k = 0; k <= a.max_value(); ++k)
        CHECK(a.mass(k) == b.mass(k));
}
#endif

TEST_CASE("sampling is deterministic per seed and lives on the exact support") {
    auto spec = spec_p(1, 5);
    auto a = sample_terminal(spec, 3, 400, 12345);
    auto b = sample_terminal(spec, 3, 400, 12345);
    auto c = sample_terminal(spec, 3, 400, 54321);
    CHECK(a == b);
    CHECK(a != c);

    auto orbit = iterate_exact(initial_dist_exact(spec), 2, 3);
    const auto& law = orbit.back();
    for (long v : a) {
        REQUIRE(v >= 0);
        REQUIRE(v <= law.max_value());
        CHECK(law.mass(v) > 0);
    }
}

TEST_CASE("degenerate mixing probabilities sample degenerate sums") {
    auto ones = sample_initial_sums(spec_p(1, 1), 3, 50, 9);
    for (long v : ones) CHECK(v == 6);
    auto zeros = sample_initial_sums(spec_p(0, 1), 3, 50, 9);
    for (long v : zeros) CHECK(v == 0);
}

TEST_CASE("sampled frequencies approach the exact law") {
    auto spec = spec_p(1, 5);
    const size_t n_samples = 20000;
    auto draws = sample_terminal(spec, 2, n_samples, 777);
    auto law = iterate_exact(initial_dist_exact(spec), 2, 2).back();
    std::vector<size_t> counts(static_cast<size_t>(law.max_value()) + 1, 0);
    for (long v : draws) ++counts[static_cast<size_t>(v)];
    for (long k = 0; k <= law.max_value(); ++k) {
        double expect = to_double(law.mass(k));
        double got = static_cast<double>(counts[static_cast<size_t>(k)]) /
                     static_cast<double>(n_samples);
        // Three-sigma band plus slack for the smallest cells.
        double sigma = std::sqrt(expect * (1 - expect) / static_cast<double>(n_samples));
        CHECK(std::abs(got - expect) <= 3 * sigma + 1e-3);
    }
}
