// Acceptance gate: one [PASS]/[FAIL] line per criterion with its runtime,
// checked against the stated budgets; the process exits nonzero when any
// line fails. Two checks document measured counterexamples (see README)
// and are expected to fail; their output includes the observed numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "drx/engine.hpp"
#include "drx/mgfdelta.hpp"
#include "drx/model.hpp"
#include "drx/observables.hpp"
#include "drx/polydist.hpp"
#include "drx/report.hpp"
#include "drx/tree.hpp"

using namespace drx;

namespace {

Rational R(long n, long d) { return make_ratio(Integer(n), Integer(d)); }

ModelSpec make_spec(int m, const StarLaw& star, const Rational& p) {
    ModelSpec spec;
    spec.m = m;
    spec.star = star;
    spec.p = p;
    return spec;
}

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

struct Gate {
    int failed = 0;

    void run(const char* name, double budget_s,
             const std::function<bool(std::string&)>& body) {
        std::string detail;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
        std::printf("[%s] %-32s %7.2fs%s%s\n", ok ? "PASS" : "FAIL", name, dt,
                    detail.empty() ? "" : "  ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
        if (dt > budget_s) {
            std::printf("[FAIL] %-32s exceeded the %g s budget\n", name, budget_s);
            ++failed;
        }
    }
};

bool check_mean_identity(std::string& detail) {
    size_t orbits = 0;
    for (int m : {2, 3}) {
        for (int which : {0, 1}) {
            StarLaw star = which == 0 ? StarLaw::dirac(2)
                                      : StarLaw::finite({{1, R(1, 2)}, {2, R(1, 2)}});
            for (const auto& p : {R(1, 10), R(1, 5), R(1, 2)}) {
                auto spec = make_spec(m, star, p);
                auto orbit = iterate_exact(initial_dist_exact(spec), m, 7);
                if (!mean_identity_holds(orbit, m)) {
                    detail = "identity broke at m=" + std::to_string(m);
                    return false;
                }
                ++orbits;
            }
        }
    }
    detail = std::to_string(orbits) + " exact orbits to depth 7";
    return true;
}

bool check_bracket_structure(std::string& detail) {
    const int N = 12;
    for (const auto& p : {R(1, 10), R(1, 5), R(1, 2)}) {
        auto table = free_energy_table_exact(make_spec(2, StarLaw::dirac(2), p), N);
        Rational mN = 1;
        for (size_t n = 0; n < table.size(); ++n) {
            const auto& r = table[n];
            if ((r.U - r.L) * mN != 1) {
                detail = "bracket width off at N=" + std::to_string(n);
                return false;
            }
            if (r.partial_sum != r.L) {
                detail = "partial sum misses the lower bracket at N=" + std::to_string(n);
                return false;
            }
            if (n > 0 && (table[n - 1].L > r.L || r.U > table[n - 1].U)) {
                detail = "bracket monotonicity broke at N=" + std::to_string(n);
                return false;
            }
            mN *= 2;
        }
    }
    detail = "3 exact tables to depth 12";
    return true;
}

bool check_critical_point_signs(std::string& detail) {
    if (critical_p_exact(2, StarLaw::dirac(2)) != R(1, 5)) {
        detail = "closed form is not 1/5";
        return false;
    }
    int expected[3] = {1, 0, -1};
    std::vector<Rational> ps{R(1, 5) - R(1, 100), R(1, 5), R(1, 5) + R(1, 100)};
    for (size_t i = 0; i < ps.size(); ++i) {
        auto spec = make_spec(2, StarLaw::dirac(2), ps[i]);
        auto gaps = gap_sequence_exact(iterate_exact(initial_dist_exact(spec), 2, 4), 2);
        if (!gap_sign_constant(gaps)) {
            detail = "sign flipped along the orbit";
            return false;
        }
        for (const auto& g : gaps) {
            int s = g > 0 ? 1 : (g < 0 ? -1 : 0);
            if (s != expected[i]) {
                detail = "wrong sign at p = " + format_rational(ps[i]);
                return false;
            }
        }
    }
    detail = "pc = 1/5; gap signs (+, 0, -) stable to depth 4";
    return true;
}

bool check_regime_separation(std::string& detail) {
    auto low = free_energy_table_float(make_spec(2, StarLaw::dirac(2), R(3, 20)), 12);
    bool low_ok = low[12].mean < 1e-2 && low[12].U < 1e-2;

    auto high = free_energy_table_float(make_spec(2, StarLaw::dirac(2), R(1, 4)), 12);
    double e6 = high[6].mean, e12 = high[12].mean;
    bool high_ok = e12 > 10.0 * e6;

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "p=0.15: E(X_12)=%.3g, U_12=%.3g; p=0.25: E(X_6)=%.5g, "
                  "E(X_12)=%.5g, ratio %.4g (needs > 10)",
                  low[12].mean, low[12].U, e6, e12, e12 / e6);
    detail = buf;
    if (!high_ok) {
        detail += "; at p=0.25 the mean has grown only ~5x by n=12: the "
                  "supercritical blowup is not yet visible at this depth, so "
                  "the stated factor-10 separation does not hold";
    }
    return low_ok && high_ok;
}

bool check_symbolic_numeric_commutation(std::string& detail) {
    auto pd = PolyDist::initial(2, StarLaw::dirac(2));
    for (int g = 1; g <= 6; ++g) {
        pd.step();
        if (!pd.mass_sum_is_one()) {
            detail = "masses stopped summing to 1 at generation " + std::to_string(g);
            return false;
        }
        for (long j = 1; j <= 20; ++j) {
            Rational p = R(j, 20);
            auto spec = make_spec(2, StarLaw::dirac(2), p);
            auto numeric = iterate_exact(initial_dist_exact(spec), 2, g).back();
            if (!pd.evaluate(p).same_law(numeric)) {
                detail = "evaluation mismatch at generation " + std::to_string(g) +
                         ", p = " + format_rational(p);
                return false;
            }
        }
    }
    detail = "20 rational p values, 6 generations, symbolic mass sums";
    return true;
}

bool check_cylinder_derivative_identity(std::string& detail) {
    size_t targets = 0;
    for (int n : {0, 1, 2}) {
        for (int k : {1, 2}) {
            if (static_cast<size_t>(k) > cone_leaf_count(2, n)) continue;
            auto rep = cylinder_derivative_check(2, n, k, StarLaw::dirac(2), R(1, 5), 2);
            if (!rep.all_equal) {
                detail = "mismatches at n=" + std::to_string(n) +
                         ", k=" + std::to_string(k);
                return false;
            }
            targets += rep.targets;
        }
    }
    detail = std::to_string(targets) + " leaf target vectors matched exactly";
    return true;
}

bool check_cone_structure(std::string& detail) {
    auto star = StarLaw::finite({{1, R(1, 2)}, {2, R(1, 2)}});
    auto ex = cone_structure_check_exhaustive(2, 2, star);
    auto rnd = cone_structure_check_randomized(2, 3, star, 10000, 20250814);
    if (!ex.ok) {
        detail = "violations in the exhaustive pass";
        return false;
    }
    if (!rnd.ok) {
        detail = "violations in the randomized pass";
        return false;
    }
    detail = std::to_string(ex.active) + " exhaustive + " + std::to_string(rnd.active) +
             " randomized active triples, zero violations";
    return true;
}

bool check_spine_weight_sums(std::string& detail) {
    for (int n = 1; n <= 4; ++n) {
        if (spine_weight_sum(2, n, 1) != 1) {
            detail = "k=1 sum differs from 1 at n=" + std::to_string(n);
            return false;
        }
        if (spine_weight_sum(2, n, 2) != R(n, 2) ||
            spine_weight_sum(2, n, 3) != R(static_cast<long>(n) * (n - 1), 4)) {
            detail = "closed form mismatch at n=" + std::to_string(n);
            return false;
        }
        for (int k = 1; k <= 3; ++k)
            if (!spine_weight_bound_ok(2, n, k)) {
                detail = "bound broke at n=" + std::to_string(n) +
                         ", k=" + std::to_string(k);
                return false;
            }
    }
    detail = "exact sums and bound for k <= 3, n <= 4";
    return true;
}

bool check_delta_identities_and_sweep(std::string& detail) {
    std::mt19937_64 rng(20250814);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 2 + static_cast<int>(rng() % 2);
        auto d = random_law(rng, 4);
        if (delta_by_definition(d, R(3, 2), m) != delta_by_expectation(d, R(3, 2), m)) {
            detail = "dual formulas differ at s=3/2, trial " + std::to_string(trial);
            return false;
        }
        // Equality as polynomials in s certifies every real s, including
        // the irrational sweep point m^(1-1/64).
        if (!(delta_poly_by_definition(d, m) == delta_poly_by_expectation(d, m))) {
            detail = "dual polynomial certificate failed, trial " + std::to_string(trial);
            return false;
        }
        auto one = one_step_identity_exact(d, R(3, 2), m);
        if (!one.equal || !one_step_identity_polynomial(d, m)) {
            detail = "one-step identity failed, trial " + std::to_string(trial);
            return false;
        }
    }

    size_t applicable = 0, skipped = 0;
    for (const auto& p : {R(1, 5), R(9, 50), R(11, 50)}) {
        for (int M : {6, 8}) {
            auto rows = delta_sweep(make_spec(2, StarLaw::dirac(2), p), M, 1.0 / 64);
            for (const auto& r : rows) {
                if (!r.pre_ok) {
                    ++skipped;
                    continue;
                }
                ++applicable;
                if (!r.cs_ok || !r.lb_ok || !r.rec_ok) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf,
                                  "inequality failed at p=%s, M=%d, i=%d",
                                  format_rational(p).c_str(), M, r.i);
                    detail = buf;
                    return false;
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "20 random laws certified; sweep: %zu applicable rows pass, "
                  "%zu below the root threshold",
                  applicable, skipped);
    detail = buf;
    return applicable >= 20;
}

bool check_concentration_tail_bound(std::string& detail) {
    auto chk = hoeffding_tail_check(make_spec(2, StarLaw::dirac(2), R(3, 4)), 6, 1,
                                    100000, 20250814);
    char buf[160];
    std::snprintf(buf, sizeof buf, "estimate %.3g vs bound %.5g (+3 sigma %.3g)",
                  chk.estimate, chk.bound, 3 * chk.sigma);
    detail = buf;
    return chk.applicable && chk.pass;
}

bool check_decay_profile(std::string& detail) {
    EngineOptions opt;
    opt.support_cap = 1000000;
    auto rows = zero_mass_decay_float(make_spec(2, StarLaw::dirac(2), R(2, 5)), 14, opt);
    double lo = std::log(2.0) - 0.2, hi = std::log(2.0) + 0.2;
    char buf[200];
    for (int n = 10; n < 14; ++n) {
        double inc = rows[static_cast<size_t>(n) + 1].loglog -
                     rows[static_cast<size_t>(n)].loglog;
        if (!(inc > lo && inc < hi)) {
            std::snprintf(buf, sizeof buf, "increment %.4f at n=%d->%d outside log2 +- 0.2",
                          inc, n, n + 1);
            detail = buf;
            return false;
        }
    }
    std::snprintf(buf, sizeof buf, "log(-log P(X_n=0)) increments in [%.4f, %.4f] for n=10..14",
                  lo, hi);
    detail = buf;
    return true;
}

bool check_monte_carlo_tv(std::string& detail) {
    double tv = tv_distance_mc_exact(make_spec(2, StarLaw::dirac(2), R(1, 5)), 5,
                                     100000, 20250814);
    char buf[96];
    std::snprintf(buf, sizeof buf, "TV distance %.5f (tolerance 0.02)", tv);
    detail = buf;
    return tv <= 0.02;
}

bool check_per_term_derivative_decay(std::string& detail) {
    const Rational p0 = R(1, 5);
    auto pd = PolyDist::initial(2, StarLaw::dirac(2));
    // term(n, k) = |d^k/dp^k P(X_n=0)^2| / 2^(n+1) at p0, exactly.
    std::vector<std::vector<Rational>> term(4);
    for (int n = 1; n <= 8; ++n) {
        pd.step();
        if (n < 4) continue;
        Jet jz(3);
        Rational fact = 1;
        for (int t = 0; t <= 3; ++t) {
            if (t > 0) fact *= t;
            jz.a[static_cast<size_t>(t)] = pd.mass_derivative_at(0, t, p0) / fact;
        }
        auto power = jet_pow(jz, 2);
        Rational scale = R(1, 2);
        for (int i = 0; i < n; ++i) scale /= 2;
        for (int k = 0; k <= 3; ++k) {
            Rational v = jet_derivative(power, static_cast<size_t>(k)) * scale;
            term[static_cast<size_t>(k)].push_back(v < 0 ? Rational(-v) : v);
        }
    }

    std::printf("       per-term magnitudes |d^k (P(X_n=0)^2)| / 2^(n+1) at p0 = 1/5:\n");
    std::printf("       %-4s", "n");
    for (int k = 0; k <= 3; ++k) std::printf("  k=%-12d", k);
    std::printf("\n");
    for (size_t row = 0; row < term[0].size(); ++row) {
        std::printf("       %-4zu", row + 4);
        for (int k = 0; k <= 3; ++k)
            std::printf("  %-14.8g", to_double(term[static_cast<size_t>(k)][row]));
        std::printf("\n");
    }

    std::string bad;
    for (int k = 0; k <= 3; ++k) {
        const auto& seq = term[static_cast<size_t>(k)];
        for (size_t i = 0; i + 1 < seq.size(); ++i) {
            if (!(seq[i + 1] < seq[i])) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%sk=%d rises at n=%zu->%zu",
                              bad.empty() ? "" : "; ", k, i + 4, i + 5);
                bad += buf;
                break;
            }
        }
    }
    if (bad.empty()) {
        detail = "strict decrease for k <= 3 over n = 4..8";
        return true;
    }
    detail = "strict decrease holds for k in {0,1} only; " + bad +
             ": the higher-order terms are not yet monotone at these depths "
             "(the series argument controls their sum, not each term)";
    return false;
}

} // namespace

int main() {
    Gate gate;
    gate.run("mean-identity", 1, check_mean_identity);
    gate.run("bracket-structure", 5, check_bracket_structure);
    gate.run("critical-point-signs", 5, check_critical_point_signs);
    gate.run("regime-separation", 10, check_regime_separation);
    gate.run("symbolic-numeric-commutation", 30, check_symbolic_numeric_commutation);
    gate.run("cylinder-derivative-identity", 60, check_cylinder_derivative_identity);
    gate.run("cone-structure", 60, check_cone_structure);
    gate.run("spine-weight-sums", 10, check_spine_weight_sums);
    gate.run("delta-identities-and-sweep", 60, check_delta_identities_and_sweep);
    gate.run("concentration-tail-bound", 10, check_concentration_tail_bound);
    gate.run("decay-profile", 120, check_decay_profile);
    gate.run("monte-carlo-tv", 30, check_monte_carlo_tv);
    gate.run("per-term-derivative-decay", 300, check_per_term_derivative_decay);

    if (gate.failed == 0) {
        std::printf("all acceptance checks passed\n");
    } else {
        std::printf("%d acceptance check(s) failed\n", gate.failed);
    }
    return gate.failed == 0 ? 0 : 1;
}
