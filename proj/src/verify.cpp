#include "drx/verify.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "drx/mgfdelta.hpp"
#include "drx/observables.hpp"
#include "drx/polydist.hpp"
#include "drx/report.hpp"
#include "drx/tree.hpp"

namespace drx {

const char* check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::not_applicable: return "n/a";
    }
    return "?";
}

namespace {

using Runner = std::function<CheckResult()>;

CheckResult make(const std::string& name, bool ok, const std::string& detail = "") {
    return CheckResult{name, ok ? CheckStatus::pass : CheckStatus::fail, detail};
}

CheckResult make_na(const std::string& name, const std::string& detail) {
    return CheckResult{name, CheckStatus::not_applicable, detail};
}

void run(std::vector<CheckResult>& out, const std::string& name, const Runner& fn) {
    try {
        out.push_back(fn());
    } catch (const std::exception& e) {
        out.push_back(CheckResult{name, CheckStatus::fail,
                                  std::string("exception: ") + e.what()});
    }
}

ExactDist law_half_half() {
    return ExactDist::from_rationals({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
}

// Random finite law with a given top value; masses are dyadic rationals.
ExactDist random_law(std::mt19937_64& rng, long top) {
    std::vector<Integer> num(static_cast<size_t>(top) + 1);
    Integer total = 0;
    for (auto& x : num) {
        x = static_cast<unsigned long>(rng() % 64);
        total += x;
    }
    if (total == 0) {
        num[0] = 1;
        total = 1;
    }
    return ExactDist(std::move(num), total);
}

std::vector<CheckResult> suite_model(const VerifyOptions& opt) {
    std::vector<CheckResult> out;

    run(out, "model.json_roundtrip", [&] {
        std::string text = model_to_json_text(opt.spec);
        ModelSpec back = model_from_json_text(text);
        bool ok = back.m == opt.spec.m && back.p_exact == opt.spec.p_exact &&
                  (!back.p_exact || back.p == opt.spec.p);
        return make("model.json_roundtrip", ok, text);
    });

    run(out, "model.critical_point_values", [&] {
        bool ok = critical_p_exact(2, StarLaw::dirac(2)) == Rational(1, 5);
        ok = ok && critical_p_exact(2, StarLaw::finite({{1, Rational(1, 2)},
                                                        {2, Rational(1, 2)}})) ==
                       Rational(1, 3);
        ok = ok && critical_p(2, StarLaw::power_geometric(1.0, 40)) == 0.0;
        return make("model.critical_point_values", ok);
    });

    run(out, "model.p_zero_subcritical", [&] {
        ModelSpec s = opt.spec;
        s.p = 0;
        s.p_exact = true;
        return make("model.p_zero_subcritical",
                    classify(s) == Criticality::subcritical);
    });

    run(out, "model.classification_brackets_critical_point", [&] {
        if (!opt.spec.star.exact())
            return make_na("model.classification_brackets_critical_point",
                           "needs an exact seed law");
        Rational pc = critical_p_exact(opt.spec.m, opt.spec.star);
        auto at = [&](const Rational& p) {
            ModelSpec s = opt.spec;
            s.p = p;
            s.p_exact = true;
            return classify(s);
        };
        bool ok = at(pc) == Criticality::critical;
        Rational eps(1, 100);
        if (pc - eps > 0) ok = ok && at(pc - eps) == Criticality::subcritical;
        if (pc + eps <= 1) ok = ok && at(pc + eps) == Criticality::supercritical;
        return make("model.classification_brackets_critical_point", ok,
                    "critical p = " + format_rational(pc));
    });

    run(out, "model.initial_mass_sums_to_one", [&] {
        bool ok = true;
        if (opt.spec.exact_capable())
            ok = initial_dist_exact(opt.spec).mass_sum_is_one();
        double s = initial_dist_float(opt.spec).sum();
        ok = ok && std::abs(s - 1.0) < 1e-12;
        return make("model.initial_mass_sums_to_one", ok);
    });

    run(out, "model.divergent_seed_supercritical_for_positive_p", [&] {
        ModelSpec s;
        s.m = 2;
        s.star = StarLaw::power_geometric(1.0, 40);
        s.p_exact = false;
        s.p_float = 0.01;
        bool ok = classify(s) == Criticality::supercritical;
        s.p_float = 0.0;
        ok = ok && classify(s) == Criticality::subcritical;
        return make("model.divergent_seed_supercritical_for_positive_p", ok);
    });

    return out;
}

std::vector<CheckResult> suite_engine(const VerifyOptions& opt) {
    std::vector<CheckResult> out;

    run(out, "engine.step_mixed_law", [&] {
        ExactDist d = dr_step(law_half_half(), 2);
        ExactDist want = ExactDist::from_rationals(
            {{0, Rational(1, 4)}, {1, Rational(1, 2)}, {3, Rational(1, 4)}});
        return make("engine.step_mixed_law", d.same_law(want));
    });

    run(out, "engine.pure_seed_orbit", [&] {
        // From a point mass at 2 the orbit visits 3, 5, 9, 17 with mean 2^n+1.
        auto orbit = iterate_exact(ExactDist::delta(2), 2, 4);
        bool ok = true;
        long want = 2;
        for (size_t n = 0; n < orbit.size(); ++n) {
            ok = ok && orbit[n].same_law(ExactDist::delta(want));
            ok = ok && orbit[n].mean() == Rational(want);
            want = 2 * want - 1;
        }
        return make("engine.pure_seed_orbit", ok);
    });

    run(out, "engine.float_convolution_power", [&] {
        FloatDist d(std::vector<double>{0.9, 0.0, 0.1});
        FloatDist c = convolve_power(d, 3);
        double want[7] = {0.729, 0, 0.243, 0, 0.027, 0, 0.001};
        bool ok = c.size() == 7;
        for (long k = 0; ok && k < 7; ++k)
            ok = std::abs(c.mass(k) - want[k]) < 1e-15;
        return make("engine.float_convolution_power", ok);
    });

    run(out, "engine.orbit_mass_sums_to_one", [&] {
        if (!opt.spec.exact_capable())
            return make_na("engine.orbit_mass_sums_to_one", "needs exact model");
        auto orbit = iterate_exact(initial_dist_exact(opt.spec), opt.spec.m, opt.N);
        bool ok = true;
        for (const auto& d : orbit) ok = ok && d.mass_sum_is_one();
        return make("engine.orbit_mass_sums_to_one", ok);
    });

    run(out, "engine.exact_float_agreement", [&] {
        if (!opt.spec.exact_capable())
            return make_na("engine.exact_float_agreement", "needs exact model");
        auto oe = iterate_exact(initial_dist_exact(opt.spec), opt.spec.m, opt.N);
        auto of = iterate_float(initial_dist_float(opt.spec), opt.spec.m, opt.N);
        double worst = 0;
        for (size_t n = 0; n < oe.size(); ++n)
            for (long k = 0; k <= oe[n].max_value(); ++k)
                worst = std::max(worst, std::abs(oe[n].mass(k).get_d() -
                                                 of[n].mass(k)));
        return make("engine.exact_float_agreement", worst < 1e-12,
                    "max deviation " + fmt_double(worst));
    });

    run(out, "engine.support_growth_bound", [&] {
        if (!opt.spec.exact_capable())
            return make_na("engine.support_growth_bound", "needs exact model");
        auto orbit = iterate_exact(initial_dist_exact(opt.spec), opt.spec.m, opt.N);
        bool ok = true;
        for (size_t n = 0; n + 1 < orbit.size(); ++n)
            ok = ok && orbit[n + 1].max_value() <=
                           opt.spec.m * orbit[n].max_value() - 1;
        return make("engine.support_growth_bound", ok);
    });

    run(out, "engine.reject_policy_throws", [&] {
        EngineOptions eo;
        eo.support_cap = 3;
        try {
            dr_step(dr_step(ExactDist::delta(2), 2, eo), 2, eo);
            return make("engine.reject_policy_throws", false, "no exception");
        } catch (const SupportCapError&) {
            return make("engine.reject_policy_throws", true);
        }
    });

    run(out, "engine.lump_policies_bracket_the_law", [&] {
        if (!opt.spec.exact_capable())
            return make_na("engine.lump_policies_bracket_the_law", "needs exact model");
        EngineOptions zero{TailPolicy::lump_at_zero, 3, false};
        EngineOptions cap{TailPolicy::lump_at_cap, 3, false};
        ExactDist x0 = initial_dist_exact(opt.spec);
        auto oz = iterate_exact(x0, opt.spec.m, 4, zero);
        auto oc = iterate_exact(x0, opt.spec.m, 4, cap);
        auto of = iterate_exact(x0, opt.spec.m, 4);
        bool ok = true;
        for (size_t n = 0; n < oz.size(); ++n) {
            ok = ok && oz[n].mass_sum_is_one() && oc[n].mass_sum_is_one();
            ok = ok && oz[n].mean() <= oc[n].mean();
            ok = ok && oc[n].mean() <= of[n].mean();
            ok = ok && oz[n].mass_at_zero() >= of[n].mass_at_zero();
        }
        return make("engine.lump_policies_bracket_the_law", ok);
    });

    run(out, "engine.sampling_deterministic_for_fixed_seed", [&] {
        auto a = sample_terminal(opt.spec, 3, 500, opt.seed);
        auto b = sample_terminal(opt.spec, 3, 500, opt.seed);
        auto c = sample_terminal(opt.spec, 3, 500, opt.seed + 1);
        return make("engine.sampling_deterministic_for_fixed_seed",
                    a == b && !(a == c));
    });

#ifdef DRX_HAVE_FFTW3
    run(out, "engine.fft_matches_direct", [&] {
        FloatDist d = initial_dist_float(opt.spec);
        auto of = iterate_float(d, opt.spec.m, 6);
        double worst = 0;
        for (const auto& x : of) {
            FftStats stats;
            FloatDist a = convolve_power(x, opt.spec.m);
            FloatDist b = convolve_power_fft(x, opt.spec.m, &stats);
            for (long k = 0; k <= a.max_value(); ++k)
                worst = std::max(worst, std::abs(a.mass(k) - b.mass(k)));
            worst = std::max(worst, stats.max_clamped);
        }
        return make("engine.fft_matches_direct", worst <= 1e-10,
                    "max deviation " + fmt_double(worst));
    });
#else
    out.push_back(make_na("engine.fft_matches_direct", "built without FFT"));
#endif

    return out;
}

std::vector<CheckResult> suite_polymode(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const StarLaw star = opt.spec.star.exact() ? opt.spec.star : StarLaw::dirac(2);
    const int m = opt.spec.m;

    run(out, "polymode.initial_matches_mixture", [&] {
        PolyDist d = PolyDist::initial(m, star);
        bool ok = true;
        for (int i = 0; i < 7; ++i) {
            Rational p = make_ratio(i, 7);
            ModelSpec s = opt.spec;
            s.star = star;
            s.p = p;
            s.p_exact = true;
            ok = ok && d.evaluate(p).same_law(initial_dist_exact(s));
        }
        return make("polymode.initial_matches_mixture", ok);
    });

    run(out, "polymode.evaluation_commutes_with_step", [&] {
        PolyDist d = PolyDist::initial(m, star);
        int depth = m == 2 ? 6 : 4;
        bool ok = true;
        for (int n = 0; n < depth && ok; ++n) {
            PolyDist next = d;
            next.step();
            for (int i = 0; i <= 20 && ok; ++i) {
                Rational p = make_ratio(i, 20);
                ExactDist a = next.evaluate(p);
                ExactDist b = dr_step(d.evaluate(p), m);
                ok = a.same_law(b);
            }
            d = next;
        }
        return make("polymode.evaluation_commutes_with_step", ok);
    });

    run(out, "polymode.masses_sum_to_one_symbolically", [&] {
        PolyDist d = PolyDist::initial(m, star);
        int depth = m == 2 ? 6 : 4;
        bool ok = d.mass_sum_is_one();
        for (int n = 0; n < depth; ++n) {
            d.step();
            ok = ok && d.mass_sum_is_one();
        }
        return make("polymode.masses_sum_to_one_symbolically", ok);
    });

    run(out, "polymode.power_basis_view_consistent", [&] {
        PolyDist d = PolyDist::initial(m, star);
        d.step();
        d.step();
        bool ok = true;
        for (int i = 0; i <= 5 && ok; ++i) {
            Rational p = make_ratio(i, 5);
            ExactDist e = d.evaluate(p);
            for (long k = 0; k <= d.max_value() && ok; ++k)
                ok = d.mass_poly(k).eval(p) == e.mass(k);
        }
        return make("polymode.power_basis_view_consistent", ok);
    });

    run(out, "polymode.derivative_reference_values", [&] {
        bool ok = zero_mass_derivative(2, StarLaw::dirac(2), 1, 1, Rational(1, 2)) ==
                  Rational(-1);
        ok = ok && free_energy_partial_derivative(2, StarLaw::dirac(2), 0, 0,
                                                  Rational(0)) == Rational(-1, 2);
        return make("polymode.derivative_reference_values", ok);
    });

    run(out, "polymode.derivative_matches_power_basis", [&] {
        PolyDist d = PolyDist::initial(m, star);
        d.step();
        d.step();
        Rational p(1, 5);
        bool ok = true;
        for (int k = 0; k <= 3 && ok; ++k)
            ok = d.mass_derivative_at(0, k, p) ==
                 d.mass_poly(0).derivative_at(k, p);
        return make("polymode.derivative_matches_power_basis", ok);
    });

    run(out, "polymode.budget_guard", [&] {
        PolyDist d = PolyDist::initial(m, star);
        try {
            for (int i = 0; i < 64; ++i) d.step(4);
            return make("polymode.budget_guard", false, "no exception");
        } catch (const BudgetError&) {
            return make("polymode.budget_guard", d.generation() == 4);
        }
    });

    return out;
}

std::vector<CheckResult> suite_observables(const VerifyOptions& opt) {
    std::vector<CheckResult> out;

    run(out, "observables.bracket_reference_values", [&] {
        ModelSpec s;
        s.m = 2;
        s.star = StarLaw::dirac(2);
        s.p = 1;
        s.p_exact = true;
        auto hi = free_energy_table_exact(s, 5);
        bool ok = hi.back().L == 1 && hi.back().U == Rational(33, 32);
        s.p = 0;
        auto lo = free_energy_table_exact(s, 3);
        ok = ok && lo.back().L == Rational(-1, 8) && lo.back().U == 0;
        return make("observables.bracket_reference_values", ok);
    });

    run(out, "observables.bracket_identities", [&] {
        if (!opt.spec.exact_capable())
            return make_na("observables.bracket_identities", "needs exact model");
        auto rows = free_energy_table_exact(opt.spec, opt.N);
        bool ok = true;
        Rational width(1, opt.spec.m - 1);
        for (size_t n = 0; n < rows.size(); ++n) {
            const auto& r = rows[n];
            Rational mpow = 1;
            for (int i = 0; i < r.N; ++i) mpow *= opt.spec.m;
            ok = ok && (r.U - r.L) * mpow == width;
            ok = ok && r.partial_sum == r.L;
            if (n > 0) {
                ok = ok && rows[n - 1].L <= r.L;
                ok = ok && r.U <= rows[n - 1].U;
            }
        }
        return make("observables.bracket_identities", ok);
    });

    run(out, "observables.one_step_mean_identity", [&] {
        if (!opt.spec.exact_capable())
            return make_na("observables.one_step_mean_identity", "needs exact model");
        auto orbit = iterate_exact(initial_dist_exact(opt.spec), opt.spec.m, opt.N);
        return make("observables.one_step_mean_identity",
                    mean_identity_holds(orbit, opt.spec.m));
    });

    run(out, "observables.gap_sign_preserved", [&] {
        if (!opt.spec.exact_capable())
            return make_na("observables.gap_sign_preserved", "needs exact model");
        auto orbit = iterate_exact(initial_dist_exact(opt.spec), opt.spec.m,
                                   std::min(opt.N, 6));
        return make("observables.gap_sign_preserved",
                    gap_sign_constant(gap_sequence_exact(orbit, opt.spec.m)));
    });

    run(out, "observables.moment_reference_values", [&] {
        ExactDist d = ExactDist::from_rationals(
            {{0, Rational(4, 5)}, {2, Rational(1, 5)}});
        bool ok = d.mean() == Rational(2, 5);
        ok = ok && d.moment_mgf(Rational(2)) == Rational(8, 5);
        ok = ok && d.moment_xmgf(Rational(2)) == Rational(8, 5);
        return make("observables.moment_reference_values", ok);
    });

    run(out, "observables.cdf_sandwich", [&] {
        if (!opt.spec.exact_capable())
            return make_na("observables.cdf_sandwich", "needs exact model");
        return make("observables.cdf_sandwich", sandwich_check_exact(opt.spec, 2));
    });

    run(out, "observables.concentration_min_depth", [&] {
        bool ok = hoeffding_min_n(2, StarLaw::dirac(2), 1) == 3;
        return make("observables.concentration_min_depth", ok);
    });

    run(out, "observables.concentration_bound_holds", [&] {
        if (!opt.spec.star.exact())
            return make_na("observables.concentration_bound_holds",
                           "needs exact seed law");
        ModelSpec s = opt.spec;
        Rational c1 = s.star.c1_exact();
        s.p = 1 - c1 / 4;
        s.p_exact = true;
        auto hc = hoeffding_tail_check(s, 6, 1, std::min<size_t>(opt.samples, 100000),
                                       opt.seed);
        if (!hc.applicable)
            return make_na("observables.concentration_bound_holds",
                           "preconditions not met");
        std::ostringstream d;
        d << "estimate " << hc.estimate << " vs bound " << hc.bound;
        return make("observables.concentration_bound_holds", hc.pass, d.str());
    });

    run(out, "observables.monte_carlo_total_variation", [&] {
        if (!opt.spec.exact_capable())
            return make_na("observables.monte_carlo_total_variation",
                           "needs exact model");
        double tv = tv_distance_mc_exact(opt.spec, 5,
                                         std::min<size_t>(opt.samples, 100000),
                                         opt.seed);
        return make("observables.monte_carlo_total_variation", tv <= 0.02,
                    "tv " + fmt_double(tv));
    });

    return out;
}

std::vector<CheckResult> suite_mgfdelta(const VerifyOptions& opt) {
    std::vector<CheckResult> out;

    run(out, "mgfdelta.truncation_clips_and_lumps", [&] {
        ExactDist d = ExactDist::from_rationals(
            {{0, Rational(1, 4)}, {1, Rational(1, 2)}, {3, Rational(1, 4)}});
        TruncatedLaw t = truncate_law(d, 1, 3);
        ExactDist want = ExactDist::from_rationals(
            {{0, Rational(1, 4)}, {1, Rational(1, 2)}, {2, Rational(1, 4)}});
        return make("mgfdelta.truncation_clips_and_lumps", t.law.same_law(want));
    });

    run(out, "mgfdelta.generating_function_reference", [&] {
        HDerivs h = h_and_derivatives(law_half_half(), Rational(2));
        bool ok = h.H == Rational(5, 2) && h.Hp == Rational(2) && h.Hpp == Rational(1);
        return make("mgfdelta.generating_function_reference", ok);
    });

    run(out, "mgfdelta.delta_reference_values", [&] {
        bool ok = delta_by_definition(ExactDist::delta(0), Rational(2), 2) == 1;
        ok = ok && delta_by_definition(ExactDist::delta(1), Rational(2), 2) == 0;
        ok = ok && delta_by_definition(ExactDist::delta(1), Rational(7, 4), 2) == 0;
        ok = ok && f_s_value(1, Rational(2), 2) == 0;
        return make("mgfdelta.delta_reference_values", ok);
    });

    run(out, "mgfdelta.delta_dual_formulas_agree", [&] {
        std::mt19937_64 rng(opt.seed);
        bool ok = true;
        for (int m : {2, 3})
            for (int i = 0; i < 20 && ok; ++i) {
                ExactDist d = random_law(rng, 2 + static_cast<long>(rng() % 5));
                ok = delta_by_definition(d, Rational(3, 2), m) ==
                     delta_by_expectation(d, Rational(3, 2), m);
                ok = ok && delta_poly_by_definition(d, m) ==
                               delta_poly_by_expectation(d, m);
            }
        return make("mgfdelta.delta_dual_formulas_agree", ok);
    });

    run(out, "mgfdelta.mgf_shift_identity", [&] {
        std::mt19937_64 rng(opt.seed + 1);
        bool ok = true;
        for (int m : {2, 3})
            for (int i = 0; i < 20 && ok; ++i)
                ok = mgf_shift_identity_gap(random_law(rng, 2 + static_cast<long>(rng() % 5)),
                                            m)
                         .is_zero();
        return make("mgfdelta.mgf_shift_identity", ok);
    });

    run(out, "mgfdelta.one_step_identity", [&] {
        bool ok = true;
        auto a = one_step_identity_exact(ExactDist::delta(0), Rational(3, 2), 2);
        ok = ok && a.equal && a.lhs == 1;
        auto b = one_step_identity_exact(ExactDist::delta(1), Rational(2), 2);
        ok = ok && b.equal && b.lhs == 0;
        std::mt19937_64 rng(opt.seed + 2);
        for (int m : {2, 3})
            for (int i = 0; i < 20 && ok; ++i) {
                ExactDist d = random_law(rng, 2 + static_cast<long>(rng() % 5));
                ok = one_step_identity_exact(d, Rational(3, 2), m).equal;
                ok = ok && one_step_identity_polynomial(d, m);
            }
        return make("mgfdelta.one_step_identity", ok);
    });

    run(out, "mgfdelta.minus_f_s_nondecreasing", [&] {
        bool ok = true;
        for (int m : {2, 3})
            for (int g = 1; g <= 10 && ok; ++g) {
                Rational s = 1 + make_ratio(g, 10) * (m - 1);   // 10 points in (1, m]
                Rational prev;
                for (long k = 0; k <= 50 && ok; ++k) {
                    Rational v = -f_s_value(k, s, m);
                    if (k > 0) ok = v >= prev;
                    prev = v;
                }
            }
        return make("mgfdelta.minus_f_s_nondecreasing", ok);
    });

    run(out, "mgfdelta.root_reference_values", [&] {
        SiRoot a = solve_si(law_half_half(), 2);
        bool ok = std::abs(a.value - 1.0) < 1e-9;
        SiRoot b = solve_si(ExactDist::from_rationals(
                                {{0, Rational(4, 5)}, {2, Rational(1, 5)}}),
                            2);
        ok = ok && std::abs(b.value - 2.0) < 1e-9;
        try {
            solve_si(ExactDist::delta(0), 2);
            ok = false;
        } catch (const DegenerateStructureError&) {
        }
        return make("mgfdelta.root_reference_values", ok);
    });

    run(out, "mgfdelta.root_function_nondecreasing", [&] {
        std::mt19937_64 rng(opt.seed + 3);
        bool ok = true;
        for (int i = 0; i < 10 && ok; ++i) {
            ExactDist d = random_law(rng, 3);
            for (int g = 1; g < 40 && ok; ++g) {
                Rational s1 = make_ratio(g, 10), s2 = make_ratio(g + 1, 10);
                ok = g_eval(d, s1, 2) <= g_eval(d, s2, 2);
            }
        }
        return make("mgfdelta.root_function_nondecreasing", ok);
    });

    run(out, "mgfdelta.depth_threshold_values", [&] {
        bool ok = n2_threshold(StarLaw::dirac(2)) == 1;
        ok = ok && n2_threshold(StarLaw::finite({{1, Rational(3, 4)},
                                                 {2, Rational(1, 4)}})) == 7;
        try {
            n2_threshold(StarLaw::dirac(1));
            ok = false;
        } catch (const DegenerateStructureError&) {
        }
        return make("mgfdelta.depth_threshold_values", ok);
    });

    run(out, "mgfdelta.mass_at_one_bounded_past_threshold", [&] {
        int n2 = n2_threshold(StarLaw::dirac(2));
        bool ok = true;
        for (int i = 1; i <= 20 && ok; ++i) {
            ModelSpec s;
            s.m = 2;
            s.star = StarLaw::dirac(2);
            s.p = make_ratio(i, 21);
            s.p_exact = true;
            ok = mass_at_one_bounded(s, n2, 10);
        }
        return make("mgfdelta.mass_at_one_bounded_past_threshold", ok);
    });

    run(out, "mgfdelta.near_critical_inequalities", [&] {
        if (!opt.spec.star.exact() || opt.spec.m != 2)
            return make_na("mgfdelta.near_critical_inequalities",
                           "stated for m=2 exact models");
        Rational pc = critical_p_exact(opt.spec.m, opt.spec.star);
        size_t applicable = 0, failures = 0;
        std::vector<Rational> probes{pc, Rational(pc - Rational(1, 50)),
                                     Rational(pc + Rational(1, 50))};
        for (const Rational& p : probes) {
            if (p < 0 || p > 1) continue;
            ModelSpec s = opt.spec;
            s.p = p;
            s.p_exact = true;
            for (int M : {6, 8})
                for (const auto& row : delta_sweep(s, M, 1.0 / 64)) {
                    if (!row.pre_ok) continue;
                    ++applicable;
                    if (!row.cs_ok || !row.lb_ok) ++failures;
                    if (row.rec_applicable && !row.rec_ok) ++failures;
                }
        }
        if (applicable == 0)
            return make_na("mgfdelta.near_critical_inequalities",
                           "no row met the preconditions");
        std::ostringstream d;
        d << applicable << " applicable rows, " << failures << " failures";
        return make("mgfdelta.near_critical_inequalities", failures == 0, d.str());
    });

    return out;
}

std::vector<CheckResult> suite_tree(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const StarLaw star =
        StarLaw::finite({{1, Rational(1, 2)}, {2, Rational(1, 2)}});

    run(out, "tree.evaluation_reference", [&] {
        LeafConfig cfg{{2, 1, 1, 1}, {1, 0, 0, 0}};
        bool ok = eval_root(2, 2, cfg, 0) == 0;
        LeafConfig c1{{2, 2}, {0, 0}};
        ok = ok && eval_root(2, 1, c1, 0b10u) == 1;
        LeafConfig c0{{2}, {0}};
        ok = ok && nabla_root_indicator(2, 0, c0, 1u, 0) == -1;
        return make("tree.evaluation_reference", ok);
    });

    run(out, "tree.forcing_monotone", [&] {
        std::mt19937_64 rng(opt.seed + 4);
        bool ok = true;
        for (int t = 0; t < 200 && ok; ++t) {
            LeafConfig cfg;
            for (int v = 0; v < 8; ++v) {
                cfg.xstar.push_back(1 + static_cast<long>(rng() % 3));
                cfg.u.push_back(static_cast<uint8_t>(rng() & 1));
            }
            uint32_t a = static_cast<uint32_t>(rng()) & 0xffu;
            long forced = eval_root(2, 3, cfg, a);
            long best = -1;
            uint32_t b = a;
            while (true) {
                best = std::max(best, eval_root(2, 3, cfg, b));
                if (b == 0) break;
                b = (b - 1) & a;
            }
            ok = best == forced;
        }
        return make("tree.forcing_monotone", ok);
    });

    run(out, "tree.cylinder_derivative_identity_small", [&] {
        bool ok = true;
        for (int n = 0; n <= 1 && ok; ++n)
            for (int k = 1; k <= 2 && ok; ++k)
                ok = cylinder_derivative_check(2, n, k, StarLaw::dirac(2),
                                               Rational(1, 5), n)
                         .all_equal;
        ok = ok && cylinder_derivative_check(2, 1, 1, star, Rational(1, 2), 2)
                       .all_equal;
        return make("tree.cylinder_derivative_identity_small", ok);
    });

    run(out, "tree.cone_structure_exhaustive", [&] {
        auto rep = cone_structure_check_exhaustive(2, 2, star);
        std::ostringstream d;
        d << rep.configs << " configs, " << rep.active << " active triples";
        return make("tree.cone_structure_exhaustive", rep.ok && rep.active > 0,
                    d.str());
    });

    run(out, "tree.cone_structure_randomized", [&] {
        auto rep = cone_structure_check_randomized(2, 3, star, 2000, opt.seed + 5);
        std::ostringstream d;
        d << rep.configs << " configs, " << rep.active << " active triples";
        return make("tree.cone_structure_randomized", rep.ok && rep.active > 0,
                    d.str());
    });

    run(out, "tree.spine_weight_closed_forms", [&] {
        bool ok = true;
        for (int n = 1; n <= 4 && ok; ++n) {
            ok = spine_weight_sum(2, n, 1) == 1;
            ok = ok && spine_weight_sum(2, n, 2) == make_ratio(n, 2);
            ok = ok && spine_weight_sum(2, n, 3) == make_ratio(n * (n - 1), 4);
        }
        return make("tree.spine_weight_closed_forms", ok);
    });

    run(out, "tree.spine_weight_bound", [&] {
        bool ok = true;
        for (int n = 1; n <= 4 && ok; ++n)
            for (int k = 1; k <= 3 && ok; ++k) ok = spine_weight_bound_ok(2, n, k);
        return make("tree.spine_weight_bound", ok);
    });

    run(out, "tree.zero_derivative_magnitude_bound", [&] {
        bool ok = true;
        for (int n = 1; n <= 2 && ok; ++n)
            for (int k = 1; k <= 2 && ok; ++k) {
                ok = zero_derivative_bound_check(2, n, k, StarLaw::dirac(2),
                                                 Rational(1, 5));
                ok = ok && zero_derivative_bound_check(2, n, k, star, Rational(2, 5));
            }
        return make("tree.zero_derivative_magnitude_bound", ok);
    });

    return out;
}

} // namespace

std::vector<std::string> verify_suites() {
    return {"model", "engine", "polymode", "observables", "mgfdelta", "tree", "all"};
}

std::vector<CheckResult> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    auto append = [&](std::vector<CheckResult> v) {
        for (auto& r : v) out.push_back(std::move(r));
    };
    bool all = suite == "all";
    bool known = all;
    if (all || suite == "model") { append(suite_model(opt)); known = true; }
    if (all || suite == "engine") { append(suite_engine(opt)); known = true; }
    if (all || suite == "polymode") { append(suite_polymode(opt)); known = true; }
    if (all || suite == "observables") { append(suite_observables(opt)); known = true; }
    if (all || suite == "mgfdelta") { append(suite_mgfdelta(opt)); known = true; }
    if (all || suite == "tree") { append(suite_tree(opt)); known = true; }
    if (!known) throw SpecError("unknown suite: " + suite);
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (r.status == CheckStatus::fail) return false;
    return true;
}

std::string results_to_json(const std::vector<CheckResult>& results) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& r : results) {
        nlohmann::json e;
        e["status"] = check_status_name(r.status);
        if (!r.detail.empty()) e["detail"] = r.detail;
        j[r.name] = e;
    }
    return j.dump(2);
}

std::vector<std::string> compare_golden(const std::vector<CheckResult>& results,
                                        const std::string& golden_json_text) {
    nlohmann::json g;
    try {
        g = nlohmann::json::parse(golden_json_text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("bad golden JSON: ") + e.what());
    }
    std::vector<std::string> mismatches;
    for (const auto& r : results) {
        if (!g.contains(r.name)) {
            mismatches.push_back(r.name + ": missing from golden file");
            continue;
        }
        std::string want = g.at(r.name).is_object()
                               ? g.at(r.name).value("status", "")
                               : g.at(r.name).get<std::string>();
        if (want != check_status_name(r.status))
            mismatches.push_back(r.name + ": got " +
                                 check_status_name(r.status) + ", golden says " + want);
    }
    for (const auto& [k, v] : g.items()) {
        (void)v;
        bool found = false;
        for (const auto& r : results) found = found || r.name == k;
        if (!found) mismatches.push_back(k + ": in golden file but not produced");
    }
    return mismatches;
}

} // namespace drx
