#include "drx/observables.hpp"

#include <cmath>

namespace drx {

std::vector<BracketRow> free_energy_table_exact(const ModelSpec& spec, int N,
                                                const EngineOptions& opt) {
    if (N < 0) throw SpecError("N must be nonnegative");
    auto orbit = iterate_exact(initial_dist_exact(spec), spec.m, N, opt);
    std::vector<BracketRow> rows(static_cast<size_t>(N) + 1);
    Rational inv_m1(1, spec.m - 1);
    Rational mpow = 1;                     // m^N for the current row
    Rational partial = orbit[0].mean() - inv_m1;
    for (int n = 0; n <= N; ++n) {
        BracketRow& r = rows[static_cast<size_t>(n)];
        r.N = n;
        r.mean = orbit[static_cast<size_t>(n)].mean();
        r.mass0 = orbit[static_cast<size_t>(n)].mass_at_zero();
        r.L = (r.mean - inv_m1) / mpow;
        r.U = r.mean / mpow;
        r.partial_sum = partial;           // sum through generation n-1
        // Extend the series by the generation-n term for the next row.
        Rational q = r.mass0;
        Rational qm = 1;
        for (int i = 0; i < spec.m; ++i) qm *= q;
        mpow *= spec.m;
        partial += qm / mpow;
    }
    return rows;
}

std::vector<BracketRowF> free_energy_table_float(const ModelSpec& spec, int N,
                                                 const EngineOptions& opt) {
    if (N < 0) throw SpecError("N must be nonnegative");
    auto orbit = iterate_float(initial_dist_float(spec), spec.m, N, opt);
    std::vector<BracketRowF> rows(static_cast<size_t>(N) + 1);
    double inv_m1 = 1.0 / (spec.m - 1);
    double mpow = 1.0;
    double partial = orbit[0].mean() - inv_m1;
    for (int n = 0; n <= N; ++n) {
        BracketRowF& r = rows[static_cast<size_t>(n)];
        r.N = n;
        r.mean = orbit[static_cast<size_t>(n)].mean();
        r.mass0 = orbit[static_cast<size_t>(n)].mass_at_zero();
        r.L = (r.mean - inv_m1) / mpow;
        r.U = r.mean / mpow;
        r.partial_sum = partial;
        mpow *= spec.m;
        partial += std::pow(r.mass0, spec.m) / mpow;
    }
    return rows;
}

bool mean_identity_holds(const std::vector<ExactDist>& orbit, int m) {
    for (size_t n = 0; n + 1 < orbit.size(); ++n) {
        Rational q = orbit[n].mass_at_zero();
        Rational qm = 1;
        for (int i = 0; i < m; ++i) qm *= q;
        if (orbit[n + 1].mean() != Rational(m) * orbit[n].mean() - 1 + qm)
            return false;
    }
    return true;
}

std::vector<Rational> gap_sequence_exact(const std::vector<ExactDist>& orbit, int m) {
    std::vector<Rational> gaps;
    gaps.reserve(orbit.size());
    for (const auto& d : orbit) gaps.push_back(criticality_gap_exact(d, m));
    return gaps;
}

bool gap_sign_constant(const std::vector<Rational>& gaps) {
    if (gaps.empty()) return true;
    auto sgn = [](const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); };
    int s0 = sgn(gaps.front());
    for (const auto& g : gaps)
        if (sgn(g) != s0) return false;
    return true;
}

bool sandwich_check_exact(const ModelSpec& spec, int n, const EngineOptions& opt) {
    if (n < 0) throw SpecError("n must be nonnegative");
    ExactDist x0 = initial_dist_exact(spec);
    auto orbit = iterate_exact(x0, spec.m, n, opt);
    const ExactDist& xn = orbit.back();

    unsigned long leaves = 1;
    for (int i = 0; i < n; ++i) leaves *= static_cast<unsigned long>(spec.m);
    std::vector<Integer> base(x0.size());
    for (size_t k = 0; k < x0.size(); ++k) base[k] = x0.numerator(k);
    auto sum_num = detail::conv_pow_packed(base, static_cast<unsigned>(leaves));
    Integer sum_den;
    mpz_pow_ui(sum_den.get_mpz_t(), x0.denominator().get_mpz_t(), leaves);

    // P(S <= t) <= P(X_n <= t) <= P((S - m^n)^+ <= t) for all t up to the
    // top of the supports; compare exactly via cross-multiplication.
    long top = std::max<long>(static_cast<long>(sum_num.size()) - 1, xn.max_value());
    Integer cdf_sum = 0;
    Rational cdf_x = 0;
    Integer shift_total = 0;                      // P(S <= t + m^n)
    for (long t = 0; t <= static_cast<long>(leaves); ++t)
        if (t < static_cast<long>(sum_num.size()))
            shift_total += sum_num[static_cast<size_t>(t)];
    for (long t = 0; t <= top; ++t) {
        if (t < static_cast<long>(sum_num.size()))
            cdf_sum += sum_num[static_cast<size_t>(t)];
        long shifted = t + static_cast<long>(leaves);
        if (t > 0 && shifted < static_cast<long>(sum_num.size()))
            shift_total += sum_num[static_cast<size_t>(shifted)];
        cdf_x += xn.mass(t);
        Rational lower = make_ratio(cdf_sum, sum_den);
        Rational upper = make_ratio(shift_total, sum_den);
        if (!(lower <= cdf_x && cdf_x <= upper)) return false;
    }
    return true;
}

int hoeffding_min_n(int m, const StarLaw& star, long k) {
    if (k < 1) throw SpecError("k must be at least 1");
    Rational c1 = star.c1_exact();
    if (c1 <= 0)
        throw DegenerateStructureError("concentration setup needs c1 > 0");
    // Largest t with m^t <= k (4 + c1)/c1, then n_min = t + 1. In integers:
    // m^t * num <= k (4 den + num) for c1 = num/den.
    Integer rhs = Integer(k) * (4 * c1.get_den() + c1.get_num());
    int t = 0;
    Integer mt = 1;
    while (true) {
        Integer next = mt * m;
        if (next * c1.get_num() <= rhs) {
            mt = next;
            ++t;
        } else {
            break;
        }
    }
    return t + 1;
}

HoeffdingCheck hoeffding_tail_check(const ModelSpec& spec, int n, long k,
                                    size_t samples, uint64_t seed) {
    HoeffdingCheck res;
    res.samples = samples;
    res.seed = seed;
    if (k < 1 || n < 1) throw SpecError("need k >= 1 and n >= 1");
    double c1 = spec.star.exact() ? spec.star.c1_exact().get_d()
                                  : spec.star.c1_float(spec.m);
    if (c1 <= 0)
        throw DegenerateStructureError("concentration setup needs c1 > 0");
    res.p_required = 1.0 - c1 / 4.0;
    res.n_min = spec.star.exact() ? hoeffding_min_n(spec.m, spec.star, k) : 0;

    double mn = std::pow(static_cast<double>(spec.m), n);
    bool p_ok = spec.p_value() >= res.p_required - 1e-15;
    bool n_ok = spec.star.exact() ? (n >= res.n_min)
                                  : (mn > static_cast<double>(k) * (4.0 + c1) / c1);
    res.applicable = p_ok && n_ok && mn > static_cast<double>(k);
    if (!res.applicable) return res;

    size_t terms = static_cast<size_t>(mn) - static_cast<size_t>(k);
    res.bound = std::exp(-c1 * c1 * static_cast<double>(terms) / 32.0);
    auto sums = sample_initial_sums(spec, terms, samples, seed);
    size_t hits = 0;
    for (long s : sums)
        if (s <= static_cast<long>(mn)) ++hits;
    res.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    res.sigma = std::sqrt(std::max(res.estimate * (1.0 - res.estimate), 1e-12) /
                          static_cast<double>(samples));
    res.pass = res.estimate <= res.bound + 3.0 * res.sigma;
    return res;
}

std::vector<DecayRow> zero_mass_decay_float(const ModelSpec& spec, int n_max,
                                            const EngineOptions& opt) {
    if (n_max < 0) throw SpecError("n must be nonnegative");
    auto orbit = iterate_float(initial_dist_float(spec), spec.m, n_max, opt);
    std::vector<DecayRow> rows(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        DecayRow& r = rows[static_cast<size_t>(n)];
        r.n = n;
        r.mass0 = orbit[static_cast<size_t>(n)].mass_at_zero();
        r.loglog = (r.mass0 > 0.0 && r.mass0 < 1.0)
                       ? std::log(-std::log(r.mass0))
                       : std::nan("");
    }
    return rows;
}

double tv_distance_mc_exact(const ModelSpec& spec, int n, size_t samples,
                            uint64_t seed, const EngineOptions& opt) {
    if (samples == 0) throw SpecError("need at least one sample");
    auto orbit = iterate_exact(initial_dist_exact(spec), spec.m, n, opt);
    const ExactDist& xn = orbit.back();
    auto draws = sample_terminal(spec, n, samples, seed);
    long top = xn.max_value();
    std::vector<size_t> counts(static_cast<size_t>(top) + 1, 0);
    size_t beyond = 0;
    for (long d : draws) {
        if (d >= 0 && d <= top)
            ++counts[static_cast<size_t>(d)];
        else
            ++beyond;
    }
    double tv = static_cast<double>(beyond) / static_cast<double>(samples);
    for (long kv = 0; kv <= top; ++kv) {
        double emp = static_cast<double>(counts[static_cast<size_t>(kv)]) /
                     static_cast<double>(samples);
        tv += std::abs(emp - xn.mass(kv).get_d());
    }
    return tv / 2.0;
}

} // namespace drx
