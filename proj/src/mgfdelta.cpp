#include "drx/mgfdelta.hpp"

#include <cmath>

namespace drx {

namespace {

std::vector<Integer> folded_numerators(const ExactDist& d) {
    std::vector<Integer> v(d.size());
    for (size_t k = 0; k < d.size(); ++k) v[k] = d.numerator(k);
    if (d.tail_numerator() != 0) {
        if (d.tail_policy() == TailPolicy::lump_at_zero)
            v.front() += d.tail_numerator();
        else
            v.back() += d.tail_numerator();
    }
    return v;
}

std::vector<double> masses_double(const ExactDist& d) {
    auto num = folded_numerators(d);
    std::vector<double> v(num.size());
    for (size_t k = 0; k < num.size(); ++k)
        v[k] = to_double(make_ratio(num[k], d.denominator()));
    return v;
}

} // namespace

TruncatedLaw truncate_law(const ExactDist& d, int i, int M) {
    if (i < 0 || M < i) throw SpecError("truncation needs 0 <= i <= M");
    size_t cap = static_cast<size_t>(M - i);
    auto num = folded_numerators(d);
    std::vector<Integer> out(std::min(num.size(), cap + 1), Integer(0));
    Integer spill = 0;
    for (size_t k = 0; k < num.size(); ++k) {
        if (k < cap)
            out[k] = num[k];
        else
            spill += num[k];
    }
    if (cap < num.size())
        out[cap] = spill;
    ExactDist law(std::move(out), d.denominator());
    law.trim();
    return TruncatedLaw{std::move(law), i, M};
}

FloatDist truncate_law_float(const FloatDist& d, int i, int M) {
    if (i < 0 || M < i) throw SpecError("truncation needs 0 <= i <= M");
    size_t cap = static_cast<size_t>(M - i);
    std::vector<double> v = d.raw();
    if (d.tail() != 0.0) {
        if (d.tail_policy() == TailPolicy::lump_at_zero)
            v.front() += d.tail();
        else
            v.back() += d.tail();
    }
    if (v.size() > cap + 1) {
        double spill = 0;
        for (size_t k = cap; k < v.size(); ++k) spill += v[k];
        v.resize(cap + 1);
        v[cap] = spill;
    }
    return FloatDist(std::move(v));
}

HDerivs h_and_derivatives(const ExactDist& d, const Rational& s) {
    auto num = folded_numerators(d);
    HDerivs h{Rational(0), Rational(0), Rational(0)};
    // Horner from the top for all three series at once.
    for (size_t idx = num.size(); idx > 0; --idx) {
        long k = static_cast<long>(idx) - 1;
        Rational mk = make_ratio(num[idx - 1], d.denominator());
        h.Hpp = h.Hpp * s + mk * Rational(Integer(k) * Integer(k - 1));
        h.Hp = h.Hp * s + mk * Rational(Integer(k));
        h.H = h.H * s + mk;
    }
    // Hpp accumulated sum k(k-1) m_k s^k; shift powers down by two (and Hp by one).
    if (s == 0) {
        // Derivatives at zero come straight from the low-order masses.
        h.Hp = d.size() > 1 ? make_ratio(num[1], d.denominator()) : Rational(0);
        h.Hpp = d.size() > 2 ? 2 * make_ratio(num[2], d.denominator()) : Rational(0);
        h.H = make_ratio(num[0], d.denominator());
        return h;
    }
    h.Hp /= s;
    h.Hpp /= s * s;
    for (auto* q : {&h.H, &h.Hp, &h.Hpp}) q->canonicalize();
    return h;
}

Rational f_s_value(long k, const Rational& s, int m) {
    Rational sk = 1;
    for (long i = 0; i < k; ++i) sk *= s;
    Rational bracket = 1 - (s - 1) * Rational(Integer(k)) -
                       Rational(m - 1, m) * (m - s) * Rational(Integer(k) * Integer(k + 1));
    return bracket * sk;
}

double f_s_value(long k, double s, int m) {
    double bracket = 1.0 - (s - 1.0) * static_cast<double>(k) -
                     (static_cast<double>(m - 1) / m) * (m - s) *
                         static_cast<double>(k) * static_cast<double>(k + 1);
    return bracket * std::pow(s, static_cast<double>(k));
}

Rational delta_by_definition(const ExactDist& d, const Rational& s, int m) {
    HDerivs h = h_and_derivatives(d, s);
    return (h.H - s * (s - 1) * h.Hp) -
           Rational(m - 1, m) * (m - s) * (2 * s * h.Hp + s * s * h.Hpp);
}

Rational delta_by_expectation(const ExactDist& d, const Rational& s, int m) {
    auto num = folded_numerators(d);
    Rational acc = 0;
    for (size_t k = 0; k < num.size(); ++k) {
        if (num[k] == 0) continue;
        acc += Rational(num[k], d.denominator()) *
               f_s_value(static_cast<long>(k), s, m);
    }
    acc.canonicalize();
    return acc;
}

namespace {

RationalPoly h_poly(const ExactDist& d) {
    auto num = folded_numerators(d);
    std::vector<Rational> c(num.size());
    for (size_t k = 0; k < num.size(); ++k) {
        c[k] = Rational(num[k], d.denominator());
        c[k].canonicalize();
    }
    return RationalPoly(std::move(c));
}

RationalPoly f_s_poly(long k, int m) {
    // [1 + k - (m-1)k(k+1)] + [-k + ((m-1)/m) k(k+1)] s, shifted by s^k.
    Rational c0 = Rational(Integer(1 + k)) -
                  Rational(Integer(m - 1) * Integer(k) * Integer(k + 1));
    Rational c1 = Rational(Integer(-k)) +
                  Rational(m - 1, m) * Rational(Integer(k) * Integer(k + 1));
    std::vector<Rational> c(static_cast<size_t>(k) + 2, Rational(0));
    c[static_cast<size_t>(k)] = c0;
    c[static_cast<size_t>(k) + 1] = c1;
    return RationalPoly(std::move(c));
}

const RationalPoly kVarS = RationalPoly::variable();

EngineOptions wide_options() {
    EngineOptions opt;
    opt.support_cap = static_cast<size_t>(-1) / 2;
    return opt;
}

} // namespace

RationalPoly delta_poly_by_definition(const ExactDist& d, int m) {
    RationalPoly H = h_poly(d);
    RationalPoly Hp = H.derivative();
    RationalPoly Hpp = Hp.derivative();
    RationalPoly s = kVarS;
    RationalPoly m_minus_s = RationalPoly::constant(Rational(m)) - s;
    RationalPoly first = H - s * (s - RationalPoly::constant(1)) * Hp;
    RationalPoly second =
        (m_minus_s * (s * Hp * Rational(2) + s * s * Hpp)) * Rational(m - 1, m);
    return first - second;
}

RationalPoly delta_poly_by_expectation(const ExactDist& d, int m) {
    auto num = folded_numerators(d);
    RationalPoly acc;
    for (size_t k = 0; k < num.size(); ++k) {
        if (num[k] == 0) continue;
        Rational mk = make_ratio(num[k], d.denominator());
        acc += f_s_poly(static_cast<long>(k), m) * mk;
    }
    return acc;
}

RationalPoly mgf_shift_identity_gap(const ExactDist& d, int m) {
    ExactDist y = dr_step(d, m, wide_options());
    RationalPoly lhs = kVarS * h_poly(y);
    RationalPoly H = h_poly(d);
    Rational h0 = d.mass_at_zero();
    Rational h0m = 1;
    for (int i = 0; i < m; ++i) h0m *= h0;
    RationalPoly rhs = H.pow(static_cast<unsigned>(m)) +
                       (kVarS - RationalPoly::constant(1)) * h0m;
    return lhs - rhs;
}

OneStepIdentity one_step_identity_exact(const ExactDist& d, const Rational& s, int m) {
    if (s == 0) throw SpecError("s must be nonzero");
    ExactDist y = dr_step(d, m, wide_options());
    OneStepIdentity out;
    out.lhs = delta_by_expectation(y, s, m);

    HDerivs h = h_and_derivatives(d, s);
    Rational delta = (h.H - s * (s - 1) * h.Hp) -
                     Rational(m - 1, m) * (m - s) * (2 * s * h.Hp + s * s * h.Hpp);
    Rational hm2 = 1;
    for (int i = 0; i < m - 2; ++i) hm2 *= h.H;
    Rational edge = Rational(m - 1) * s * h.Hp - h.H;
    out.rhs = Rational(m) / s * delta * hm2 * h.H -
              (Rational(m) - s) / s * edge * edge * hm2;
    out.equal = out.lhs == out.rhs;
    return out;
}

bool one_step_identity_polynomial(const ExactDist& d, int m) {
    ExactDist y = dr_step(d, m, wide_options());
    RationalPoly lhs = kVarS * delta_poly_by_expectation(y, m);

    RationalPoly H = h_poly(d);
    RationalPoly Hp = H.derivative();
    RationalPoly delta = delta_poly_by_definition(d, m);
    RationalPoly hm2 = H.pow(static_cast<unsigned>(m - 2));
    RationalPoly edge = kVarS * Hp * Rational(m - 1) - H;
    RationalPoly rhs = delta * hm2 * H * Rational(m) -
                       (RationalPoly::constant(Rational(m)) - kVarS) * edge * edge * hm2;
    return lhs == rhs;
}

Rational g_eval(const ExactDist& d, const Rational& s, int m) {
    auto num = folded_numerators(d);
    Rational acc = 0;
    for (size_t idx = num.size(); idx > 0; --idx) {
        long k = static_cast<long>(idx) - 1;
        acc = acc * s + Rational(num[idx - 1], d.denominator()) *
                            Rational(Integer((m - 1) * k - 1));
    }
    acc.canonicalize();
    return acc;
}

SiRoot solve_si(const ExactDist& d, int m) {
    const double lo0 = 1e-6, hi0 = 64.0 * m;
    auto masses = masses_double(d);
    auto g_float = [&](double s) {
        double acc = 0;
        for (size_t idx = masses.size(); idx > 0; --idx) {
            long k = static_cast<long>(idx) - 1;
            acc = acc * s + masses[idx - 1] * static_cast<double>((m - 1) * k - 1);
        }
        return acc;
    };
    auto exact_sign = [&](double s) {
        Rational q = g_eval(d, Rational(s), m);
        return q > 0 ? 1 : (q < 0 ? -1 : 0);
    };
    if (exact_sign(lo0) > 0)
        throw DegenerateStructureError(
            "root function already positive at the lower end (no mass at 0?)");
    if (exact_sign(hi0) < 0)
        throw DegenerateStructureError(
            "root function negative on the whole range (no mass at 2 or above?)");
    double lo = lo0, hi = hi0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, lo); ++it) {
        double mid = 0.5 * (lo + hi);
        if (g_float(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    // Certify the final bracket with exact arithmetic.
    if (exact_sign(lo) > 0 || exact_sign(hi) < 0)
        throw DegenerateStructureError("bisection bracket failed exact certification");
    SiRoot r;
    r.lo = lo;
    r.hi = hi;
    r.value = 0.5 * (lo + hi);
    return r;
}

int n2_threshold(const StarLaw& star) {
    Rational c1 = star.c1_exact();
    if (c1 <= 0)
        throw DegenerateStructureError("threshold undefined: no seed mass above 1");
    // Largest t with (5/4)^t <= 1/c1, in integers: 5^t num <= 4^t den.
    int t = 0;
    Integer p5 = 5, p4 = 4;
    while (p5 * c1.get_num() <= p4 * c1.get_den()) {
        ++t;
        p5 *= 5;
        p4 *= 4;
    }
    return t + 1;
}

bool mass_at_one_bounded(const ModelSpec& spec, int n_from, int n_to,
                         const EngineOptions& opt) {
    if (spec.m != 2)
        throw PreconditionError("mass-at-one bound is stated for m = 2");
    if (n_from < 0 || n_to < n_from) throw SpecError("bad generation range");
    auto orbit = iterate_float(initial_dist_float(spec), spec.m, n_to, opt);
    for (int n = n_from; n <= n_to; ++n)
        if (orbit[static_cast<size_t>(n)].mass(1) > 0.5 + 1e-12) return false;
    return true;
}

namespace {

struct HTriple {
    double H, Hp, Hpp;
};

HTriple h_float(const std::vector<double>& masses, double s) {
    HTriple h{0, 0, 0};
    for (size_t idx = masses.size(); idx > 0; --idx) {
        double k = static_cast<double>(idx - 1);
        h.Hpp = h.Hpp * s + masses[idx - 1] * k * (k - 1);
        h.Hp = h.Hp * s + masses[idx - 1] * k;
        h.H = h.H * s + masses[idx - 1];
    }
    h.Hp /= s;
    h.Hpp /= s * s;
    return h;
}

double delta_float(const HTriple& h, double s, int m) {
    return (h.H - s * (s - 1) * h.Hp) -
           (static_cast<double>(m - 1) / m) * (m - s) * (2 * s * h.Hp + s * s * h.Hpp);
}

} // namespace

std::vector<DeltaReport> delta_sweep(const ModelSpec& spec, int M, double delta,
                                     const EngineOptions& opt) {
    int m = spec.m;
    if (!(delta > 0 && delta < 1.0 / (16.0 * m)))
        throw PreconditionError("delta must lie in (0, 1/(16m))");
    if (M < 2) throw SpecError("horizon M must be at least 2");
    int n2 = n2_threshold(spec.star);
    if (n2 > M - 2) return {};

    auto orbit = iterate_exact(initial_dist_exact(spec), m, M, opt);
    double s = std::pow(static_cast<double>(m), 1.0 - delta);
    double threshold = m - m * delta * delta * delta;

    std::vector<DeltaReport> rows;
    for (int i = n2; i <= M - 2; ++i) {
        DeltaReport r;
        r.i = i;
        r.M = M;
        r.s = s;
        TruncatedLaw ti = truncate_law(orbit[static_cast<size_t>(i)], i, M);
        auto mi = masses_double(ti.law);
        HTriple h = h_float(mi, s);
        r.H = h.H;
        r.Hp = h.Hp;
        r.Hpp = h.Hpp;
        r.delta_value = delta_float(h, s, m);
        try {
            SiRoot root = solve_si(ti.law, m);
            r.s_i = root.value;
            r.s_i_found = true;
        } catch (const DegenerateStructureError&) {
            r.s_i_found = false;
        }
        r.pre_ok = r.s_i_found && r.s_i >= threshold;

        double h0 = mi.empty() ? 0.0 : mi[0];
        double edge = h.H - (m - 1) * s * h.Hp;
        r.cs_lhs = edge * edge;
        r.cs_rhs = 2.0 * h0 * r.delta_value;
        r.cs_ok = r.cs_lhs <= r.cs_rhs;
        r.lb_rhs = delta * delta / 128.0;
        r.lb_ok = r.delta_value >= r.lb_rhs;

        TruncatedLaw tn = truncate_law(orbit[static_cast<size_t>(i) + 1], i + 1, M);
        HTriple hn = h_float(masses_double(tn.law), s);
        r.rec_lhs = delta_float(hn, s, m);
        r.rec_rhs = std::pow(static_cast<double>(m), -2.0 * delta) * r.delta_value *
                    std::pow(h.H, m - 1);
        r.rec_ok = r.rec_lhs >= r.rec_rhs;
        r.rec_applicable = r.pre_ok;
        rows.push_back(r);
    }
    return rows;
}

} // namespace drx
