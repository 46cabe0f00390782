#include "drx/polydist.hpp"

#include <algorithm>

#include "drx/engine.hpp"

namespace drx {

size_t default_generation_budget(int m) { return m == 2 ? 8 : 5; }

PolyDist PolyDist::initial(int m, const StarLaw& star) {
    if (m < 2) throw SpecError("m must be at least 2");
    if (!star.exact()) throw SpecError("symbolic mode needs an exact seed law");
    auto masses = star.masses_exact();
    Integer den = 1;
    for (const auto& q : masses)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());

    PolyDist d;
    d.m_ = m;
    d.gen_ = 0;
    d.exponent_ = 1;
    d.den_ = den;
    d.num_.assign(masses.size(), std::vector<Integer>(2, Integer(0)));
    d.num_[0][0] = den;                                   // (1-p) at value 0
    for (size_t k = 1; k < masses.size(); ++k)            // p * star mass at k
        d.num_[k][1] = masses[k].get_num() * (den / masses[k].get_den());
    return d;
}

PolyDist PolyDist::mixture(int m, const std::vector<Rational>& mu,
                           const std::vector<Rational>& lam) {
    if (m < 2) throw SpecError("m must be at least 2");
    if (mu.empty() || lam.empty()) throw SpecError("empty measure");
    Rational su = 0, sl = 0;
    for (const auto& q : mu) {
        if (q < 0) throw SpecError("negative mass");
        su += q;
    }
    for (const auto& q : lam) {
        if (q < 0) throw SpecError("negative mass");
        sl += q;
    }
    if (su != 1 || sl != 1) throw SpecError("measures must sum to 1");

    Integer den = 1;
    for (const auto& q : mu)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    for (const auto& q : lam)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());

    PolyDist d;
    d.m_ = m;
    d.gen_ = 0;
    d.exponent_ = 1;
    d.den_ = den;
    d.num_.assign(std::max(mu.size(), lam.size()),
                  std::vector<Integer>(2, Integer(0)));
    for (size_t k = 0; k < mu.size(); ++k)
        d.num_[k][0] = mu[k].get_num() * (den / mu[k].get_den());
    for (size_t k = 0; k < lam.size(); ++k)
        d.num_[k][1] = lam[k].get_num() * (den / lam[k].get_den());
    return d;
}

void PolyDist::step(size_t max_generation) {
    size_t budget = max_generation == 0 ? default_generation_budget(m_) : max_generation;
    if (static_cast<size_t>(gen_) + 1 > budget) {
        size_t k_next = static_cast<size_t>(m_) * (num_.size() - 1);
        size_t j_next = static_cast<size_t>(m_) * exponent_ + 1;
        throw BudgetError("generation " + std::to_string(gen_ + 1) +
                          " exceeds symbolic budget " + std::to_string(budget) +
                          " (next table would hold about " +
                          std::to_string(k_next * j_next) + " big-integer entries)");
    }

    // Flatten (value, Bernstein index) pairs into one integer sequence with a
    // stride wide enough for the final Bernstein degree, so one convolution
    // power computes the whole bivariate product.
    size_t m_u = static_cast<size_t>(m_);
    size_t K_in = num_.size();
    size_t stride = m_u * exponent_ + 1;
    std::vector<Integer> flat((K_in - 1) * stride + exponent_ + 1, Integer(0));
    for (size_t k = 0; k < K_in; ++k)
        for (size_t j = 0; j <= exponent_; ++j)
            flat[k * stride + j] = num_[k][j];

    auto conv = detail::conv_pow_packed(flat, static_cast<unsigned>(m_));

    size_t K_conv = m_u * (K_in - 1) + 1;
    size_t M_out = m_u * exponent_;
    auto cell = [&](size_t k, size_t j) -> Integer {
        size_t idx = k * stride + j;
        return idx < conv.size() ? conv[idx] : Integer(0);
    };

    // Shift: value 0 collects the old values 0 and 1, value k comes from k+1.
    size_t K_out = K_conv >= 2 ? K_conv - 1 : 1;
    std::vector<std::vector<Integer>> out(K_out, std::vector<Integer>(M_out + 1, Integer(0)));
    for (size_t j = 0; j <= M_out; ++j) {
        out[0][j] = cell(0, j);
        if (K_conv >= 2) out[0][j] += cell(1, j);
    }
    for (size_t k = 2; k < K_conv; ++k)
        for (size_t j = 0; j <= M_out; ++j) out[k - 1][j] = cell(k, j);

    Integer den_out;
    mpz_pow_ui(den_out.get_mpz_t(), den_.get_mpz_t(), static_cast<unsigned>(m_));

    num_ = std::move(out);
    den_ = std::move(den_out);
    exponent_ = M_out;
    ++gen_;

    while (num_.size() > 1 &&
           std::all_of(num_.back().begin(), num_.back().end(),
                       [](const Integer& x) { return x == 0; }))
        num_.pop_back();
}

ExactDist PolyDist::evaluate(const Rational& p) const {
    if (p < 0 || p > 1) throw SpecError("p must lie in [0,1]");
    const Integer& a = p.get_num();
    const Integer& b = p.get_den();
    Integer c = b - a;
    // Precompute a^j (b-a)^(M-j).
    std::vector<Integer> w(exponent_ + 1);
    Integer ap = 1;
    for (size_t j = 0; j <= exponent_; ++j) {
        Integer cp;
        mpz_pow_ui(cp.get_mpz_t(), c.get_mpz_t(),
                   static_cast<unsigned>(exponent_ - j));
        w[j] = ap * cp;
        ap *= a;
    }
    Integer bM;
    mpz_pow_ui(bM.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned>(exponent_));
    std::vector<Integer> nums(num_.size(), Integer(0));
    for (size_t k = 0; k < num_.size(); ++k)
        for (size_t j = 0; j <= exponent_; ++j)
            if (num_[k][j] != 0) nums[k] += num_[k][j] * w[j];
    ExactDist d(std::move(nums), den_ * bM);
    d.reduce();
    d.trim();
    return d;
}

RationalPoly PolyDist::mass_poly(long k) const {
    if (k < 0 || k > max_value()) return RationalPoly();
    const auto& row = num_[static_cast<size_t>(k)];
    std::vector<Integer> coeffs(exponent_ + 1, Integer(0));
    for (size_t j = 0; j <= exponent_; ++j) {
        if (row[j] == 0) continue;
        // p^j (1-p)^(M-j) = sum_i C(M-j, i) (-1)^i p^(j+i)
        unsigned long rem = static_cast<unsigned long>(exponent_ - j);
        for (unsigned long i = 0; i <= rem; ++i) {
            Integer term = row[j] * binomial(rem, i);
            if (i & 1ul)
                coeffs[j + i] -= term;
            else
                coeffs[j + i] += term;
        }
    }
    std::vector<Rational> qs(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        qs[i] = Rational(coeffs[i], den_);
        qs[i].canonicalize();
    }
    return RationalPoly(std::move(qs));
}

Rational PolyDist::mass_derivative_at(long k, int order, const Rational& p0) const {
    if (order < 0) throw SpecError("negative derivative order");
    if (k < 0 || k > max_value()) return Rational(0);
    if (p0 < 0 || p0 > 1) throw SpecError("p must lie in [0,1]");
    const auto& row = num_[static_cast<size_t>(k)];
    size_t M = exponent_;
    unsigned long r = static_cast<unsigned long>(order);
    Rational q0 = 1 - p0;
    // Powers of p0 and (1-p0) up to M.
    std::vector<Rational> pw(M + 1), qw(M + 1);
    pw[0] = 1;
    qw[0] = 1;
    for (size_t i = 1; i <= M; ++i) {
        pw[i] = pw[i - 1] * p0;
        qw[i] = qw[i - 1] * q0;
    }
    auto falling = [](unsigned long x, unsigned long t) {
        Integer f = 1;
        for (unsigned long i = 0; i < t; ++i) f *= Integer(x - i);
        return f;
    };
    Rational acc = 0;
    for (size_t j = 0; j <= M; ++j) {
        if (row[j] == 0) continue;
        unsigned long rem = static_cast<unsigned long>(M - j);
        Rational term = 0;
        for (unsigned long t = 0; t <= r; ++t) {
            unsigned long u = r - t;
            if (t > j || u > rem) continue;
            Rational part = Rational(binomial(r, t) * falling(j, t) * falling(rem, u));
            if (u & 1ul) part = -part;
            term += part * pw[j - t] * qw[rem - u];
        }
        acc += make_ratio(row[j], den_) * term;
    }
    acc.canonicalize();
    return acc;
}

Rational PolyDist::mean_derivative_at(int order, const Rational& p0) const {
    Rational acc = 0;
    for (long k = 1; k <= max_value(); ++k)
        acc += Rational(Integer(k)) * mass_derivative_at(k, order, p0);
    acc.canonicalize();
    return acc;
}

bool PolyDist::mass_sum_is_one() const {
    // sum_j C(M, j) p^j (1-p)^(M-j) = 1, so the column sums must match
    // den * C(M, j) exactly.
    for (size_t j = 0; j <= exponent_; ++j) {
        Integer col = 0;
        for (const auto& row : num_) col += row[j];
        if (col != den_ * binomial(static_cast<unsigned long>(exponent_),
                                   static_cast<unsigned long>(j)))
            return false;
    }
    return true;
}

namespace {

Jet zero_mass_jet(const PolyDist& d, int k, const Rational& p0) {
    Jet j(static_cast<size_t>(k));
    for (int t = 0; t <= k; ++t)
        j.a[static_cast<size_t>(t)] = d.mass_derivative_at(0, t, p0) /
                                      Rational(factorial(static_cast<unsigned long>(t)));
    return j;
}

} // namespace

Rational zero_mass_derivative(int m, const StarLaw& star, int n, int k,
                              const Rational& p0, size_t max_generation) {
    if (n < 0 || k < 0) throw SpecError("n and k must be nonnegative");
    PolyDist d = PolyDist::initial(m, star);
    for (int i = 0; i < n; ++i) d.step(max_generation);
    return d.mass_derivative_at(0, k, p0);
}

Rational zero_mass_power_derivative(int m, const StarLaw& star, int n, int k,
                                    const Rational& p0, size_t max_generation) {
    if (n < 0 || k < 0) throw SpecError("n and k must be nonnegative");
    PolyDist d = PolyDist::initial(m, star);
    for (int i = 0; i < n; ++i) d.step(max_generation);
    Jet base = zero_mass_jet(d, k, p0);
    return jet_derivative(jet_pow(base, static_cast<unsigned>(m)),
                          static_cast<size_t>(k));
}

Rational free_energy_partial_derivative(int m, const StarLaw& star, int N, int k,
                                        const Rational& p0, size_t max_generation) {
    if (N < 0 || k < 0) throw SpecError("N and k must be nonnegative");
    // Leading term E(X_0) - 1/(m-1) = p E(star) - 1/(m-1): linear in p.
    Rational star_mean = 0;
    auto masses = star.masses_exact();
    for (size_t v = 1; v < masses.size(); ++v)
        star_mean += Rational(Integer(v)) * masses[v];
    Rational acc = 0;
    if (k == 0) acc = p0 * star_mean - Rational(1, m - 1);
    if (k == 1) acc = star_mean;

    PolyDist d = PolyDist::initial(m, star);
    Integer mpow = m;  // m^(n+1)
    for (int n = 0;; ++n) {
        Jet base = zero_mass_jet(d, k, p0);
        Rational dk = jet_derivative(jet_pow(base, static_cast<unsigned>(m)),
                                     static_cast<size_t>(k));
        acc += dk / Rational(mpow);
        if (n == N) break;
        d.step(max_generation);
        mpow *= m;
    }
    acc.canonicalize();
    return acc;
}

} // namespace drx
