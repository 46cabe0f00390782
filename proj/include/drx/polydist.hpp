// Distribution of X_n with the mixing probability p kept symbolic: each
// mass is an exact polynomial in p. Stored internally in the Bernstein
// basis p^j (1-p)^(M-j), which the recursion preserves with nonnegative
// integer coefficients; the power basis is materialized on demand.
#pragma once

#include "drx/dist.hpp"
#include "drx/poly.hpp"
#include "drx/star_law.hpp"

namespace drx {

size_t default_generation_budget(int m);     // 8 for m = 2, 5 for m >= 3

class PolyDist {
public:
    // Generation-0 law (1-p) delta_0 + p star; star must be exact.
    static PolyDist initial(int m, const StarLaw& star);

    // Generation-0 law (1-p) mu + p lam for two arbitrary laws on {0,1,...}
    // given by mass vectors (index = value). Both must sum to 1.
    static PolyDist mixture(int m, const std::vector<Rational>& mu,
                            const std::vector<Rational>& lam);

    int arity() const { return m_; }
    int generation() const { return gen_; }
    long max_value() const { return static_cast<long>(num_.size()) - 1; }
    size_t bernstein_exponent() const { return exponent_; }

    // One recursion step. Throws BudgetError past the generation budget
    // (default_generation_budget(m) unless overridden).
    void step(size_t max_generation = 0);

    // Substitutes a rational p; exact, and by construction equal to
    // iterating the numeric engine from the evaluated initial law.
    ExactDist evaluate(const Rational& p) const;

    // Power-basis view of the mass at k.
    RationalPoly mass_poly(long k) const;

    // d^order/dp^order of the mass at k, evaluated at p0, exactly.
    Rational mass_derivative_at(long k, int order, const Rational& p0) const;

    // d^order/dp^order of E(X_n) at p0, exactly.
    Rational mean_derivative_at(int order, const Rational& p0) const;

    // Masses sum to the constant polynomial 1.
    bool mass_sum_is_one() const;

private:
    PolyDist() = default;
    int m_ = 2;
    int gen_ = 0;
    size_t exponent_ = 1;                       // Bernstein degree M
    std::vector<std::vector<Integer>> num_;     // num_[k][j] / den_
    Integer den_ = 1;
};

// d^k/dp^k P(X_n = 0) at p0.
Rational zero_mass_derivative(int m, const StarLaw& star, int n, int k,
                              const Rational& p0, size_t max_generation = 0);

// d^k/dp^k of P(X_n = 0)^m at p0 (pushed through the m-th power with jets).
Rational zero_mass_power_derivative(int m, const StarLaw& star, int n, int k,
                                    const Rational& p0, size_t max_generation = 0);

// d^k/dp^k of the partial free-energy sum
//   E(X_0) - 1/(m-1) + sum_{n=0}^{N} P(X_n = 0)^m / m^(n+1)
// at p0. The N-th partial sum equals the lower bracket L_{N+1}.
Rational free_energy_partial_derivative(int m, const StarLaw& star, int N, int k,
                                        const Rational& p0, size_t max_generation = 0);

} // namespace drx
