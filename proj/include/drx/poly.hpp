// Dense univariate polynomials with exact rational coefficients.
#pragma once

#include <vector>

#include "drx/rational.hpp"

namespace drx {

class RationalPoly {
public:
    RationalPoly() : c_(1, Rational(0)) {}
    explicit RationalPoly(std::vector<Rational> coeffs);
    static RationalPoly constant(const Rational& c);
    static RationalPoly variable();                     // x

    long degree() const;                                // -1 for the zero poly
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& coeff(size_t i) const;
    bool is_zero() const { return degree() < 0; }

    Rational eval(const Rational& x) const;
    RationalPoly derivative() const;
    Rational derivative_at(int order, const Rational& x) const;

    RationalPoly operator-() const;
    RationalPoly& operator+=(const RationalPoly& o);
    RationalPoly& operator-=(const RationalPoly& o);
    RationalPoly& operator*=(const RationalPoly& o);
    RationalPoly& operator*=(const Rational& s);

    friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
    friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
    friend RationalPoly operator*(RationalPoly a, const RationalPoly& b) { return a *= b; }
    friend RationalPoly operator*(RationalPoly a, const Rational& s) { return a *= s; }
    friend bool operator==(const RationalPoly& a, const RationalPoly& b);

    RationalPoly pow(unsigned e) const;
    std::string str(const std::string& var = "p") const;

private:
    void trim();
    std::vector<Rational> c_;                           // ascending powers
};

// Taylor jets at a fixed point: j[t] = f^(t)(x0) / t!, truncated at `order`.
// Enough structure to push derivatives through products and integer powers.
struct Jet {
    std::vector<Rational> a;
    explicit Jet(size_t order) : a(order + 1, Rational(0)) {}
    size_t order() const { return a.size() - 1; }
};

Jet jet_mul(const Jet& x, const Jet& y);
Jet jet_pow(const Jet& x, unsigned e);
// k-th derivative from the jet: k! * a[k].
Rational jet_derivative(const Jet& x, size_t k);

} // namespace drx
