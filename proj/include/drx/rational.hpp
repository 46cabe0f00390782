// Exact integer/rational aliases, parsing helpers and shared error types.
#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace drx {

using Integer = mpz_class;
using Rational = mpq_class;

// Malformed input: bad model JSON, unparsable rational, invalid parameter.
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

// Distribution support would exceed the configured cap under policy `reject`.
struct SupportCapError : std::runtime_error {
    explicit SupportCapError(const std::string& msg) : std::runtime_error(msg) {}
};

// Symbolic-polynomial iteration beyond the configured generation budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural assumption of an algorithm fails for the given law
// (e.g. root-finding on a function with no sign change).
struct DegenerateStructureError : std::runtime_error {
    explicit DegenerateStructureError(const std::string& msg) : std::runtime_error(msg) {}
};

// A check was invoked outside its stated hypotheses.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// num/den in canonical form. The two-argument mpq_class constructor does
// not reduce, and GMP comparisons assume reduced operands, so any quotient
// whose parts are not known to be coprime must go through here.
inline Rational make_ratio(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational q{num, den};
    q.canonicalize();
    return q;
}

// Parses "3/4", "-3/4", "7", "0.15", "1e-3" into an exact rational.
// Decimal and exponent notation is converted exactly (0.15 -> 3/20).
Rational parse_rational(const std::string& text);

// Canonical "num/den" (or plain "num" when den == 1).
std::string format_rational(const Rational& q);

// mpq_get_d truncates; when both parts fit a double exactly, dividing them
// gives the correctly rounded value instead.
inline double to_double(const Rational& q) {
    if (mpz_sizeinbase(q.get_num().get_mpz_t(), 2) <= 53 &&
        mpz_sizeinbase(q.get_den().get_mpz_t(), 2) <= 53)
        return q.get_num().get_d() / q.get_den().get_d();
    return q.get_d();
}

Integer binomial(unsigned long n, unsigned long k);
Integer factorial(unsigned long n);

// m^e for small exact powers.
inline Integer ipow(unsigned long base, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

} // namespace drx
