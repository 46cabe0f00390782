#include "drx/rational.hpp"

#include <cctype>

namespace drx {

namespace {

bool is_plain_integer(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw SpecError("empty rational literal");

    // The gmpxx string constructors auto-detect the base, so "015" would be
    // read as octal; force base 10 throughout.
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_plain_integer(num) || !is_plain_integer(den))
            throw SpecError("bad rational literal: " + text);
        Rational q{Integer(num, 10), Integer(den, 10)};
        if (q.get_den() == 0) throw SpecError("zero denominator: " + text);
        q.canonicalize();
        return q;
    }

    if (is_plain_integer(s)) return Rational(Integer(s, 10));

    // Decimal / scientific notation, converted exactly.
    bool neg = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') { neg = s[0] == '-'; i = 1; }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    long exp10 = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            std::string e = s.substr(i + 1);
            if (!is_plain_integer(e)) throw SpecError("bad exponent: " + text);
            exp10 = std::stol(e);
            break;
        } else {
            throw SpecError("bad rational literal: " + text);
        }
    }
    if (!seen_digit) throw SpecError("bad rational literal: " + text);

    Integer num(digits.empty() ? "0" : digits, 10);
    if (neg) num = -num;
    long net = exp10 - frac_digits;
    Integer pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    Rational q = net >= 0 ? Rational(num * pow10) : Rational(num, pow10);
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

} // namespace drx
