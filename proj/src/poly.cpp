#include "drx/poly.hpp"

#include <sstream>

namespace drx {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.assign(1, Rational(0));
    trim();
}

RationalPoly RationalPoly::constant(const Rational& c) {
    return RationalPoly(std::vector<Rational>{c});
}

RationalPoly RationalPoly::variable() {
    return RationalPoly(std::vector<Rational>{Rational(0), Rational(1)});
}

long RationalPoly::degree() const {
    for (size_t i = c_.size(); i > 0; --i)
        if (c_[i - 1] != 0) return static_cast<long>(i) - 1;
    return -1;
}

const Rational& RationalPoly::coeff(size_t i) const {
    static const Rational zero(0);
    return i < c_.size() ? c_[i] : zero;
}

Rational RationalPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (size_t i = c_.size(); i > 0; --i) acc = acc * x + c_[i - 1];
    return acc;
}

RationalPoly RationalPoly::derivative() const {
    if (c_.size() == 1) return RationalPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(Integer(i));
    return RationalPoly(std::move(d));
}

Rational RationalPoly::derivative_at(int order, const Rational& x) const {
    if (order < 0) throw SpecError("negative derivative order");
    RationalPoly d = *this;
    for (int i = 0; i < order; ++i) d = d.derivative();
    return d.eval(x);
}

RationalPoly RationalPoly::operator-() const {
    RationalPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

RationalPoly& RationalPoly::operator*=(const RationalPoly& o) {
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            if (o.c_[j] != 0) r[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(r);
    trim();
    return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
}

bool operator==(const RationalPoly& a, const RationalPoly& b) {
    size_t n = std::max(a.c_.size(), b.c_.size());
    for (size_t i = 0; i < n; ++i)
        if (a.coeff(i) != b.coeff(i)) return false;
    return true;
}

RationalPoly RationalPoly::pow(unsigned e) const {
    RationalPoly r = constant(1);
    RationalPoly base = *this;
    while (e > 0) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

std::string RationalPoly::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        os << format_rational(c_[i]);
        if (i >= 1) os << "*" << var;
        if (i >= 2) os << "^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

void RationalPoly::trim() {
    while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
}

Jet jet_mul(const Jet& x, const Jet& y) {
    if (x.order() != y.order()) throw SpecError("jet order mismatch");
    Jet r(x.order());
    for (size_t i = 0; i <= x.order(); ++i) {
        if (x.a[i] == 0) continue;
        for (size_t j = 0; i + j <= y.order(); ++j)
            if (y.a[j] != 0) r.a[i + j] += x.a[i] * y.a[j];
    }
    return r;
}

Jet jet_pow(const Jet& x, unsigned e) {
    Jet r(x.order());
    r.a[0] = 1;
    Jet base = x;
    while (e > 0) {
        if (e & 1u) r = jet_mul(r, base);
        base = jet_mul(base, base);
        e >>= 1u;
    }
    return r;
}

Rational jet_derivative(const Jet& x, size_t k) {
    if (k > x.order()) throw SpecError("jet too short for requested derivative");
    return x.a[k] * Rational(factorial(static_cast<unsigned long>(k)));
}

} // namespace drx
