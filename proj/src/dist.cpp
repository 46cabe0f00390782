#include "drx/dist.hpp"

#include <algorithm>

namespace drx {

const char* tail_policy_name(TailPolicy p) {
    switch (p) {
        case TailPolicy::reject: return "reject";
        case TailPolicy::lump_at_cap: return "lump_at_cap";
        case TailPolicy::lump_at_zero: return "lump_at_zero";
    }
    return "?";
}

TailPolicy tail_policy_from_name(const std::string& name) {
    if (name == "reject") return TailPolicy::reject;
    if (name == "lump_at_cap") return TailPolicy::lump_at_cap;
    if (name == "lump_at_zero") return TailPolicy::lump_at_zero;
    throw SpecError("unknown tail policy: " + name);
}

ExactDist::ExactDist(std::vector<Integer> num, Integer den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (num_.empty()) throw SpecError("empty support");
    if (den_ <= 0) throw SpecError("denominator must be positive");
    for (const auto& n : num_)
        if (n < 0) throw SpecError("negative mass numerator");
}

ExactDist ExactDist::delta(long k) {
    if (k < 0) throw SpecError("delta at negative value");
    std::vector<Integer> num(static_cast<size_t>(k) + 1, Integer(0));
    num[static_cast<size_t>(k)] = 1;
    return ExactDist(std::move(num), Integer(1));
}

ExactDist ExactDist::from_rationals(const std::vector<std::pair<long, Rational>>& atoms) {
    if (atoms.empty()) throw SpecError("empty support");
    Integer den = 1;
    long kmax = 0;
    for (const auto& [k, q] : atoms) {
        if (k < 0) throw SpecError("atom at negative value");
        if (q < 0) throw SpecError("negative mass");
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
        kmax = std::max(kmax, k);
    }
    std::vector<Integer> num(static_cast<size_t>(kmax) + 1, Integer(0));
    for (const auto& [k, q] : atoms)
        num[static_cast<size_t>(k)] += q.get_num() * (den / q.get_den());
    return ExactDist(std::move(num), den);
}

Rational ExactDist::mass(long k) const {
    Integer n = 0;
    if (k >= 0 && k <= max_value()) n = num_[static_cast<size_t>(k)];
    if (tail_num_ != 0) {
        if (policy_ == TailPolicy::lump_at_zero && k == 0) n += tail_num_;
        if (policy_ == TailPolicy::lump_at_cap && k == max_value()) n += tail_num_;
    }
    Rational q(n, den_);
    q.canonicalize();
    return q;
}

Rational ExactDist::mean() const {
    Integer acc = 0;
    for (size_t k = 1; k < num_.size(); ++k) acc += Integer(k) * num_[k];
    if (tail_num_ != 0 && policy_ == TailPolicy::lump_at_cap)
        acc += Integer(max_value()) * tail_num_;
    Rational q(acc, den_);
    q.canonicalize();
    return q;
}

Rational ExactDist::moment_mgf(const Rational& s) const {
    Rational acc = 0, sk = 1;
    for (size_t k = 0; k < num_.size(); ++k) {
        if (num_[k] != 0) acc += make_ratio(num_[k], den_) * sk;
        sk *= s;
    }
    if (tail_num_ != 0)
        throw PreconditionError("mgf undefined on a lumped-tail law");
    return acc;
}

Rational ExactDist::moment_xmgf(const Rational& s) const {
    Rational acc = 0, sk = s;
    for (size_t k = 1; k < num_.size(); ++k) {
        if (num_[k] != 0) acc += make_ratio(num_[k] * Integer(k), den_) * sk;
        sk *= s;
    }
    if (tail_num_ != 0)
        throw PreconditionError("mgf undefined on a lumped-tail law");
    return acc;
}

bool ExactDist::mass_sum_is_one() const {
    Integer acc = tail_num_;
    for (const auto& n : num_) acc += n;
    return acc == den_;
}

bool ExactDist::same_law(const ExactDist& other) const {
    long top = std::max(max_value(), other.max_value());
    for (long k = 0; k <= top; ++k)
        if (mass(k) != other.mass(k)) return false;
    return true;
}

void ExactDist::set_tail(Integer tail_num, TailPolicy policy) {
    if (tail_num < 0) throw SpecError("negative tail mass");
    tail_num_ = std::move(tail_num);
    policy_ = policy;
}

void ExactDist::reduce() {
    Integer g = den_;
    for (const auto& n : num_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        if (g == 1) return;
    }
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), tail_num_.get_mpz_t());
    if (g == 1) return;
    for (auto& n : num_) n /= g;
    tail_num_ /= g;
    den_ /= g;
}

void ExactDist::trim() {
    while (num_.size() > 1 && num_.back() == 0) num_.pop_back();
}

FloatDist FloatDist::delta(long k) {
    if (k < 0) throw SpecError("delta at negative value");
    std::vector<double> m(static_cast<size_t>(k) + 1, 0.0);
    m[static_cast<size_t>(k)] = 1.0;
    return FloatDist(std::move(m));
}

FloatDist FloatDist::from_exact(const ExactDist& d) {
    std::vector<double> m(d.size());
    for (size_t k = 0; k < d.size(); ++k)
        m[k] = to_double(make_ratio(d.numerator(k), d.denominator()));
    FloatDist f(std::move(m));
    if (d.tail_numerator() != 0)
        f.set_tail(d.tail_mass().get_d(), d.tail_policy());
    return f;
}

double FloatDist::mass(long k) const {
    double v = 0;
    if (k >= 0 && k <= max_value()) v = masses_[static_cast<size_t>(k)];
    if (tail_ != 0.0) {
        if (policy_ == TailPolicy::lump_at_zero && k == 0) v += tail_;
        if (policy_ == TailPolicy::lump_at_cap && k == max_value()) v += tail_;
    }
    return v;
}

double FloatDist::mean() const {
    double acc = 0;
    for (size_t k = 1; k < masses_.size(); ++k)
        acc += static_cast<double>(k) * masses_[k];
    if (tail_ != 0.0 && policy_ == TailPolicy::lump_at_cap)
        acc += static_cast<double>(max_value()) * tail_;
    return acc;
}

double FloatDist::sum() const {
    double acc = tail_;
    for (double m : masses_) acc += m;
    return acc;
}

void FloatDist::set_tail(double tail, TailPolicy policy) {
    if (tail < 0) throw SpecError("negative tail mass");
    tail_ = tail;
    policy_ = policy;
}

} // namespace drx
