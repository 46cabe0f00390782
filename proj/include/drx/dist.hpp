// Probability laws on {0,1,...,K}: exact rationals over one shared
// denominator, and a float counterpart for large supports.
#pragma once

#include <cstddef>
#include <vector>

#include "drx/rational.hpp"

namespace drx {

// What to do when an operation would push support past the cap:
// reject throws, the lump policies fold the excess mass onto the cap
// value or onto zero and record the folded amount.
enum class TailPolicy { reject, lump_at_cap, lump_at_zero };

const char* tail_policy_name(TailPolicy p);
TailPolicy tail_policy_from_name(const std::string& name);

class ExactDist {
public:
    ExactDist() : num_(1, Integer(1)), den_(1) {}
    ExactDist(std::vector<Integer> num, Integer den);

    static ExactDist delta(long k);
    static ExactDist from_rationals(const std::vector<std::pair<long, Rational>>& atoms);

    size_t size() const { return num_.size(); }          // support is 0..size()-1
    long max_value() const { return static_cast<long>(num_.size()) - 1; }
    const Integer& numerator(size_t k) const { return num_[k]; }
    const Integer& denominator() const { return den_; }
    const Integer& tail_numerator() const { return tail_num_; }
    TailPolicy tail_policy() const { return policy_; }

    Rational mass(long k) const;          // tail folded in per policy
    Rational tail_mass() const { return make_ratio(tail_num_, den_); }
    Rational mass_at_zero() const { return mass(0); }
    Rational mean() const;
    Rational moment_mgf(const Rational& s) const;        // E s^X
    Rational moment_xmgf(const Rational& s) const;       // E X s^X

    bool mass_sum_is_one() const;
    bool same_law(const ExactDist& other) const;         // value-wise rational equality

    void set_tail(Integer tail_num, TailPolicy policy);
    void reduce();                         // divide out common content
    void trim();                           // drop zero masses at the top

private:
    std::vector<Integer> num_;             // mass at k is num_[k] / den_
    Integer den_;
    Integer tail_num_ = 0;                 // mass folded off the stored support
    TailPolicy policy_ = TailPolicy::reject;
};

class FloatDist {
public:
    FloatDist() : masses_(1, 1.0) {}
    explicit FloatDist(std::vector<double> masses) : masses_(std::move(masses)) {}

    static FloatDist delta(long k);
    static FloatDist from_exact(const ExactDist& d);

    size_t size() const { return masses_.size(); }
    long max_value() const { return static_cast<long>(masses_.size()) - 1; }
    const std::vector<double>& raw() const { return masses_; }
    double tail() const { return tail_; }
    TailPolicy tail_policy() const { return policy_; }

    double mass(long k) const;
    double mass_at_zero() const { return mass(0); }
    double mean() const;
    double sum() const;                    // includes tail

    void set_tail(double tail, TailPolicy policy);

private:
    std::vector<double> masses_;
    double tail_ = 0.0;
    TailPolicy policy_ = TailPolicy::reject;
};

} // namespace drx
