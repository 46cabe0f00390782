// Law of the positive-part seed X0*: the distribution placed on {1,2,...}
// that gets mixed with an atom at 0 to form the initial condition.
#pragma once

#include <utility>
#include <vector>

#include "drx/rational.hpp"

namespace drx {

enum class StarKind { dirac, finite, power_geometric };

// dirac(k0): point mass at k0 >= 1.
// finite: exact rational masses on finitely many points of {1,2,...}.
// power_geometric(alpha, k_max): mass at k proportional to m^(-k) k^(-alpha),
//   truncated at k_max and renormalized; float-only, and m-dependent.
class StarLaw {
public:
    static StarLaw dirac(long k0);
    static StarLaw finite(std::vector<std::pair<long, Rational>> masses);
    static StarLaw power_geometric(double alpha, long k_max);

    StarKind kind() const { return kind_; }
    bool exact() const { return kind_ != StarKind::power_geometric; }
    long max_value() const;
    double alpha() const { return alpha_; }

    // True when E(X0* m^X0*) has no finite closed value for the untruncated
    // family; the mean recursion then explodes for every p > 0.
    bool divergent(int m) const;

    // Exact masses indexed by value 0..max_value() (index 0 always zero mass).
    std::vector<Rational> masses_exact() const;

    // Normalized float masses, truncation applied for power_geometric.
    std::vector<double> masses_float(int m) const;

    // Untruncated tail mass above k_max relative to the untruncated total,
    // so callers can judge the truncation quality. Zero for exact kinds.
    double truncation_tail(int m) const;

    Rational c1_exact() const;     // P(X0* >= 2), exact kinds only
    double c1_float(int m) const;

    const std::vector<std::pair<long, Rational>>& finite_masses() const { return masses_; }

private:
    StarLaw() = default;
    StarKind kind_ = StarKind::dirac;
    long k0_ = 1;
    std::vector<std::pair<long, Rational>> masses_;  // sorted by value
    double alpha_ = 0.0;
    long k_max_ = 0;
};

} // namespace drx
