// Derived quantities of an orbit: free-energy brackets and partial sums,
// the one-step mean identity, sign preservation of the criticality gap,
// concentration bounds, decay profiles, and Monte Carlo cross-checks.
#pragma once

#include <cstdint>
#include <vector>

#include "drx/engine.hpp"

namespace drx {

// Row N of the free-energy bracket table:
//   L = (E(X_N) - 1/(m-1)) / m^N   (nondecreasing in N)
//   U = E(X_N) / m^N               (nonincreasing in N)
//   U - L = m^(-N) / (m-1), and L equals the series partial sum
//   E(X_0) - 1/(m-1) + sum_{n<N} P(X_n=0)^m / m^(n+1).
struct BracketRow {
    int N = 0;
    Rational L, U, partial_sum;
    Rational mean, mass0;
};
std::vector<BracketRow> free_energy_table_exact(const ModelSpec& spec, int N,
                                                const EngineOptions& opt = {});

struct BracketRowF {
    int N = 0;
    double L = 0, U = 0, partial_sum = 0;
    double mean = 0, mass0 = 0;
};
std::vector<BracketRowF> free_energy_table_float(const ModelSpec& spec, int N,
                                                 const EngineOptions& opt = {});

// E(X_{n+1}) = m E(X_n) - 1 + P(X_n = 0)^m, checked exactly along an orbit.
bool mean_identity_holds(const std::vector<ExactDist>& orbit, int m);

// Criticality gap E(m^X_n) - (m-1) E(X_n m^X_n) along an orbit; its sign
// is invariant under the recursion.
std::vector<Rational> gap_sequence_exact(const std::vector<ExactDist>& orbit, int m);
bool gap_sign_constant(const std::vector<Rational>& gaps);

// Exact CDF sandwich at level n: with S the sum of m^n seed copies,
//   P(S <= t) <= P(X_n <= t) <= P((S - m^n)^+ <= t) for every t.
bool sandwich_check_exact(const ModelSpec& spec, int n, const EngineOptions& opt = {});

// Concentration check for the seed sum: at p >= 1 - c1/4 and
// n >= floor(log_m(k (4+c1)/c1)) + 1,
//   P(X_{0,1} + ... + X_{0,m^n-k} <= m^n) <= exp(-c1^2 (m^n - k) / 32).
// The Monte Carlo estimate must sit below bound + 3 standard errors.
struct HoeffdingCheck {
    bool applicable = false;
    int n_min = 0;
    double p_required = 0;
    double bound = 0;
    double estimate = 0;
    double sigma = 0;
    size_t samples = 0;
    uint64_t seed = 0;
    bool pass = false;
};
int hoeffding_min_n(int m, const StarLaw& star, long k);
HoeffdingCheck hoeffding_tail_check(const ModelSpec& spec, int n, long k,
                                    size_t samples, uint64_t seed);

// log(-log P(X_n = 0)) per generation, float path.
struct DecayRow {
    int n = 0;
    double mass0 = 0;
    double loglog = 0;
};
std::vector<DecayRow> zero_mass_decay_float(const ModelSpec& spec, int n_max,
                                            const EngineOptions& opt = {});

// Total variation distance between the exact law of X_n and the empirical
// law of `samples` simulated draws.
double tv_distance_mc_exact(const ModelSpec& spec, int n, size_t samples,
                            uint64_t seed, const EngineOptions& opt = {});

} // namespace drx
