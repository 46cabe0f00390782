#include "drx/tree.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>

#include "drx/polydist.hpp"

namespace drx {

size_t cone_leaf_count(int m, int n) {
    if (m < 2 || n < 0) throw SpecError("need m >= 2 and n >= 0");
    size_t leaves = 1;
    for (int i = 0; i < n; ++i) {
        leaves *= static_cast<size_t>(m);
        if (leaves > 32) throw SpecError("cone too wide for mask-based enumeration");
    }
    return leaves;
}

std::vector<std::vector<long>> eval_cone(int m, int n, const LeafConfig& cfg,
                                         uint32_t force_mask) {
    size_t leaves = cone_leaf_count(m, n);
    if (cfg.xstar.size() != leaves || cfg.u.size() != leaves)
        throw SpecError("config size does not match the cone");
    std::vector<std::vector<long>> levels(static_cast<size_t>(n) + 1);
    levels[0].resize(leaves);
    for (size_t v = 0; v < leaves; ++v) {
        bool forced = (force_mask >> v) & 1u;
        levels[0][v] = forced ? cfg.xstar[v] : cfg.xstar[v] * cfg.u[v];
    }
    size_t width = leaves;
    for (int l = 1; l <= n; ++l) {
        width /= static_cast<size_t>(m);
        levels[static_cast<size_t>(l)].resize(width);
        for (size_t j = 0; j < width; ++j) {
            long sum = 0;
            for (int r = 0; r < m; ++r)
                sum += levels[static_cast<size_t>(l) - 1]
                             [j * static_cast<size_t>(m) + static_cast<size_t>(r)];
            levels[static_cast<size_t>(l)][j] = std::max<long>(sum - 1, 0);
        }
    }
    return levels;
}

long eval_root(int m, int n, const LeafConfig& cfg, uint32_t force_mask) {
    return eval_cone(m, n, cfg, force_mask)[static_cast<size_t>(n)][0];
}

namespace {

// Iterates B over all subsets of a_mask, calling fn(b_mask, parity) where
// parity is |A| - |B| mod 2.
template <typename F>
void for_each_subset(uint32_t a_mask, F&& fn) {
    int ka = std::popcount(a_mask);
    uint32_t b = a_mask;
    while (true) {
        fn(b, (ka - std::popcount(b)) & 1);
        if (b == 0) break;
        b = (b - 1) & a_mask;
    }
}

} // namespace

long nabla_root_indicator(int m, int n, const LeafConfig& cfg, uint32_t a_mask,
                          long target) {
    long acc = 0;
    for_each_subset(a_mask, [&](uint32_t b, int parity) {
        if (eval_root(m, n, cfg, b) == target) acc += parity ? -1 : 1;
    });
    return acc;
}

ConeSets cone_sets(int m, int n, uint32_t a_mask) {
    ConeSets cs;
    size_t leaves = cone_leaf_count(m, n);
    std::vector<std::vector<char>> in_o(static_cast<size_t>(n) + 1);
    size_t width = leaves;
    for (int l = 0; l <= n; ++l) {
        in_o[static_cast<size_t>(l)].assign(width, 0);
        width /= static_cast<size_t>(m);
    }
    for (size_t v = 0; v < leaves; ++v) {
        if (!((a_mask >> v) & 1u)) continue;
        size_t idx = v;
        for (int l = 1; l <= n; ++l) {
            idx /= static_cast<size_t>(m);
            in_o[static_cast<size_t>(l)][idx] = 1;
        }
    }
    for (int l = 1; l <= n; ++l)
        for (size_t j = 0; j < in_o[static_cast<size_t>(l)].size(); ++j)
            if (in_o[static_cast<size_t>(l)][j])
                cs.O.emplace_back(l, static_cast<long>(j));
    // Frontier: inputs of O-vertices that are neither ancestors nor A-leaves.
    for (const auto& [l, j] : cs.O) {
        for (int r = 0; r < m; ++r) {
            int pl = l - 1;
            size_t pj = static_cast<size_t>(j) * static_cast<size_t>(m) +
                        static_cast<size_t>(r);
            if (in_o[static_cast<size_t>(pl)][pj]) continue;
            if (pl == 0 && ((a_mask >> pj) & 1u)) continue;
            cs.L.emplace_back(pl, static_cast<long>(pj));
        }
    }
    std::sort(cs.L.begin(), cs.L.end());
    return cs;
}

namespace {

struct StarSupport {
    std::vector<long> values;
    std::vector<Rational> masses;
};

StarSupport star_support(const StarLaw& star) {
    StarSupport s;
    auto masses = star.masses_exact();
    for (size_t k = 1; k < masses.size(); ++k) {
        if (masses[k] == 0) continue;
        s.values.push_back(static_cast<long>(k));
        s.masses.push_back(masses[k]);
    }
    return s;
}

// Mixed-radix enumeration over ((star index, u) per leaf). Calls
// fn(cfg, star_weight, ones) with the product of seed masses and the
// number of leaves whose mark is 1.
template <typename F>
void for_each_config(const StarSupport& ss, size_t leaves, F&& fn) {
    size_t radix = ss.values.size() * 2;
    std::vector<size_t> digit(leaves, 0);
    LeafConfig cfg;
    cfg.xstar.resize(leaves);
    cfg.u.resize(leaves);
    while (true) {
        Rational w = 1;
        int ones = 0;
        for (size_t v = 0; v < leaves; ++v) {
            size_t si = digit[v] / 2;
            cfg.xstar[v] = ss.values[si];
            cfg.u[v] = static_cast<uint8_t>(digit[v] & 1);
            w *= ss.masses[si];
            ones += cfg.u[v];
        }
        fn(cfg, w, ones);
        size_t pos = 0;
        while (pos < leaves && ++digit[pos] == radix) {
            digit[pos] = 0;
            ++pos;
        }
        if (pos == leaves) break;
    }
}

// d^k/dp^k [ p^a (1-p)^b ] at p, exactly.
Rational mixed_power_derivative(unsigned long a, unsigned long b, int k,
                                const Rational& p) {
    Rational acc = 0;
    Rational q = 1 - p;
    for (int t = 0; t <= k; ++t) {
        unsigned long tu = static_cast<unsigned long>(t);
        unsigned long uu = static_cast<unsigned long>(k - t);
        if (tu > a || uu > b) continue;
        Integer falling_a = 1, falling_b = 1;
        for (unsigned long i = 0; i < tu; ++i) falling_a *= Integer(a - i);
        for (unsigned long i = 0; i < uu; ++i) falling_b *= Integer(b - i);
        Rational term = Rational(binomial(static_cast<unsigned long>(k), tu) *
                                 falling_a * falling_b);
        if (uu & 1ul) term = -term;
        Rational pp = 1, qq = 1;
        for (unsigned long i = 0; i < a - tu; ++i) pp *= p;
        for (unsigned long i = 0; i < b - uu; ++i) qq *= q;
        acc += term * pp * qq;
    }
    return acc;
}

std::vector<uint32_t> masks_of_size(size_t leaves, int k) {
    std::vector<uint32_t> out;
    uint32_t top = leaves >= 32 ? 0xffffffffu : ((1u << leaves) - 1u);
    for (uint32_t a = 0; a <= top; ++a)
        if (std::popcount(a) == k) out.push_back(a);
    return out;
}

} // namespace

CylinderDerivativeReport cylinder_derivative_check(int m, int n, int k,
                                                   const StarLaw& star,
                                                   const Rational& p,
                                                   long max_entry) {
    if (k < 0) throw SpecError("negative derivative order");
    if (p < 0 || p >= 1) throw SpecError("identity needs p in [0,1)");
    size_t leaves = cone_leaf_count(m, n);
    StarSupport ss = star_support(star);
    auto star_masses = star.masses_exact();

    // Right-hand side accumulated per observed leaf-value vector.
    std::map<std::vector<long>, Rational> rhs_acc;
    auto a_masks = masks_of_size(leaves, k);
    for (uint32_t a : a_masks) {
        for_each_config(ss, leaves, [&](const LeafConfig& cfg, const Rational& w,
                                        int ones) {
            // 1{X = 0 on A}: unforced leaf values vanish exactly when u = 0.
            for (size_t v = 0; v < leaves; ++v)
                if (((a >> v) & 1u) && cfg.u[v]) return;
            Rational weight = w;
            for (int i = 0; i < ones; ++i) weight *= p;
            for (size_t i = 0; i < leaves - static_cast<size_t>(ones); ++i)
                weight *= (1 - p);
            std::vector<long> vals(leaves);
            for_each_subset(a, [&](uint32_t b, int parity) {
                for (size_t v = 0; v < leaves; ++v) {
                    bool forced = (b >> v) & 1u;
                    vals[v] = forced ? cfg.xstar[v] : cfg.xstar[v] * cfg.u[v];
                }
                if (parity)
                    rhs_acc[vals] -= weight;
                else
                    rhs_acc[vals] += weight;
            });
        });
    }
    Rational scale = Rational(factorial(static_cast<unsigned long>(k)));
    for (int i = 0; i < k; ++i) scale /= (1 - p);

    CylinderDerivativeReport rep;
    std::vector<long> target(leaves, 0);
    while (true) {
        ++rep.targets;
        // Left side: the cylinder probability is c * p^d (1-p)^(leaves-d).
        Rational c = 1;
        unsigned long d = 0;
        for (size_t v = 0; v < leaves; ++v) {
            long x = target[v];
            if (x > 0) {
                ++d;
                c *= (x < static_cast<long>(star_masses.size()))
                         ? star_masses[static_cast<size_t>(x)]
                         : Rational(0);
            }
        }
        Rational lhs = c * mixed_power_derivative(d, leaves - d, k, p);
        auto it = rhs_acc.find(target);
        Rational rhs = it == rhs_acc.end() ? Rational(0) : scale * it->second;
        if (lhs != rhs) ++rep.mismatches;

        size_t pos = 0;
        while (pos < leaves && ++target[pos] > max_entry) {
            target[pos] = 0;
            ++pos;
        }
        if (pos == leaves) break;
    }
    rep.all_equal = rep.mismatches == 0;
    return rep;
}

namespace {

// Checks one (config, A) pair against every root target with a nonzero
// mixed difference, updating the violation counters.
void structure_check_one(int m, int n, const LeafConfig& cfg, uint32_t a_mask,
                         ConeStructureReport& rep) {
    int ka = std::popcount(a_mask);
    if (ka == 0) return;
    size_t leaves = cfg.xstar.size();

    // Root value for every forcing subset, and the candidate targets.
    std::map<uint32_t, long> root_of;
    std::vector<long> candidates;
    for_each_subset(a_mask, [&](uint32_t b, int) {
        long r = eval_root(m, n, cfg, b);
        root_of[b] = r;
        candidates.push_back(r);
    });
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    auto orig = eval_cone(m, n, cfg, 0);
    long forced_root = root_of[a_mask];
    ConeSets cs = cone_sets(m, n, a_mask);

    for (long target : candidates) {
        long nabla = 0;
        for_each_subset(a_mask, [&](uint32_t b, int parity) {
            if (root_of[b] == target) nabla += parity ? -1 : 1;
        });
        if (nabla == 0) continue;
        ++rep.active;

        // value_bound: X(v) <= n + target - level on the whole cone.
        for (int l = 0; l <= n; ++l)
            for (long x : orig[static_cast<size_t>(l)])
                if (x > n + target - l) ++rep.value_bound_violations;

        // forced_floor: the fully forced root dominates max(target, 1).
        if (forced_root < std::max<long>(target, 1)) ++rep.forced_floor_violations;

        // child_split: some tuple with shifted sum `target` works childwise.
        if (n >= 1) {
            size_t sub = leaves / static_cast<size_t>(m);
            std::vector<LeafConfig> child_cfg(static_cast<size_t>(m));
            std::vector<uint32_t> child_mask(static_cast<size_t>(m), 0);
            for (int j = 0; j < m; ++j) {
                auto& cc = child_cfg[static_cast<size_t>(j)];
                cc.xstar.assign(cfg.xstar.begin() + static_cast<long>(sub) * j,
                                cfg.xstar.begin() + static_cast<long>(sub) * (j + 1));
                cc.u.assign(cfg.u.begin() + static_cast<long>(sub) * j,
                            cfg.u.begin() + static_cast<long>(sub) * (j + 1));
                child_mask[static_cast<size_t>(j)] =
                    (a_mask >> (static_cast<size_t>(j) * sub)) &
                    ((sub >= 32 ? 0u : (1u << sub)) - 1u);
            }
            bool found = false;
            std::vector<long> tuple(static_cast<size_t>(m), 0);
            long cap = target + 1;
            while (!found) {
                long sum = 0;
                for (long x : tuple) sum += x;
                if (std::max<long>(sum - 1, 0) == target) {
                    bool all = true;
                    for (int j = 0; j < m && all; ++j)
                        all = nabla_root_indicator(
                                  m, n - 1, child_cfg[static_cast<size_t>(j)],
                                  child_mask[static_cast<size_t>(j)],
                                  tuple[static_cast<size_t>(j)]) != 0;
                    found = all;
                }
                size_t pos = 0;
                while (pos < tuple.size() && ++tuple[pos] > cap) {
                    tuple[pos] = 0;
                    ++pos;
                }
                if (pos == tuple.size()) break;
            }
            if (!found) ++rep.child_split_violations;
        }

        // frontier_sum: forced root decomposes over L, A and |O|.
        long sum = -static_cast<long>(cs.O.size());
        for (const auto& [l, j] : cs.L)
            sum += orig[static_cast<size_t>(l)][static_cast<size_t>(j)];
        for (size_t v = 0; v < leaves; ++v)
            if ((a_mask >> v) & 1u) sum += cfg.xstar[v];
        if (forced_root != sum) ++rep.frontier_sum_violations;
    }

    // frontier_size is target-independent.
    std::vector<long> per_level(static_cast<size_t>(n) + 1, 0);
    for (const auto& [l, j] : cs.L) {
        (void)j;
        ++per_level[static_cast<size_t>(l)];
    }
    for (long c : per_level)
        if (c > static_cast<long>(m - 1) * ka) ++rep.frontier_size_violations;
}

void finalize(ConeStructureReport& rep) {
    rep.ok = rep.value_bound_violations == 0 && rep.forced_floor_violations == 0 &&
             rep.child_split_violations == 0 && rep.frontier_sum_violations == 0 &&
             rep.frontier_size_violations == 0;
}

} // namespace

ConeStructureReport cone_structure_check_exhaustive(int m, int n, const StarLaw& star) {
    size_t leaves = cone_leaf_count(m, n);
    StarSupport ss = star_support(star);
    ConeStructureReport rep;
    uint32_t top = (1u << leaves) - 1u;
    for_each_config(ss, leaves, [&](const LeafConfig& cfg, const Rational&, int) {
        ++rep.configs;
        for (uint32_t a = 1; a <= top; ++a) structure_check_one(m, n, cfg, a, rep);
    });
    finalize(rep);
    return rep;
}

ConeStructureReport cone_structure_check_randomized(int m, int n, const StarLaw& star,
                                                    size_t trials, uint64_t seed) {
    size_t leaves = cone_leaf_count(m, n);
    StarSupport ss = star_support(star);
    std::vector<double> cum;
    double acc = 0;
    for (const auto& q : ss.masses) {
        acc += q.get_d();
        cum.push_back(acc);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    uint32_t top = (1u << leaves) - 1u;
    ConeStructureReport rep;
    LeafConfig cfg;
    cfg.xstar.resize(leaves);
    cfg.u.resize(leaves);
    for (size_t t = 0; t < trials; ++t) {
        for (size_t v = 0; v < leaves; ++v) {
            double u = unif(rng);
            size_t si = static_cast<size_t>(
                std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (si >= ss.values.size()) si = ss.values.size() - 1;
            cfg.xstar[v] = ss.values[si];
            cfg.u[v] = static_cast<uint8_t>(rng() & 1u);
        }
        uint32_t a = static_cast<uint32_t>(rng()) & top;
        if (a == 0) a = 1u << (rng() % leaves);
        ++rep.configs;
        structure_check_one(m, n, cfg, a, rep);
    }
    finalize(rep);
    return rep;
}

Rational spine_weight_sum(int m, int n, int k) {
    size_t leaves = cone_leaf_count(m, n);
    Rational sum = 0;
    for (uint32_t a : masks_of_size(leaves, k)) {
        ConeSets cs = cone_sets(m, n, a);
        Integer mo;
        mpz_ui_pow_ui(mo.get_mpz_t(), static_cast<unsigned long>(m), cs.O.size());
        sum += Rational(1, mo);
    }
    sum.canonicalize();
    return sum;
}

bool spine_weight_bound_ok(int m, int n, int k) {
    Rational sum = spine_weight_sum(m, n, k);
    unsigned long km = 1;
    for (int i = 0; i < m; ++i) km *= static_cast<unsigned long>(k);
    Integer cap;
    mpz_ui_pow_ui(cap.get_mpz_t(), static_cast<unsigned long>(m), km);
    Rational bound(cap);
    if (k >= 2) {
        Integer np;
        mpz_ui_pow_ui(np.get_mpz_t(), static_cast<unsigned long>(n),
                      static_cast<unsigned long>(k - 1));
        bound *= Rational(np);
    }
    return sum <= bound;
}

bool zero_derivative_bound_check(int m, int n, int k, const StarLaw& star,
                                 const Rational& p) {
    if (p < 0 || p >= 1) throw SpecError("bound needs p in [0,1)");
    Rational lhs = zero_mass_derivative(m, star, n, k, p);
    if (lhs < 0) lhs = -lhs;

    size_t leaves = cone_leaf_count(m, n);
    StarSupport ss = star_support(star);
    Rational prob_sum = 0;
    for (uint32_t a : masks_of_size(leaves, k)) {
        for_each_config(ss, leaves, [&](const LeafConfig& cfg, const Rational& w,
                                        int ones) {
            for (size_t v = 0; v < leaves; ++v)
                if (((a >> v) & 1u) && cfg.u[v]) return;
            if (nabla_root_indicator(m, n, cfg, a, 0) == 0) return;
            Rational weight = w;
            for (int i = 0; i < ones; ++i) weight *= p;
            for (size_t i = 0; i < leaves - static_cast<size_t>(ones); ++i)
                weight *= (1 - p);
            prob_sum += weight;
        });
    }
    Rational scale = Rational(factorial(static_cast<unsigned long>(k)));
    for (int i = 0; i < k; ++i) scale = scale * 2 / (1 - p);
    return lhs <= scale * prob_sum;
}

} // namespace drx
