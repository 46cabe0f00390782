// Dependency-cone calculus on the reversed m-regular tree: forced leaf
// configurations, discrete mixed differences over leaf subsets, the exact
// derivative identity for leaf-cylinder probabilities, and the structural
// facts about forced values, frontier decompositions, and spine weights.
#pragma once

#include <cstdint>
#include <vector>

#include "drx/dist.hpp"
#include "drx/poly.hpp"
#include "drx/star_law.hpp"

namespace drx {

// One realization of the leaf inputs of a depth-n cone: seed values
// xstar[v] >= 1 and Bernoulli marks u[v], for the m^n leaves in order.
struct LeafConfig {
    std::vector<long> xstar;
    std::vector<uint8_t> u;
};

size_t cone_leaf_count(int m, int n);

// X at every vertex: out[level][index], level 0 = leaves, level n = root.
// Leaves in force_mask take xstar[v] (the mark is overridden to 1); other
// leaves take xstar[v] * u[v]. Internal vertices apply the shifted-sum rule.
std::vector<std::vector<long>> eval_cone(int m, int n, const LeafConfig& cfg,
                                         uint32_t force_mask);
long eval_root(int m, int n, const LeafConfig& cfg, uint32_t force_mask);

// Mixed difference of the root indicator over subsets of A:
//   sum_{B subset A} (-1)^(|A|-|B|) 1{ root value under force B == target }.
long nabla_root_indicator(int m, int n, const LeafConfig& cfg, uint32_t a_mask,
                          long target);

// Ancestor set O (strict ancestors of A-leaves up to the root) and frontier
// set L (inputs of O-vertices that are neither forced paths nor A-leaves).
struct ConeSets {
    std::vector<std::pair<int, long>> O, L;   // (level, index), sorted
};
ConeSets cone_sets(int m, int n, uint32_t a_mask);

// Exact derivative identity for leaf cylinders: for |A| = k,
//   d^k/dp^k P(X(v) = x_v for all leaves v)
//     = k!/(1-p)^k * sum_{|A|=k} E( 1{X=0 on A} nabla^A 1{leaf values = x} ).
// Both sides are evaluated exactly for every target vector with entries
// in {0..max_entry}; mismatches are counted.
struct CylinderDerivativeReport {
    size_t targets = 0;
    size_t mismatches = 0;
    bool all_equal = false;
};
CylinderDerivativeReport cylinder_derivative_check(int m, int n, int k,
                                                   const StarLaw& star,
                                                   const Rational& p,
                                                   long max_entry);

// Structural checks performed on every (config, A, target) with a nonzero
// mixed difference of the root indicator:
//   value_bound:   X(v) <= n + target - level(v) on the whole cone
//   forced_floor:  root value under force A >= max(target, 1)
//   child_split:   some admissible child tuple has nonzero differences
//   frontier_sum:  forced root = sum of frontier values + forced seeds - |O|
//   frontier_size: |L at each level| <= (m-1) |A|
struct ConeStructureReport {
    size_t configs = 0;
    size_t active = 0;        // (config, A, target) triples with nonzero difference
    size_t value_bound_violations = 0;
    size_t forced_floor_violations = 0;
    size_t child_split_violations = 0;
    size_t frontier_sum_violations = 0;
    size_t frontier_size_violations = 0;
    bool ok = false;
};
ConeStructureReport cone_structure_check_exhaustive(int m, int n, const StarLaw& star);
ConeStructureReport cone_structure_check_randomized(int m, int n, const StarLaw& star,
                                                    size_t trials, uint64_t seed);

// sum over |A| = k of m^(-|O|), exactly, and the coarse bound
// m^(k^m) n^((k-1)^+) it must respect.
Rational spine_weight_sum(int m, int n, int k);
bool spine_weight_bound_ok(int m, int n, int k);

// Derivative magnitude bound implied by the identity above:
//   |d^k/dp^k P(X_n = 0)| <= 2^k k!/(1-p)^k
//                            * sum_{|A|=k} P(nabla^A 1{root=0} != 0, X=0 on A).
bool zero_derivative_bound_check(int m, int n, int k, const StarLaw& star,
                                 const Rational& p);

} // namespace drx
