// Truncated-variable generating functions: H and derivatives, the Delta
// functional and its two equivalent formulas, the exact one-step identity,
// the s_i root equation, and the near-critical inequality battery.
#pragma once

#include "drx/engine.hpp"
#include "drx/poly.hpp"

namespace drx {

// X clipped at M - i: the level-i view of a horizon-M truncation scheme.
struct TruncatedLaw {
    ExactDist law;
    int i = 0;
    int M = 0;
};
TruncatedLaw truncate_law(const ExactDist& d, int i, int M);
FloatDist truncate_law_float(const FloatDist& d, int i, int M);

struct HDerivs {
    Rational H, Hp, Hpp;     // E s^X, E X s^(X-1), E X(X-1) s^(X-2)
};
HDerivs h_and_derivatives(const ExactDist& d, const Rational& s);

// f_s(k) = [1 - (s-1)k - ((m-1)(m-s)/m) k(k+1)] s^k; -f_s is nondecreasing
// on the relevant s range, which drives the comparison arguments.
Rational f_s_value(long k, const Rational& s, int m);
double f_s_value(long k, double s, int m);

// Delta via the generating function:
//   [H - s(s-1)H'] - ((m-1)(m-s)/m) [2sH' + s^2 H''].
Rational delta_by_definition(const ExactDist& d, const Rational& s, int m);
// Delta via the dual formula E f_s(X); equal to the above identically.
Rational delta_by_expectation(const ExactDist& d, const Rational& s, int m);

// Same quantities with s left symbolic; the dual formulas agree as
// polynomials, which certifies them at irrational s too.
RationalPoly delta_poly_by_definition(const ExactDist& d, int m);
RationalPoly delta_poly_by_expectation(const ExactDist& d, int m);

// s E(s^Y) = H(s)^m + (s-1) H(0)^m for Y = (X_1+...+X_m - 1)^+,
// returned as the difference polynomial (identically zero when it holds).
RationalPoly mgf_shift_identity_gap(const ExactDist& d, int m);

// E f_s(Y) = (m/s) Delta H^(m-1) - ((m-s)/s) [(m-1)sH' - H]^2 H^(m-2),
// for Y as above. Checked at a rational s and as a polynomial identity
// (both sides scaled by s).
struct OneStepIdentity {
    Rational lhs, rhs;
    bool equal = false;
};
OneStepIdentity one_step_identity_exact(const ExactDist& d, const Rational& s, int m);
bool one_step_identity_polynomial(const ExactDist& d, int m);

// Root of g(s) = E([(m-1)X - 1] s^X) on [1e-6, 64m]; g is nondecreasing,
// so bisection is certified by exact sign checks at the final bracket.
// Throws DegenerateStructureError when g has no sign change on the range.
struct SiRoot {
    double value = 0;
    double lo = 0, hi = 0;   // final bracket
};
SiRoot solve_si(const ExactDist& d, int m);
Rational g_eval(const ExactDist& d, const Rational& s, int m);

// Smallest admissible generation for the mass-at-one bound:
// n2 = floor(log(1/c1) / log(5/4)) + 1, computed in exact integers.
int n2_threshold(const StarLaw& star);

// P(X_n = 1) <= 1/2 for m = 2 and all n in [n_from, n_to], float path.
bool mass_at_one_bounded(const ModelSpec& spec, int n_from, int n_to,
                         const EngineOptions& opt = {});

// One row of the near-critical sweep at level i out of horizon M, with
// s = m^(1-delta). Preconditions: delta in (0, 1/(16m)), n2 <= i <= M-2,
// and s_i >= m - m delta^3. Conclusions checked when they hold:
//   cs:  [H - (m-1)sH']^2 <= 2 H(0) Delta
//   lb:  Delta >= delta^2 / 128
//   rec: Delta_{i+1} >= m^(-2 delta) Delta_i H_i^(m-1)
struct DeltaReport {
    int i = 0, M = 0;
    double s = 0;
    double H = 0, Hp = 0, Hpp = 0, delta_value = 0;
    double s_i = 0;
    bool s_i_found = false;
    bool pre_ok = false;
    bool cs_ok = false, lb_ok = false;
    double cs_lhs = 0, cs_rhs = 0, lb_rhs = 0;
    bool rec_applicable = false, rec_ok = false;
    double rec_lhs = 0, rec_rhs = 0;
};
std::vector<DeltaReport> delta_sweep(const ModelSpec& spec, int M, double delta,
                                     const EngineOptions& opt = {});

} // namespace drx
