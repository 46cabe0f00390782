// Model description: branching arity m, seed law, mixing probability p,
// plus classification of the induced recursion and its critical point.
#pragma once

#include <string>

#include "drx/dist.hpp"
#include "drx/star_law.hpp"

namespace drx {

struct ModelSpec {
    int m = 2;
    StarLaw star = StarLaw::dirac(2);
    Rational p = Rational(0);        // valid when p_exact
    double p_float = 0.0;
    bool p_exact = true;

    double p_value() const { return p_exact ? p.get_d() : p_float; }
    bool exact_capable() const { return star.exact() && p_exact; }
    void validate() const;
};

// Reads the JSON document {"m": ..., "star": {...}, "p": ...}.
ModelSpec model_from_json_file(const std::string& path);
ModelSpec model_from_json_text(const std::string& text);
std::string model_to_json_text(const ModelSpec& spec);

// Initial law (1-p) delta_0 + p star.
ExactDist initial_dist_exact(const ModelSpec& spec);
FloatDist initial_dist_float(const ModelSpec& spec);

enum class Criticality { subcritical, critical, supercritical };
const char* criticality_name(Criticality c);

// p where E(m^X0) = (m-1) E(X0 m^X0), i.e. 1 / (1 + E(((m-1)X0* - 1) m^X0*)).
// Divergent seed families get 0 by convention.
Rational critical_p_exact(int m, const StarLaw& star);
double critical_p(int m, const StarLaw& star);

// Classification at the model's own p. p = 0 is always subcritical;
// a divergent seed with p > 0 is supercritical. Float comparisons use
// a symmetric dead band around zero.
Criticality classify(const ModelSpec& spec);

// Sign of E(m^X) - (m-1) E(X m^X) for an explicit law.
Rational criticality_gap_exact(const ExactDist& d, int m);
double criticality_gap_float(const FloatDist& d, int m);

inline constexpr double kFloatSignDeadBand = 1e-9;
int sign_with_dead_band(double x, double band = kFloatSignDeadBand);

} // namespace drx
