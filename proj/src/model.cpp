#include "drx/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace drx {

using nlohmann::json;

void ModelSpec::validate() const {
    if (m < 2) throw SpecError("m must be at least 2");
    double pv = p_value();
    if (p_exact) {
        if (p < 0 || p > 1) throw SpecError("p must lie in [0,1]");
    } else if (!(pv >= 0.0 && pv <= 1.0)) {
        throw SpecError("p must lie in [0,1]");
    }
    if (m == 2) {
        double c1 = star.exact() ? star.c1_exact().get_d() : star.c1_float(m);
        if (c1 <= 0.0)
            throw SpecError("m=2 requires positive mass of the seed on {2,3,...}");
    }
}

namespace {

Rational rational_from_json(const json& v, const char* what) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    if (v.is_number_float()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return parse_rational(os.str());
    }
    throw SpecError(std::string("expected number or rational string for ") + what);
}

StarLaw star_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw SpecError("star law needs a kind");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "dirac") {
        const json& k = j.contains("k0") ? j.at("k0") : j.at("k");
        return StarLaw::dirac(k.get<long>());
    }
    if (kind == "finite") {
        std::vector<std::pair<long, Rational>> atoms;
        for (const auto& [key, val] : j.at("masses").items())
            atoms.emplace_back(std::stol(key), rational_from_json(val, "seed mass"));
        return StarLaw::finite(std::move(atoms));
    }
    if (kind == "power_geometric") {
        double alpha = j.at("alpha").get<double>();
        long k_max = j.contains("k_max") ? j.at("k_max").get<long>()
                                         : j.at("K_max").get<long>();
        return StarLaw::power_geometric(alpha, k_max);
    }
    throw SpecError("unknown star kind: " + kind);
}

} // namespace

ModelSpec model_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SpecError(std::string("bad model JSON: ") + e.what());
    }
    ModelSpec spec;
    try {
        spec.m = j.at("m").get<int>();
        spec.star = star_from_json(j.at("star"));
        const json& p = j.at("p");
        if (p.is_number_float()) {
            spec.p_exact = false;
            spec.p_float = p.get<double>();
        } else {
            spec.p = rational_from_json(p, "p");
            spec.p_exact = true;
        }
    } catch (const json::exception& e) {
        throw SpecError(std::string("bad model JSON: ") + e.what());
    }
    spec.validate();
    return spec;
}

ModelSpec model_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str());
}

std::string model_to_json_text(const ModelSpec& spec) {
    json j;
    j["m"] = spec.m;
    json star;
    switch (spec.star.kind()) {
        case StarKind::dirac:
            star["kind"] = "dirac";
            star["k0"] = spec.star.max_value();
            break;
        case StarKind::finite: {
            star["kind"] = "finite";
            json masses = json::object();
            for (const auto& [k, q] : spec.star.finite_masses())
                masses[std::to_string(k)] = format_rational(q);
            star["masses"] = masses;
            break;
        }
        case StarKind::power_geometric:
            star["kind"] = "power_geometric";
            star["alpha"] = spec.star.alpha();
            star["k_max"] = spec.star.max_value();
            break;
    }
    j["star"] = star;
    if (spec.p_exact)
        j["p"] = format_rational(spec.p);
    else
        j["p"] = spec.p_float;
    return j.dump(2);
}

ExactDist initial_dist_exact(const ModelSpec& spec) {
    if (!spec.exact_capable())
        throw SpecError("model is not exactly representable");
    auto star = spec.star.masses_exact();
    std::vector<std::pair<long, Rational>> atoms;
    atoms.emplace_back(0, 1 - spec.p);
    for (size_t k = 1; k < star.size(); ++k)
        if (star[k] != 0) atoms.emplace_back(static_cast<long>(k), spec.p * star[k]);
    return ExactDist::from_rationals(atoms);
}

FloatDist initial_dist_float(const ModelSpec& spec) {
    auto star = spec.star.masses_float(spec.m);
    double p = spec.p_value();
    std::vector<double> m(star.size(), 0.0);
    if (m.empty()) m.resize(1, 0.0);
    m[0] = 1.0 - p;
    for (size_t k = 1; k < star.size(); ++k) m[k] += p * star[k];
    return FloatDist(std::move(m));
}

const char* criticality_name(Criticality c) {
    switch (c) {
        case Criticality::subcritical: return "subcritical";
        case Criticality::critical: return "critical";
        case Criticality::supercritical: return "supercritical";
    }
    return "?";
}

Rational critical_p_exact(int m, const StarLaw& star) {
    if (!star.exact())
        throw SpecError("exact critical point needs an exact seed law");
    if (m == 2 && star.c1_exact() == 0)
        throw DegenerateStructureError(
            "m=2 needs seed mass above 1 for a critical point below 1");
    // On {1,2,...} every term ((m-1)k - 1) m^k is nonnegative, and the c1
    // guard above forces at least one strictly positive term, so e > 0.
    Rational e = 0;  // E(((m-1) X* - 1) m^X*)
    auto masses = star.masses_exact();
    Integer mk = 1;
    for (size_t k = 0; k < masses.size(); ++k) {
        mk = (k == 0) ? Integer(1) : mk * m;
        if (masses[k] == 0) continue;
        e += masses[k] * Rational(Integer((m - 1) * static_cast<long>(k) - 1) * mk);
    }
    return Rational(1) / (1 + e);
}

double critical_p(int m, const StarLaw& star) {
    if (star.exact()) return critical_p_exact(m, star).get_d();
    if (star.divergent(m)) return 0.0;
    auto masses = star.masses_float(m);
    double e = 0, mk = 1;
    for (size_t k = 1; k < masses.size(); ++k) {
        mk *= m;
        e += masses[k] * ((m - 1) * static_cast<double>(k) - 1) * mk;
    }
    return 1.0 / (1.0 + e);
}

Rational criticality_gap_exact(const ExactDist& d, int m) {
    // E(m^X) - (m-1) E(X m^X), computed termwise over the support.
    if (d.tail_numerator() != 0)
        throw PreconditionError("criticality gap undefined on a lumped-tail law");
    Rational acc = 0;
    Integer mk = 1;
    for (long k = 0; k <= d.max_value(); ++k) {
        if (k > 0) mk *= m;
        const Integer& n = d.numerator(static_cast<size_t>(k));
        if (n == 0) continue;
        acc += make_ratio(n, d.denominator()) * Rational(mk * Integer(1 - (m - 1) * k));
    }
    return acc;
}

double criticality_gap_float(const FloatDist& d, int m) {
    double acc = 0, mk = 1;
    for (long k = 0; k <= d.max_value(); ++k) {
        if (k > 0) mk *= m;
        acc += d.mass(k) * mk * (1.0 - (m - 1) * static_cast<double>(k));
    }
    return acc;
}

int sign_with_dead_band(double x, double band) {
    if (x > band) return 1;
    if (x < -band) return -1;
    return 0;
}

Criticality classify(const ModelSpec& spec) {
    double pv = spec.p_value();
    bool p_zero = spec.p_exact ? (spec.p == 0) : (pv == 0.0);
    if (p_zero) return Criticality::subcritical;
    if (spec.star.divergent(spec.m)) return Criticality::supercritical;

    if (spec.exact_capable()) {
        Rational gap = criticality_gap_exact(initial_dist_exact(spec), spec.m);
        int s = gap > 0 ? 1 : (gap < 0 ? -1 : 0);
        if (s > 0) return Criticality::subcritical;
        if (s < 0) return Criticality::supercritical;
        return Criticality::critical;
    }
    double gap = criticality_gap_float(initial_dist_float(spec), spec.m);
    int s = sign_with_dead_band(gap);
    if (s > 0) return Criticality::subcritical;
    if (s < 0) return Criticality::supercritical;
    return Criticality::critical;
}

} // namespace drx
