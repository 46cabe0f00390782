// drx: exact and floating-point computations for max-shifted branching
// recursions. Every command reads a model JSON, writes CSV or JSON, and is
// deterministic given its configuration and seed.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drx/engine.hpp"
#include "drx/mgfdelta.hpp"
#include "drx/model.hpp"
#include "drx/observables.hpp"
#include "drx/polydist.hpp"
#include "drx/report.hpp"
#include "drx/verify.hpp"

namespace {

using namespace drx;

struct IoOpts {
    std::string out;
    std::string format = "csv";
};

void emit_text(const std::string& text, const IoOpts& io) {
    if (io.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(io.out);
    if (!f) throw SpecError("cannot open output file: " + io.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit(const Table& t, const IoOpts& io) {
    std::ostringstream buf;
    if (io.format == "json")
        write_json(buf, t);
    else
        write_csv(buf, t);
    emit_text(buf.str(), io);
}

std::string rat(const Rational& q) { return format_rational(q); }
std::string flt(const Rational& q) { return fmt_double(to_double(q)); }
std::string flt(double x) { return fmt_double(x); }

std::string p_string(const ModelSpec& spec) {
    return spec.p_exact ? rat(spec.p) : flt(spec.p_float);
}

// "a:b:steps" -> the steps+1 evenly spaced rationals from a to b.
std::vector<Rational> parse_grid(const std::string& text) {
    size_t c1 = text.find(':');
    size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw SpecError("grid must look like a:b:steps, got \"" + text + "\"");
    Rational a = parse_rational(text.substr(0, c1));
    Rational b = parse_rational(text.substr(c1 + 1, c2 - c1 - 1));
    long steps;
    try {
        steps = std::stol(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw SpecError("grid step count must be an integer, got \"" + text + "\"");
    }
    if (steps < 1) throw SpecError("grid needs at least one step");
    std::vector<Rational> grid;
    grid.reserve(static_cast<size_t>(steps) + 1);
    for (long j = 0; j <= steps; ++j)
        grid.push_back(a + (b - a) * make_ratio(j, steps));
    return grid;
}

// "value:mass,value:mass,..." -> mass vector indexed by value.
std::vector<Rational> parse_law(const std::string& text) {
    std::vector<std::pair<long, Rational>> atoms;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw SpecError("law entries must look like value:mass, got \"" + item + "\"");
        long k;
        try {
            k = std::stol(item.substr(0, colon));
        } catch (const std::exception&) {
            throw SpecError("law entry has a bad value: \"" + item + "\"");
        }
        if (k < 0) throw SpecError("law values must be nonnegative");
        atoms.emplace_back(k, parse_rational(item.substr(colon + 1)));
    }
    if (atoms.empty()) throw SpecError("empty law");
    long top = 0;
    for (const auto& [k, q] : atoms) top = std::max(top, k);
    std::vector<Rational> masses(static_cast<size_t>(top) + 1, Rational(0));
    Rational total = 0;
    for (const auto& [k, q] : atoms) {
        if (q < 0) throw SpecError("law masses must be nonnegative");
        if (masses[static_cast<size_t>(k)] != 0)
            throw SpecError("duplicate law value " + std::to_string(k));
        masses[static_cast<size_t>(k)] = q;
        total += q;
    }
    if (total != 1) throw SpecError("law masses must sum to 1, got " + rat(total));
    return masses;
}

ExactDist law_from_masses(const std::vector<Rational>& masses) {
    std::vector<std::pair<long, Rational>> atoms;
    for (size_t k = 0; k < masses.size(); ++k)
        if (masses[k] != 0) atoms.emplace_back(static_cast<long>(k), masses[k]);
    return ExactDist::from_rationals(atoms);
}

void require_exact(const ModelSpec& spec, const std::string& what) {
    if (!spec.exact_capable())
        throw SpecError(what + " needs a finite seed law and a rational p");
}

void add_model_meta(Table& t, const ModelSpec& spec) {
    t.add_meta("m", std::to_string(spec.m));
    t.add_meta("p", p_string(spec));
}

int run_iterate(const ModelSpec& spec, const std::string& mode, int n,
                EngineOptions eo, const IoOpts& io) {
    Table t;
    t.add_meta("command", "iterate");
    add_model_meta(t, spec);
    t.add_meta("mode", mode);
    t.add_meta("n", std::to_string(n));
    t.add_meta("tail_policy", tail_policy_name(eo.tail_policy));
    if (mode == "exact") {
        require_exact(spec, "exact mode");
        auto orbit = iterate_exact(initial_dist_exact(spec), spec.m, n, eo);
        t.columns = {"n", "k", "mass", "mass_float"};
        for (size_t g = 0; g < orbit.size(); ++g)
            for (long k = 0; k <= orbit[g].max_value(); ++k) {
                Rational q = orbit[g].mass(k);
                if (q == 0) continue;
                t.add_row({std::to_string(g), std::to_string(k), rat(q), flt(q)});
            }
        if (orbit.back().tail_mass() != 0)
            t.add_meta("lumped_tail", rat(orbit.back().tail_mass()));
    } else {
        auto orbit = iterate_float(initial_dist_float(spec), spec.m, n, eo);
        t.columns = {"n", "k", "mass"};
        for (size_t g = 0; g < orbit.size(); ++g)
            for (long k = 0; k <= orbit[g].max_value(); ++k) {
                double q = orbit[g].mass(k);
                if (q == 0) continue;
                t.add_row({std::to_string(g), std::to_string(k), flt(q)});
            }
        if (orbit.back().tail() != 0)
            t.add_meta("lumped_tail", flt(orbit.back().tail()));
    }
    emit(t, io);
    return 0;
}

int run_free_energy(ModelSpec spec, const std::string& mode, int N,
                    const std::string& p_grid, EngineOptions eo, const IoOpts& io) {
    Table t;
    t.add_meta("command", "free-energy");
    t.add_meta("m", std::to_string(spec.m));
    t.add_meta("N", std::to_string(N));
    t.add_meta("mode", mode);
    if (!p_grid.empty()) {
        // Bracket endpoints at depth N across a p grid.
        auto grid = parse_grid(p_grid);
        t.columns = {"p", "L", "U", "S", "L_float", "U_float", "S_float"};
        for (const Rational& p : grid) {
            if (p < 0 || p > 1) throw SpecError("grid p values must lie in [0,1]");
            if (mode == "exact") {
                spec.p = p;
                spec.p_exact = true;
                require_exact(spec, "exact mode");
                auto rows = free_energy_table_exact(spec, N, eo);
                const auto& r = rows.back();
                t.add_row({rat(p), rat(r.L), rat(r.U), rat(r.partial_sum),
                           flt(r.L), flt(r.U), flt(r.partial_sum)});
            } else {
                spec.p_float = p.get_d();
                spec.p_exact = false;
                auto rows = free_energy_table_float(spec, N, eo);
                const auto& r = rows.back();
                t.add_row({flt(p), "", "", "", flt(r.L), flt(r.U), flt(r.partial_sum)});
            }
        }
    } else {
        t.add_meta("p", p_string(spec));
        if (mode == "exact") {
            require_exact(spec, "exact mode");
            t.columns = {"N", "L", "U", "S", "mean", "mass0",
                         "L_float", "U_float", "S_float", "mean_float", "mass0_float"};
            for (const auto& r : free_energy_table_exact(spec, N, eo))
                t.add_row({std::to_string(r.N), rat(r.L), rat(r.U), rat(r.partial_sum),
                           rat(r.mean), rat(r.mass0), flt(r.L), flt(r.U),
                           flt(r.partial_sum), flt(r.mean), flt(r.mass0)});
        } else {
            t.columns = {"N", "L", "U", "S", "mean", "mass0"};
            for (const auto& r : free_energy_table_float(spec, N, eo))
                t.add_row({std::to_string(r.N), flt(r.L), flt(r.U), flt(r.partial_sum),
                           flt(r.mean), flt(r.mass0)});
        }
    }
    emit(t, io);
    return 0;
}

int run_classify(const ModelSpec& spec, int n, const IoOpts& io) {
    Table t;
    t.add_meta("command", "classify");
    add_model_meta(t, spec);
    t.add_meta("critical_p", spec.star.exact()
                                 ? rat(critical_p_exact(spec.m, spec.star))
                                 : flt(critical_p(spec.m, spec.star)));
    t.add_meta("classification", criticality_name(classify(spec)));
    t.columns = {"n", "G", "G_float", "sign"};
    if (spec.exact_capable()) {
        auto orbit = iterate_exact(initial_dist_exact(spec), spec.m, n);
        for (size_t g = 0; g < orbit.size(); ++g) {
            Rational gap = criticality_gap_exact(orbit[g], spec.m);
            int sign = gap > 0 ? 1 : (gap < 0 ? -1 : 0);
            t.add_row({std::to_string(g), rat(gap), flt(gap), std::to_string(sign)});
        }
    } else {
        auto orbit = iterate_float(initial_dist_float(spec), spec.m, n);
        for (size_t g = 0; g < orbit.size(); ++g) {
            double gap = criticality_gap_float(orbit[g], spec.m);
            t.add_row({std::to_string(g), "", flt(gap),
                       std::to_string(sign_with_dead_band(gap))});
        }
    }
    emit(t, io);
    return 0;
}

int run_derivative(const ModelSpec& spec, int n, int k, std::string p0_text,
                   bool poly, size_t budget, const IoOpts& io) {
    require_exact(spec, "derivative");
    Rational p0 = p0_text.empty() ? spec.p : parse_rational(p0_text);
    if (p0 < 0 || p0 > 1) throw SpecError("p0 must lie in [0,1]");
    if (k < 0 || n < 0) throw SpecError("n and k must be nonnegative");

    PolyDist d = PolyDist::initial(spec.m, spec.star);
    if (poly) {
        for (int g = 0; g < n; ++g) d.step(budget);
        nlohmann::json j;
        j["generation"] = n;
        j["variable"] = "p";
        nlohmann::json coeffs = nlohmann::json::array();
        RationalPoly mass0 = d.mass_poly(0);
        for (const auto& c : mass0.coeffs()) coeffs.push_back(rat(c));
        j["coeffs"] = coeffs;
        emit_text(j.dump(2), io);
        return 0;
    }

    Table t;
    t.add_meta("command", "derivative");
    add_model_meta(t, spec);
    t.add_meta("p0", rat(p0));
    t.columns = {"n", "k", "p0", "d_mass0", "d_mass0_float", "d_term", "d_term_float"};
    Rational mpow(spec.m);                 // m^(g+1), the series denominator
    for (int g = 0; g <= n; ++g) {
        // Jet of P(X_g = 0) at p0, pushed through the m-th power for the
        // series term P(X_g=0)^m / m^(g+1).
        Jet jz(static_cast<size_t>(k));
        for (int o = 0; o <= k; ++o)
            jz.a[static_cast<size_t>(o)] =
                d.mass_derivative_at(0, o, p0) / Rational(factorial(static_cast<unsigned long>(o)));
        Jet jp = jet_pow(jz, static_cast<unsigned>(spec.m));
        for (int o = 0; o <= k; ++o) {
            Rational dv = d.mass_derivative_at(0, o, p0);
            Rational term = jet_derivative(jp, static_cast<size_t>(o)) / mpow;
            t.add_row({std::to_string(g), std::to_string(o), rat(p0),
                       rat(dv), flt(dv), rat(term), flt(term)});
        }
        if (g < n) d.step(budget);
        mpow *= spec.m;
    }
    emit(t, io);
    return 0;
}

int run_delta_report(const ModelSpec& spec, int M, double delta, const IoOpts& io) {
    require_exact(spec, "delta-report");
    auto rows = delta_sweep(spec, M, delta);
    Table t;
    t.add_meta("command", "delta-report");
    add_model_meta(t, spec);
    t.add_meta("M", std::to_string(M));
    t.add_meta("delta", flt(delta));
    if (rows.empty()) t.add_meta("note", "no level satisfies the depth threshold");
    t.columns = {"i", "M", "s", "H", "Hp", "Hpp", "delta", "s_i",
                 "cs_ineq", "delta_lb", "recursion_ineq", "preconditions_met"};
    auto gated = [](bool applicable, bool ok) {
        return applicable ? std::string(ok ? "1" : "0") : std::string("n/a");
    };
    for (const auto& r : rows)
        t.add_row({std::to_string(r.i), std::to_string(r.M), flt(r.s), flt(r.H),
                   flt(r.Hp), flt(r.Hpp), flt(r.delta_value),
                   r.s_i_found ? flt(r.s_i) : "nan",
                   gated(r.pre_ok, r.cs_ok), gated(r.pre_ok, r.lb_ok),
                   gated(r.rec_applicable, r.rec_ok), r.pre_ok ? "1" : "0"});
    emit(t, io);
    return 0;
}

int run_verify(const VerifyOptions& vo, const std::string& suite,
               const std::string& golden_path, const IoOpts& io) {
    auto results = run_verify_suite(suite, vo);
    if (io.format == "csv") {
        Table t;
        t.add_meta("command", "verify");
        t.add_meta("suite", suite);
        t.add_meta("seed", std::to_string(vo.seed));
        t.columns = {"check", "status", "detail"};
        for (const auto& r : results)
            t.add_row({r.name, check_status_name(r.status), r.detail});
        emit(t, io);
    } else {
        emit_text(results_to_json(results), io);
    }
    int rc = all_passed(results) ? 0 : 1;
    if (!golden_path.empty()) {
        std::ifstream f(golden_path);
        if (!f) throw SpecError("cannot open golden file: " + golden_path);
        std::stringstream buf;
        buf << f.rdbuf();
        auto mismatches = compare_golden(results, buf.str());
        for (const auto& m : mismatches) std::cerr << "golden mismatch: " << m << "\n";
        if (!mismatches.empty()) rc = 1;
    }
    for (const auto& r : results)
        if (r.status == CheckStatus::fail)
            std::cerr << "failed check: " << r.name
                      << (r.detail.empty() ? "" : " (" + r.detail + ")") << "\n";
    return rc;
}

int run_mixture_derivative(int m, const std::string& mu_text,
                           const std::string& lambda_text, int N, int k,
                           const std::string& p_grid, size_t budget,
                           const IoOpts& io) {
    auto mu = parse_law(mu_text);
    auto lam = parse_law(lambda_text);
    Rational g_mu = criticality_gap_exact(law_from_masses(mu), m);
    Rational g_lam = criticality_gap_exact(law_from_masses(lam), m);
    if (g_mu != 0)
        throw SpecError("mu is not critical: criticality gap " + rat(g_mu));
    if (g_lam != 0)
        throw SpecError("lambda is not critical: criticality gap " + rat(g_lam));
    if (mu == lam)
        throw SpecError("mu and lambda must differ; the mixture is p-independent otherwise");
    auto grid = parse_grid(p_grid);
    for (const Rational& p : grid)
        if (p < 0 || p > 1) throw SpecError("grid p values must lie in [0,1]");

    Table t;
    t.add_meta("command", "mixture-derivative");
    t.add_meta("m", std::to_string(m));
    t.add_meta("mu", mu_text);
    t.add_meta("lambda", lambda_text);
    t.add_meta("order", std::to_string(k));
    t.columns = {"n", "p", "value", "value_float"};
    PolyDist d = PolyDist::mixture(m, mu, lam);
    for (int g = 0; g <= N; ++g) {
        for (const Rational& p : grid) {
            Rational v = d.mean_derivative_at(k, p);
            t.add_row({std::to_string(g), rat(p), rat(v), flt(v)});
        }
        if (g < N) d.step(budget);
    }
    emit(t, io);
    return 0;
}

int run_critical_law(int m, const std::string& support_text, const IoOpts& io) {
    std::vector<long> support;
    std::stringstream ss(support_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            support.push_back(std::stol(item));
        } catch (const std::exception&) {
            throw SpecError("support must be a comma-separated list of integers");
        }
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.empty() || support.front() < 0)
        throw SpecError("support must be nonempty with nonnegative values");

    // Criticality weight of an atom at k. A critical law balances the
    // positive and negative weights; values with weight zero are free mass.
    auto weight = [&](long k) -> Rational {
        Rational w(ipow(static_cast<unsigned long>(m), static_cast<unsigned long>(k)));
        return w * Rational(1 - (m - 1) * k);
    };
    std::vector<long> pos, zero, neg;
    for (long k : support) {
        Rational w = weight(k);
        (w > 0 ? pos : (w == 0 ? zero : neg)).push_back(k);
    }
    if (pos.empty() || neg.empty())
        throw DegenerateStructureError(
            "support cannot balance the criticality constraint; "
            "include 0 and some value >= 2");

    std::map<long, Rational> mass;
    for (long k : pos) mass[k] = Rational(1) / (Rational(static_cast<long>(pos.size())) * weight(k));
    for (long k : zero) mass[k] = Rational(1, static_cast<long>(zero.size()));
    for (long k : neg) mass[k] = Rational(1) / (Rational(static_cast<long>(neg.size())) * -weight(k));
    Rational total = 0;
    for (const auto& [k, q] : mass) total += q;
    for (auto& [k, q] : mass) q /= total;

    std::vector<std::pair<long, Rational>> atoms(mass.begin(), mass.end());
    Rational gap = criticality_gap_exact(ExactDist::from_rationals(atoms), m);
    if (gap != 0) throw std::logic_error("constructed law is not critical");

    Table t;
    t.add_meta("command", "critical-law");
    t.add_meta("m", std::to_string(m));
    t.add_meta("criticality_gap", rat(gap));
    t.columns = {"k", "mass", "mass_float"};
    for (const auto& [k, q] : atoms)
        t.add_row({std::to_string(k), rat(q), flt(q)});
    emit(t, io);
    return 0;
}

int run_sample(const ModelSpec& spec, int n, size_t samples, uint64_t seed,
               const IoOpts& io) {
    if (samples == 0) throw SpecError("need at least one sample");
    auto draws = sample_terminal(spec, n, samples, seed);
    std::map<long, size_t> hist;
    for (long d : draws) ++hist[d];
    Table t;
    t.add_meta("command", "sample");
    add_model_meta(t, spec);
    t.add_meta("n", std::to_string(n));
    t.add_meta("samples", std::to_string(samples));
    t.add_meta("seed", std::to_string(seed));
    t.columns = {"k", "count", "frequency"};
    for (const auto& [k, c] : hist)
        t.add_row({std::to_string(k), std::to_string(c),
                   flt(static_cast<double>(c) / static_cast<double>(samples))});
    emit(t, io);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and numeric analysis of max-shifted branching recursions"};
    app.require_subcommand(1);
    int rc = 0;

    std::string spec_path, mode = "exact", p_grid, p0_text, golden_path;
    std::string suite = "all", mu_text, lambda_text, support_text, policy = "reject";
    int n = 5, N = 8, k = 1, M = 8, arity = 2;
    double delta = 1.0 / 64;
    size_t budget = 0, samples = 100000;
    uint64_t seed = 20250814;
    bool poly = false;
    EngineOptions eo;
    IoOpts io;

    auto add_io = [&](CLI::App* c) {
        c->add_option("--out", io.out, "output path (stdout when omitted)");
        c->add_option("--format", io.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_spec = [&](CLI::App* c) {
        c->add_option("--spec", spec_path, "model JSON path")
            ->required()
            ->check(CLI::ExistingFile);
    };
    auto add_mode = [&](CLI::App* c) {
        c->add_option("--mode", mode, "arithmetic mode")
            ->check(CLI::IsMember({"exact", "float"}));
    };
    auto add_engine = [&](CLI::App* c) {
        c->add_option("--cap", eo.support_cap, "largest stored value");
        c->add_option("--tail-policy", policy, "what to do past the cap")
            ->check(CLI::IsMember({"reject", "lump_at_cap", "lump_at_zero"}));
        c->add_flag("--fft", eo.use_fft, "FFT convolution on the float path");
    };

    auto* c_iter = app.add_subcommand("iterate", "distributions of X_0..X_n");
    add_spec(c_iter);
    add_mode(c_iter);
    add_engine(c_iter);
    add_io(c_iter);
    c_iter->add_option("--n", n, "last generation");
    c_iter->callback([&] {
        eo.tail_policy = tail_policy_from_name(policy);
        rc = run_iterate(model_from_json_file(spec_path), mode, n, eo, io);
    });

    auto* c_fe = app.add_subcommand("free-energy",
                                    "bracket table L_N <= F <= U_N and partial sums");
    add_spec(c_fe);
    add_mode(c_fe);
    add_engine(c_fe);
    add_io(c_fe);
    c_fe->add_option("--N", N, "bracket depth");
    c_fe->add_option("--p-grid", p_grid, "a:b:steps sweep of the mixing probability");
    c_fe->callback([&] {
        eo.tail_policy = tail_policy_from_name(policy);
        rc = run_free_energy(model_from_json_file(spec_path), mode, N, p_grid, eo, io);
    });

    auto* c_cls = app.add_subcommand("classify",
                                     "critical point and criticality gap per generation");
    add_spec(c_cls);
    add_io(c_cls);
    c_cls->add_option("--n", n, "last generation");
    c_cls->callback([&] { rc = run_classify(model_from_json_file(spec_path), n, io); });

    auto* c_der = app.add_subcommand(
        "derivative", "exact p-derivatives of P(X_n=0) and of the series terms");
    add_spec(c_der);
    add_io(c_der);
    c_der->add_option("--n", n, "last generation");
    c_der->add_option("--k", k, "highest derivative order");
    c_der->add_option("--p0", p0_text, "evaluation point (default: the model p)");
    c_der->add_option("--budget", budget, "symbolic generation budget override");
    c_der->add_flag("--poly", poly, "emit the P(X_n=0) polynomial coefficients as JSON");
    c_der->callback([&] {
        rc = run_derivative(model_from_json_file(spec_path), n, k, p0_text, poly,
                            budget, io);
    });

    auto* c_dr = app.add_subcommand(
        "delta-report", "truncated generating-function report across levels");
    add_spec(c_dr);
    add_io(c_dr);
    c_dr->add_option("--M", M, "truncation horizon");
    c_dr->add_option("--delta", delta, "exponent offset, in (0, 1/(16m))");
    c_dr->callback([&] {
        rc = run_delta_report(model_from_json_file(spec_path), M, delta, io);
    });

    auto* c_ver = app.add_subcommand("verify", "named machine checks, grouped in suites");
    c_ver->add_option("--spec", spec_path, "model JSON path")->check(CLI::ExistingFile);
    add_io(c_ver);
    c_ver->add_option("--suite", suite, "suite name")
        ->check(CLI::IsMember(verify_suites()));
    c_ver->add_option("--seed", seed, "Monte Carlo seed");
    c_ver->add_option("--samples", samples, "Monte Carlo sample count");
    c_ver->add_option("--N", N, "orbit depth for depth-based checks");
    c_ver->add_option("--golden", golden_path, "expected statuses JSON to compare against")
        ->check(CLI::ExistingFile);
    c_ver->callback([&] {
        VerifyOptions vo;
        if (!spec_path.empty()) vo.spec = model_from_json_file(spec_path);
        vo.seed = seed;
        vo.samples = samples;
        vo.N = N;
        if (c_ver->count("--format") == 0) io.format = "json";
        rc = run_verify(vo, suite, golden_path, io);
    });

    auto* c_mix = app.add_subcommand(
        "mixture-derivative",
        "d^k/dp^k E(X_n) for the mixture (1-p) mu + p lambda of two critical laws");
    add_io(c_mix);
    c_mix->add_option("--m", arity, "branching arity")->check(CLI::Range(2, 16));
    c_mix->add_option("--mu", mu_text, "base law, value:mass comma list")->required();
    c_mix->add_option("--lambda", lambda_text, "mixed-in law, value:mass comma list")
        ->required();
    c_mix->add_option("--N", N, "last generation");
    c_mix->add_option("--k", k, "derivative order");
    c_mix->add_option("--p-grid", p_grid, "a:b:steps evaluation points");
    c_mix->add_option("--budget", budget, "symbolic generation budget override");
    c_mix->callback([&] {
        if (p_grid.empty()) p_grid = "0:1:10";
        if (c_mix->count("--N") == 0) N = arity == 2 ? 6 : 4;
        rc = run_mixture_derivative(arity, mu_text, lambda_text, N, k, p_grid, budget, io);
    });

    auto* c_crit = app.add_subcommand(
        "critical-law", "a critical law supported on the given values");
    add_io(c_crit);
    c_crit->add_option("--m", arity, "branching arity")->check(CLI::Range(2, 16));
    c_crit->add_option("--support", support_text, "comma list of values")->required();
    c_crit->callback([&] { rc = run_critical_law(arity, support_text, io); });

    auto* c_smp = app.add_subcommand("sample", "Monte Carlo histogram of X_n");
    add_spec(c_smp);
    add_io(c_smp);
    c_smp->add_option("--n", n, "generation to sample");
    c_smp->add_option("--samples", samples, "sample count");
    c_smp->add_option("--seed", seed, "RNG seed");
    c_smp->callback([&] {
        rc = run_sample(model_from_json_file(spec_path), n, samples, seed, io);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
