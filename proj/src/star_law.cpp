#include "drx/star_law.hpp"

#include <algorithm>
#include <cmath>

namespace drx {

StarLaw StarLaw::dirac(long k0) {
    if (k0 < 1) throw SpecError("dirac seed must sit on {1,2,...}");
    StarLaw s;
    s.kind_ = StarKind::dirac;
    s.k0_ = k0;
    return s;
}

StarLaw StarLaw::finite(std::vector<std::pair<long, Rational>> masses) {
    if (masses.empty()) throw SpecError("finite seed law needs at least one atom");
    std::sort(masses.begin(), masses.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Rational total = 0;
    for (size_t i = 0; i < masses.size(); ++i) {
        auto& [k, q] = masses[i];
        if (k < 1) throw SpecError("seed law atom below 1");
        if (i > 0 && masses[i - 1].first == k) throw SpecError("duplicate seed atom");
        if (q <= 0) throw SpecError("seed mass must be positive");
        total += q;
    }
    if (total != 1) throw SpecError("seed masses must sum to 1, got " + format_rational(total));
    StarLaw s;
    s.kind_ = StarKind::finite;
    s.masses_ = std::move(masses);
    return s;
}

StarLaw StarLaw::power_geometric(double alpha, long k_max) {
    if (k_max < 1) throw SpecError("power_geometric needs k_max >= 1");
    if (!(alpha == alpha)) throw SpecError("power_geometric alpha must be a number");
    StarLaw s;
    s.kind_ = StarKind::power_geometric;
    s.alpha_ = alpha;
    s.k_max_ = k_max;
    return s;
}

long StarLaw::max_value() const {
    switch (kind_) {
        case StarKind::dirac: return k0_;
        case StarKind::finite: return masses_.back().first;
        case StarKind::power_geometric: return k_max_;
    }
    return 0;
}

bool StarLaw::divergent(int m) const {
    (void)m;
    // Sum of k * m^(-k) k^(-alpha) * m^k = k^(1-alpha) converges iff alpha > 2.
    return kind_ == StarKind::power_geometric && alpha_ <= 2.0;
}

std::vector<Rational> StarLaw::masses_exact() const {
    if (!exact()) throw SpecError("power_geometric seed has no exact masses");
    std::vector<Rational> v(static_cast<size_t>(max_value()) + 1, Rational(0));
    if (kind_ == StarKind::dirac) {
        v[static_cast<size_t>(k0_)] = 1;
    } else {
        for (const auto& [k, q] : masses_) v[static_cast<size_t>(k)] = q;
    }
    return v;
}

std::vector<double> StarLaw::masses_float(int m) const {
    if (exact()) {
        auto ex = masses_exact();
        std::vector<double> v(ex.size());
        for (size_t i = 0; i < ex.size(); ++i) v[i] = ex[i].get_d();
        return v;
    }
    std::vector<double> v(static_cast<size_t>(k_max_) + 1, 0.0);
    double total = 0;
    for (long k = 1; k <= k_max_; ++k) {
        double w = std::pow(static_cast<double>(m), -static_cast<double>(k)) *
                   std::pow(static_cast<double>(k), -alpha_);
        v[static_cast<size_t>(k)] = w;
        total += w;
    }
    for (auto& x : v) x /= total;
    return v;
}

double StarLaw::truncation_tail(int m) const {
    if (exact()) return 0.0;
    double kept = 0, tail = 0;
    for (long k = 1; k <= k_max_; ++k)
        kept += std::pow(static_cast<double>(m), -static_cast<double>(k)) *
                std::pow(static_cast<double>(k), -alpha_);
    // Geometric domination: sum_{k>k_max} m^-k k^-alpha <= m^-(k_max) k_max^-alpha / (m-1)
    // when alpha >= 0; for alpha < 0 bound each k^-alpha growth by ratio test margin.
    double last = std::pow(static_cast<double>(m), -static_cast<double>(k_max_)) *
                  std::pow(static_cast<double>(k_max_), -alpha_);
    tail = last / (m - 1);
    if (alpha_ < 0) {
        // ratio (k+1)^-alpha / k^-alpha * 1/m maximized at k = k_max
        double r = std::pow(1.0 + 1.0 / static_cast<double>(k_max_), -alpha_) / m;
        if (r >= 1.0) return 1.0;  // no useful bound; flag as total uncertainty
        tail = last * r / (1.0 - r);
    }
    return tail / (kept + tail);
}

Rational StarLaw::c1_exact() const {
    if (!exact()) throw SpecError("c1 is float-only for power_geometric");
    if (kind_ == StarKind::dirac) return k0_ >= 2 ? Rational(1) : Rational(0);
    Rational c = 0;
    for (const auto& [k, q] : masses_)
        if (k >= 2) c += q;
    return c;
}

double StarLaw::c1_float(int m) const {
    if (exact()) return c1_exact().get_d();
    auto v = masses_float(m);
    double c = 0;
    for (size_t k = 2; k < v.size(); ++k) c += v[k];
    return c;
}

} // namespace drx
