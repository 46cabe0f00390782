#include "drx/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef DRX_HAVE_FFTW3
#include <fftw3.h>
#endif

namespace drx {

namespace detail {

std::vector<Integer> conv_pow_packed(const std::vector<Integer>& v, unsigned m) {
    size_t K = v.size();
    if (K == 0) throw SpecError("empty sequence");
    if (m == 1) return v;

    size_t max_bits = 1;
    for (const auto& x : v) {
        if (x < 0) throw SpecError("conv_pow_packed needs nonnegative input");
        max_bits = std::max(max_bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    // Each output slot holds a sum of at most K^(m-1) products of m inputs.
    size_t count_bits = 1;
    while ((size_t(1) << count_bits) < K) ++count_bits;
    size_t slot_bits = m * max_bits + (m - 1) * count_bits + 1;
    size_t slot_bytes = (slot_bits + 7) / 8;

    std::vector<unsigned char> buf(slot_bytes * K, 0);
    for (size_t k = 0; k < K; ++k) {
        size_t written = 0;
        mpz_export(&buf[k * slot_bytes], &written, -1, 1, 0, 0, v[k].get_mpz_t());
    }
    Integer packed;
    mpz_import(packed.get_mpz_t(), buf.size(), -1, 1, 0, 0, buf.data());

    Integer big;
    mpz_pow_ui(big.get_mpz_t(), packed.get_mpz_t(), m);

    size_t out_k = m * (K - 1) + 1;
    std::vector<unsigned char> obuf(slot_bytes * out_k, 0);
    size_t written = 0;
    mpz_export(obuf.data(), &written, -1, 1, 0, 0, big.get_mpz_t());
    if (written > obuf.size()) throw std::logic_error("slot sizing underestimated");

    std::vector<Integer> out(out_k);
    for (size_t k = 0; k < out_k; ++k)
        mpz_import(out[k].get_mpz_t(), slot_bytes, -1, 1, 0, 0, &obuf[k * slot_bytes]);
    return out;
}

} // namespace detail

namespace {

// Folds tail mass back into the stored vector so the law is concrete.
std::vector<Integer> materialized(const ExactDist& d) {
    std::vector<Integer> v(d.size());
    for (size_t k = 0; k < d.size(); ++k) v[k] = d.numerator(k);
    if (d.tail_numerator() != 0) {
        if (d.tail_policy() == TailPolicy::lump_at_zero)
            v.front() += d.tail_numerator();
        else
            v.back() += d.tail_numerator();
    }
    return v;
}

ExactDist capped_exact(std::vector<Integer> num, Integer den, const EngineOptions& opt) {
    Integer tail = 0;
    if (num.size() > opt.support_cap + 1) {
        if (opt.tail_policy == TailPolicy::reject)
            throw SupportCapError("support " + std::to_string(num.size() - 1) +
                                  " exceeds cap " + std::to_string(opt.support_cap));
        for (size_t k = opt.support_cap + 1; k < num.size(); ++k) tail += num[k];
        num.resize(opt.support_cap + 1);
    }
    ExactDist out(std::move(num), std::move(den));
    if (tail != 0) out.set_tail(std::move(tail), opt.tail_policy);
    out.trim();
    return out;
}

std::vector<double> materialized(const FloatDist& d) {
    std::vector<double> v = d.raw();
    if (d.tail() != 0.0) {
        if (d.tail_policy() == TailPolicy::lump_at_zero)
            v.front() += d.tail();
        else
            v.back() += d.tail();
    }
    return v;
}

FloatDist capped_float(std::vector<double> m, const EngineOptions& opt) {
    double tail = 0;
    if (m.size() > opt.support_cap + 1) {
        if (opt.tail_policy == TailPolicy::reject)
            throw SupportCapError("support " + std::to_string(m.size() - 1) +
                                  " exceeds cap " + std::to_string(opt.support_cap));
        for (size_t k = opt.support_cap + 1; k < m.size(); ++k) tail += m[k];
        m.resize(opt.support_cap + 1);
    }
    FloatDist out(std::move(m));
    if (tail != 0) out.set_tail(tail, opt.tail_policy);
    return out;
}

std::vector<double> conv_direct(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

} // namespace

ExactDist convolve_power(const ExactDist& d, int m, const EngineOptions& opt) {
    if (m < 1) throw SpecError("m must be positive");
    auto conv = detail::conv_pow_packed(materialized(d), static_cast<unsigned>(m));
    Integer den;
    mpz_pow_ui(den.get_mpz_t(), d.denominator().get_mpz_t(), static_cast<unsigned>(m));
    return capped_exact(std::move(conv), std::move(den), opt);
}

ExactDist dr_step(const ExactDist& d, int m, const EngineOptions& opt) {
    if (m < 2) throw SpecError("m must be at least 2");
    auto conv = detail::conv_pow_packed(materialized(d), static_cast<unsigned>(m));
    Integer den;
    mpz_pow_ui(den.get_mpz_t(), d.denominator().get_mpz_t(), static_cast<unsigned>(m));
    std::vector<Integer> shifted(std::max<size_t>(conv.size() - 1, 1));
    shifted[0] = conv[0];
    if (conv.size() > 1) shifted[0] += conv[1];
    for (size_t k = 2; k < conv.size(); ++k) shifted[k - 1] = std::move(conv[k]);
    auto out = capped_exact(std::move(shifted), std::move(den), opt);
    out.reduce();
    return out;
}

std::vector<ExactDist> iterate_exact(const ExactDist& d0, int m, int n,
                                     const EngineOptions& opt) {
    if (n < 0) throw SpecError("n must be nonnegative");
    std::vector<ExactDist> orbit;
    orbit.reserve(static_cast<size_t>(n) + 1);
    orbit.push_back(d0);
    for (int i = 0; i < n; ++i) orbit.push_back(dr_step(orbit.back(), m, opt));
    return orbit;
}

// Below this support size the direct products beat the transform round
// trip, so an FFT request falls back to them.
constexpr size_t kFftMinSupport = 32;

FloatDist convolve_power(const FloatDist& d, int m, const EngineOptions& opt) {
    if (m < 1) throw SpecError("m must be positive");
    auto base = materialized(d);
    if (opt.use_fft && base.size() >= kFftMinSupport) {
        FftStats stats;
        return capped_float(materialized(convolve_power_fft(FloatDist(std::move(base)), m, &stats)), opt);
    }
    std::vector<double> acc = base;
    for (int i = 1; i < m; ++i) acc = conv_direct(acc, base);
    return capped_float(std::move(acc), opt);
}

FloatDist dr_step(const FloatDist& d, int m, const EngineOptions& opt) {
    if (m < 2) throw SpecError("m must be at least 2");
    FloatDist conv = convolve_power(d, m, EngineOptions{opt.tail_policy,
                                                        opt.support_cap + 2, opt.use_fft});
    auto c = materialized(conv);
    std::vector<double> shifted(std::max<size_t>(c.size() - 1, 1), 0.0);
    shifted[0] = c[0];
    if (c.size() > 1) shifted[0] += c[1];
    for (size_t k = 2; k < c.size(); ++k) shifted[k - 1] = c[k];
    return capped_float(std::move(shifted), opt);
}

std::vector<FloatDist> iterate_float(const FloatDist& d0, int m, int n,
                                     const EngineOptions& opt) {
    if (n < 0) throw SpecError("n must be nonnegative");
    std::vector<FloatDist> orbit;
    orbit.reserve(static_cast<size_t>(n) + 1);
    orbit.push_back(d0);
    for (int i = 0; i < n; ++i) orbit.push_back(dr_step(orbit.back(), m, opt));
    return orbit;
}

FloatDist convolve_power_fft(const FloatDist& d, int m, FftStats* stats) {
#ifdef DRX_HAVE_FFTW3
    const auto& a = d.raw();
    size_t out_n = m * (a.size() - 1) + 1;
    size_t n = 1;
    while (n < out_n) n <<= 1;
    std::vector<double> in(n, 0.0);
    std::copy(a.begin(), a.end(), in.begin());
    std::vector<fftw_complex> freq(n / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), freq.data(),
                                         FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    // Raise the spectrum to the m-th power pointwise.
    for (auto& c : freq) {
        double re = c[0], im = c[1];
        double pr = re, pi = im;
        for (int i = 1; i < m; ++i) {
            double nr = pr * re - pi * im;
            double ni = pr * im + pi * re;
            pr = nr;
            pi = ni;
        }
        c[0] = pr;
        c[1] = pi;
    }
    std::vector<double> out(n, 0.0);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq.data(), out.data(),
                                         FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    double max_clamped = 0.0;
    std::vector<double> res(out_n);
    for (size_t k = 0; k < out_n; ++k) {
        double v = out[k] / static_cast<double>(n);
        if (v < 0) {
            max_clamped = std::max(max_clamped, -v);
            v = 0;
        }
        res[k] = v;
    }
    if (stats) stats->max_clamped = max_clamped;
    return FloatDist(std::move(res));
#else
    (void)stats;
    (void)m;
    (void)d;
    throw SpecError("built without FFT support");
#endif
}

namespace {

struct InitialSampler {
    std::vector<double> cdf;     // over values 0..K
    explicit InitialSampler(const ModelSpec& spec) {
        auto masses = initial_dist_float(spec).raw();
        cdf.resize(masses.size());
        double acc = 0;
        for (size_t k = 0; k < masses.size(); ++k) {
            acc += masses[k];
            cdf[k] = acc;
        }
        cdf.back() = 1.0;
    }
    long draw(std::mt19937_64& rng) const {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return static_cast<long>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }
};

} // namespace

std::vector<long> sample_terminal(const ModelSpec& spec, int n, size_t n_samples,
                                  uint64_t seed) {
    if (n < 0) throw SpecError("n must be nonnegative");
    InitialSampler init(spec);
    std::mt19937_64 rng(seed);
    size_t leaves = 1;
    for (int i = 0; i < n; ++i) leaves *= static_cast<size_t>(spec.m);
    std::vector<long> out(n_samples);
    std::vector<long> level(leaves);
    for (size_t s = 0; s < n_samples; ++s) {
        for (size_t i = 0; i < leaves; ++i) level[i] = init.draw(rng);
        size_t width = leaves;
        for (int lev = 0; lev < n; ++lev) {
            width /= static_cast<size_t>(spec.m);
            for (size_t i = 0; i < width; ++i) {
                long sum = 0;
                for (int j = 0; j < spec.m; ++j)
                    sum += level[i * static_cast<size_t>(spec.m) + static_cast<size_t>(j)];
                level[i] = std::max<long>(sum - 1, 0);
            }
        }
        out[s] = level[0];
    }
    return out;
}

std::vector<long> sample_initial_sums(const ModelSpec& spec, size_t n_terms,
                                      size_t n_samples, uint64_t seed) {
    InitialSampler init(spec);
    std::mt19937_64 rng(seed);
    std::vector<long> out(n_samples);
    for (size_t s = 0; s < n_samples; ++s) {
        long sum = 0;
        for (size_t i = 0; i < n_terms; ++i) sum += init.draw(rng);
        out[s] = sum;
    }
    return out;
}

} // namespace drx
