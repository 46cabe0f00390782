// One-step map and iteration of the recursion
//   X_{n+1} = (X_{n,1} + ... + X_{n,m} - 1)^+ , the X_{n,i} independent copies,
// in exact and float arithmetic, plus Monte Carlo sampling of the same map.
#pragma once

#include <cstdint>
#include <vector>

#include "drx/dist.hpp"
#include "drx/model.hpp"

namespace drx {

struct EngineOptions {
    TailPolicy tail_policy = TailPolicy::reject;
    size_t support_cap = 1000000;
    bool use_fft = false;            // float path only; needs FFTW at build time
};

namespace detail {
// m-th convolution power of a nonnegative integer sequence, computed by
// packing the sequence into fixed-width slots of a single big integer and
// taking one big-integer power. Exact for nonnegative inputs.
std::vector<Integer> conv_pow_packed(const std::vector<Integer>& v, unsigned m);
}

// Law of X_1 + ... + X_m for m independent copies. A lumped tail on the
// input is first materialized at its folded position, so iteration under a
// lump policy iterates an honest proxy law.
ExactDist convolve_power(const ExactDist& d, int m, const EngineOptions& opt = {});
FloatDist convolve_power(const FloatDist& d, int m, const EngineOptions& opt = {});

// Law of (X_1 + ... + X_m - 1)^+.
ExactDist dr_step(const ExactDist& d, int m, const EngineOptions& opt = {});
FloatDist dr_step(const FloatDist& d, int m, const EngineOptions& opt = {});

// X_0 .. X_n (n+1 entries).
std::vector<ExactDist> iterate_exact(const ExactDist& d0, int m, int n,
                                     const EngineOptions& opt = {});
std::vector<FloatDist> iterate_float(const FloatDist& d0, int m, int n,
                                     const EngineOptions& opt = {});

struct FftStats {
    double max_clamped = 0.0;        // largest negative magnitude clamped to 0
};
// Direct reference convolution is used below this size even when FFT is on.
FloatDist convolve_power_fft(const FloatDist& d, int m, FftStats* stats = nullptr);

// n_samples independent draws of X_n via simulation of the m^n-leaf fold.
std::vector<long> sample_terminal(const ModelSpec& spec, int n, size_t n_samples,
                                  uint64_t seed);

// n_samples independent draws of X_{0,1} + ... + X_{0,n_terms}.
std::vector<long> sample_initial_sums(const ModelSpec& spec, size_t n_terms,
                                      size_t n_samples, uint64_t seed);

} // namespace drx
