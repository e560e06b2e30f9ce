#pragma once

// Thin FFTW3 backend. Plans are created once per transform size with
// FFTW_ESTIMATE (deterministic plan choice) and reused through the
// new-array execute interface, which is safe to call concurrently.
// Plan creation itself is serialized behind a mutex; FFTW planners are
// not thread-safe.

#include <fftw3.h>

#include <complex>
#include <cstdlib>
#include <map>
#include <mutex>
#include <new>
#include <vector>

namespace nls2 {
namespace detail {

// 64-byte aligned allocator so field buffers satisfy the alignment the
// plans were created with (fftw_malloc'd scratch).
template <class T>
struct AlignedAllocator {
    using value_type = T;

    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}

    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        std::size_t bytes = (n * sizeof(T) + 63u) / 64u * 64u;
        void* p = std::aligned_alloc(64, bytes);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
};

using cvector = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;
using rvector = std::vector<double, AlignedAllocator<double>>;

inline std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

// Planning policy. ESTIMATE plans are chosen deterministically, which keeps
// repeated runs byte-identical; MEASURE plans are faster on large grids but
// machine-tuned. Threads apply to plans created afterwards.
struct FftConfig {
    bool measure = false;
    int threads = 1;
    bool threads_initialized = false;
};

inline FftConfig& fft_config() {
    static FftConfig cfg;
    return cfg;
}

inline void configure_fft(bool measure, int threads) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    FftConfig& cfg = fft_config();
    cfg.measure = measure;
    cfg.threads = threads < 1 ? 1 : threads;
#ifdef NLS2_FFTW_THREADS
    if (cfg.threads > 1 && !cfg.threads_initialized) {
        fftw_init_threads();
        cfg.threads_initialized = true;
    }
#endif
}

struct Dft3Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

inline const Dft3Plans& dft3_plans(int n) {
    static std::map<int, Dft3Plans> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::size_t total = std::size_t(n) * n * n;
    auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    const FftConfig& cfg = fft_config();
#ifdef NLS2_FFTW_THREADS
    if (cfg.threads_initialized) fftw_plan_with_nthreads(cfg.threads);
#endif
    unsigned flags = cfg.measure ? FFTW_MEASURE : FFTW_ESTIMATE;
    Dft3Plans p;
    p.forward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
    return cache.emplace(n, p).first->second;
}

// Unnormalized c2c transforms; out must be a distinct buffer from in.
inline void dft3(int n, const std::complex<double>* in, std::complex<double>* out, bool forward) {
    const Dft3Plans& p = dft3_plans(n);
    auto* fin = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
    auto* fout = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(forward ? p.forward : p.backward, fin, fout);
}

// DST-I (FFTW_RODFT00) used by the radial solver. Unnormalized; applying
// it twice multiplies by 2*(m+1).
inline fftw_plan dst1_plan(int m) {
    static std::map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * m));
    auto* out = static_cast<double*>(fftw_malloc(sizeof(double) * m));
    fftw_plan p = fftw_plan_r2r_1d(m, in, out, FFTW_RODFT00, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    return cache.emplace(m, p).first->second;
}

inline void dst1(int m, const double* in, double* out) {
    fftw_execute_r2r(dst1_plan(m), const_cast<double*>(in), out);
}

} // namespace detail
} // namespace nls2
