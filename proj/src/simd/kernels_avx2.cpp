// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher has
// checked the CPU.

#include <immintrin.h>

#include "retrobeam/simd/kernels.hpp"

namespace retrobeam::simd::detail {

namespace {

// std::complex<double> is laid out as {re, im}; one __m256d holds two values.
inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Returns {lane0 + lane2, lane1 + lane3}.
inline __m128d pair_sum(__m256d v)
{
    return _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
}

cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n)
{
    const double* pa = raw(a);
    const double* pb = raw(b);
    __m256d direct0 = _mm256_setzero_pd();
    __m256d direct1 = _mm256_setzero_pd();
    __m256d cross0 = _mm256_setzero_pd();
    __m256d cross1 = _mm256_setzero_pd();

    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        const __m256d a0 = _mm256_loadu_pd(pa + 2 * m);
        const __m256d a1 = _mm256_loadu_pd(pa + 2 * m + 4);
        const __m256d b0 = _mm256_loadu_pd(pb + 2 * m);
        const __m256d b1 = _mm256_loadu_pd(pb + 2 * m + 4);
        // {ar*br, ai*bi}
        direct0 = _mm256_fmadd_pd(a0, b0, direct0);
        direct1 = _mm256_fmadd_pd(a1, b1, direct1);
        // {ar*bi, ai*br}
        cross0 = _mm256_fmadd_pd(a0, _mm256_permute_pd(b0, 0b0101), cross0);
        cross1 = _mm256_fmadd_pd(a1, _mm256_permute_pd(b1, 0b0101), cross1);
    }
    for (; m + 2 <= n; m += 2) {
        const __m256d a0 = _mm256_loadu_pd(pa + 2 * m);
        const __m256d b0 = _mm256_loadu_pd(pb + 2 * m);
        direct0 = _mm256_fmadd_pd(a0, b0, direct0);
        cross0 = _mm256_fmadd_pd(a0, _mm256_permute_pd(b0, 0b0101), cross0);
    }

    double re = hsum(_mm256_add_pd(direct0, direct1));
    const __m128d cross = pair_sum(_mm256_add_pd(cross0, cross1));
    double im = _mm_cvtsd_f64(cross) - _mm_cvtsd_f64(_mm_unpackhi_pd(cross, cross));

    for (; m < n; ++m) {
        re += a[m].real() * b[m].real() + a[m].imag() * b[m].imag();
        im += a[m].real() * b[m].imag() - a[m].imag() * b[m].real();
    }
    return {re, im};
}

double norm_sq_avx2(const cplx* a, std::size_t n)
{
    const double* pa = raw(a);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        const __m256d a0 = _mm256_loadu_pd(pa + 2 * m);
        const __m256d a1 = _mm256_loadu_pd(pa + 2 * m + 4);
        acc0 = _mm256_fmadd_pd(a0, a0, acc0);
        acc1 = _mm256_fmadd_pd(a1, a1, acc1);
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; m < n; ++m) {
        total += a[m].real() * a[m].real() + a[m].imag() * a[m].imag();
    }
    return total;
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n)
{
    const double* px = raw(x);
    double* py = raw(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    // {-ai, ai} so that swap(x) * this = {-ai*xi, ai*xr}
    const __m256d ai = _mm256_setr_pd(-alpha.imag(), alpha.imag(), -alpha.imag(), alpha.imag());
    std::size_t m = 0;
    for (; m + 2 <= n; m += 2) {
        const __m256d xv = _mm256_loadu_pd(px + 2 * m);
        __m256d yv = _mm256_loadu_pd(py + 2 * m);
        yv = _mm256_fmadd_pd(ar, xv, yv);
        yv = _mm256_fmadd_pd(ai, _mm256_permute_pd(xv, 0b0101), yv);
        _mm256_storeu_pd(py + 2 * m, yv);
    }
    for (; m < n; ++m) {
        const double xr = x[m].real();
        const double xi = x[m].imag();
        y[m] = {y[m].real() + alpha.real() * xr - alpha.imag() * xi,
                y[m].imag() + alpha.real() * xi + alpha.imag() * xr};
    }
}

cplx sum_avx2(const cplx* a, std::size_t n)
{
    const double* pa = raw(a);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(pa + 2 * m));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(pa + 2 * m + 4));
    }
    const __m128d s = pair_sum(_mm256_add_pd(acc0, acc1));
    double re = _mm_cvtsd_f64(s);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    for (; m < n; ++m) {
        re += a[m].real();
        im += a[m].imag();
    }
    return {re, im};
}

double dot_avx2(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 8 <= n; m += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + m), _mm256_loadu_pd(b + m), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + m + 4), _mm256_loadu_pd(b + m + 4), acc1);
    }
    for (; m + 4 <= n; m += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + m), _mm256_loadu_pd(b + m), acc0);
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; m < n; ++m) {
        total += a[m] * b[m];
    }
    return total;
}

}  // namespace

const KernelTable& avx2_table()
{
    static constexpr KernelTable table{
        "avx2", dot_conj_avx2, norm_sq_avx2, axpy_avx2, sum_avx2, dot_avx2,
    };
    return table;
}

}  // namespace retrobeam::simd::detail
