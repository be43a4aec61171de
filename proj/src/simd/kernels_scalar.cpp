#include "retrobeam/simd/kernels.hpp"

namespace retrobeam::simd {

namespace {

cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        re += a[m].real() * b[m].real() + a[m].imag() * b[m].imag();
        im += a[m].real() * b[m].imag() - a[m].imag() * b[m].real();
    }
    return {re, im};
}

double norm_sq_scalar(const cplx* a, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        acc += a[m].real() * a[m].real() + a[m].imag() * a[m].imag();
    }
    return acc;
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n)
{
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t m = 0; m < n; ++m) {
        const double xr = x[m].real();
        const double xi = x[m].imag();
        y[m] = {y[m].real() + ar * xr - ai * xi, y[m].imag() + ar * xi + ai * xr};
    }
}

cplx sum_scalar(const cplx* a, std::size_t n)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        re += a[m].real();
        im += a[m].imag();
    }
    return {re, im};
}

double dot_scalar(const double* a, const double* b, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        acc += a[m] * b[m];
    }
    return acc;
}

}  // namespace

const KernelTable& scalar_kernels()
{
    static constexpr KernelTable table{
        "scalar", dot_conj_scalar, norm_sq_scalar, axpy_scalar, sum_scalar, dot_scalar,
    };
    return table;
}

}  // namespace retrobeam::simd
