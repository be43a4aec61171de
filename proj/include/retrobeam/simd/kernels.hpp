#pragma once

// Data-parallel inner loops of the two-phase beamforming simulation.
//
// Every kernel has a scalar reference implementation. An AVX2+FMA variant is
// compiled on x86-64 and selected at runtime when the CPU supports it. The
// variants reassociate sums, so results agree with the reference to rounding,
// not bit for bit. Within one process the choice is fixed, which keeps runs
// reproducible regardless of thread count.
//
// Setting RETROBEAM_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <span>

namespace retrobeam::simd {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;
    /// sum_m conj(a_m) * b_m
    cplx (*dot_conj)(const cplx* a, const cplx* b, std::size_t n);
    /// sum_m |a_m|^2
    double (*norm_sq)(const cplx* a, std::size_t n);
    /// y += alpha * x
    void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
    /// sum_m a_m
    cplx (*sum)(const cplx* a, std::size_t n);
    /// sum_m a_m * b_m
    double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or unsupported by this CPU.
const KernelTable* avx2_kernels();

/// The table used by the library: AVX2 when available unless overridden.
const KernelTable& active_kernels();

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);
double norm_sq(std::span<const cplx> a);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
cplx sum(std::span<const cplx> a);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace retrobeam::simd
