#include <cassert>
#include <cstdlib>
#include <string_view>

#include "retrobeam/simd/kernels.hpp"

namespace retrobeam::simd {

#if defined(RETROBEAM_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table();
}
#endif

const KernelTable* avx2_kernels()
{
#if defined(RETROBEAM_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels()
{
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("RETROBEAM_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar") {
            return scalar_kernels();
        }
        const KernelTable* fast = avx2_kernels();
        return fast != nullptr ? *fast : scalar_kernels();
    }();
    return chosen;
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b)
{
    assert(a.size() == b.size());
    return active_kernels().dot_conj(a.data(), b.data(), a.size());
}

double norm_sq(std::span<const cplx> a)
{
    return active_kernels().norm_sq(a.data(), a.size());
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y)
{
    assert(x.size() == y.size());
    active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

cplx sum(std::span<const cplx> a)
{
    return active_kernels().sum(a.data(), a.size());
}

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    return active_kernels().dot(a.data(), b.data(), a.size());
}

}  // namespace retrobeam::simd
