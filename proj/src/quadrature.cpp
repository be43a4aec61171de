#include "retrobeam/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <new>

namespace retrobeam::quad {

namespace {

constexpr std::size_t kWorkspaceIntervals = 2000;

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double trampoline(double x, void* params)
{
    return (*static_cast<const std::function<double(double)>*>(params))(x);
}

void disable_gsl_abort()
{
    // GSL aborts on failed accuracy by default; statuses are reported instead.
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol)
{
    disable_gsl_abort();
    Result out;
    if (a == b) {
        return out;
    }
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(kWorkspaceIntervals));
    if (!ws) {
        throw std::bad_alloc();
    }
    gsl_function fn;
    fn.function = &trampoline;
    fn.params = const_cast<std::function<double(double)>*>(&f);
    out.status = gsl_integration_qag(&fn, a, b, tol.abs, tol.rel, kWorkspaceIntervals, GSL_INTEG_GAUSS21,
                                     ws.get(), &out.value, &out.abserr);
    return out;
}

Result integrate_pieces(const std::function<double(double)>& f, const double* breaks, int count, Tolerance tol)
{
    Result total;
    for (int k = 0; k + 1 < count; ++k) {
        const Result piece = integrate(f, breaks[k], breaks[k + 1], tol);
        total.value += piece.value;
        total.abserr += piece.abserr;
        if (piece.status != 0) {
            total.status = piece.status;
        }
    }
    return total;
}

}  // namespace retrobeam::quad
