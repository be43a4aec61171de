#pragma once

#include <functional>

namespace retrobeam::quad {

struct Tolerance {
    double rel = 1e-8;
    double abs = 1e-14;
};

struct Result {
    double value = 0.0;
    double abserr = 0.0;
    /// GSL status; nonzero means the requested accuracy was not reached
    /// (round-off or subdivision limit). The value is still the best estimate.
    int status = 0;
};

/// Adaptive 21-point Gauss-Kronrod on [a, b] (GSL QAG). Reentrant: nested
/// calls each get their own workspace.
Result integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol = {});

/// Sum of `integrate` over consecutive pieces of [breaks.front(), breaks.back()].
/// The pieces localize features the first Kronrod pass could otherwise miss.
Result integrate_pieces(const std::function<double(double)>& f, const double* breaks, int count, Tolerance tol = {});

}  // namespace retrobeam::quad
