#include "retrobeam/optimize.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>

#include "retrobeam/analysis.hpp"

namespace retrobeam {

const char* to_string(DeltaBranch branch)
{
    switch (branch) {
    case DeltaBranch::inner_fixed:
        return "inner_fixed";
    case DeltaBranch::threshold_moving:
        return "threshold_moving";
    }
    return "unknown";
}

namespace {

double edge_energy(double delta, const SystemParams& params, quad::Tolerance tol)
{
    return params.omni_power(params.radius_m) + qbar_re(params.radius_m, delta, params.density, params, tol);
}

double silent_energy(double delta, DeltaBranch branch, const SystemParams& params)
{
    return branch == DeltaBranch::inner_fixed ? params.omni_power(params.exclusion_m) : params.omni_power(delta);
}

}  // namespace

DeltaBranch delta_branch(const SystemParams& params, quad::Tolerance tol)
{
    return params.omni_power(params.exclusion_m) <= edge_energy(params.radius_m, params, tol)
               ? DeltaBranch::inner_fixed
               : DeltaBranch::threshold_moving;
}

double delta_gap(double delta, DeltaBranch branch, const SystemParams& params, quad::Tolerance tol)
{
    return edge_energy(delta, params, tol) - silent_energy(delta, branch, params);
}

OptResult delta_star(const SystemParams& params, quad::Tolerance tol)
{
    const double lo = params.exclusion_m;
    const double hi = params.radius_m;
    OptResult out;
    out.branch = delta_branch(params, tol);
    const auto gap = [&](double delta) { return delta_gap(delta, out.branch, params, tol); };

    const double gap_lo = gap(lo);
    const double gap_hi = gap(hi);
    if (gap_lo == 0.0 || gap_hi == 0.0 || (gap_lo < 0.0) != (gap_hi < 0.0)) {
        if (gap_lo == 0.0 || gap_hi == 0.0) {
            out.argument = gap_lo == 0.0 ? lo : hi;
        } else {
            // Bracketing solve; 50 bits leaves a bracket far narrower than 1e-6 m.
            std::uintmax_t max_iter = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(gap, lo, hi, gap_lo, gap_hi,
                                                                  boost::math::tools::eps_tolerance<double>(50),
                                                                  max_iter);
            const double ga = gap(a);
            const double gb = gap(b);
            out.argument = std::abs(ga) <= std::abs(gb) ? a : b;
        }
    } else {
        out.bracketed = false;
        out.argument = std::abs(gap_lo) <= std::abs(gap_hi) ? lo : hi;
    }
    out.residual = gap(out.argument);
    out.objective = std::min(silent_energy(out.argument, out.branch, params), edge_energy(out.argument, params, tol));
    return out;
}

double pbb_edge_objective(double p, const SystemParams& params, bool include_self, quad::Tolerance tol)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParamError("reflection probability must lie in [0,1]");
    }
    const double retro = qbar_re(params.radius_m, params.exclusion_m, p * params.density, params, tol);
    return include_self ? p * retro : retro;
}

OptResult p_star(const SystemParams& params, bool include_self, quad::Tolerance tol)
{
    const auto negated = [&](double p) { return -pbb_edge_objective(p, params, include_self, tol); };
    // 2^-24 ~ 6e-8 relative bracket: inside the 1e-6 requirement on p.
    std::uintmax_t max_iter = 200;
    const auto [p, neg_value] = boost::math::tools::brent_find_minima(negated, 0.0, 1.0, 24, max_iter);
    OptResult out;
    out.argument = p;
    out.objective = -neg_value;
    out.branch = DeltaBranch::inner_fixed;
    return out;
}

}  // namespace retrobeam
