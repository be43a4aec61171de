#include "retrobeam/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace retrobeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_annulus(AnnulusSpec spec)
{
    if (!(spec.inner > 1.0 && spec.outer > spec.inner)) {
        throw ParamError("annulus needs 1 < inner < outer");
    }
}

void check_alpha(const SystemParams& params)
{
    if (!(params.pathloss_exp > 2.0)) {
        throw ParamError("path-loss exponent must exceed 2");
    }
}

void check_reflectors(double reflector_inner, double density, const SystemParams& params)
{
    if (!(reflector_inner >= params.exclusion_m && reflector_inner <= params.radius_m)) {
        throw ParamError("reflector annulus inner radius must lie in [xi, rho]");
    }
    if (!(density >= 0.0)) {
        throw ParamError("reflector density must be >= 0");
    }
}

quad::Tolerance tighter(quad::Tolerance tol, double factor)
{
    return {std::max(tol.rel * factor, 1e-13), tol.abs * factor};
}

// CCDF of a tagged ER's retro-to-omni ratio, parameterized by
// Y = r d^2a where r is the share ratio beta_i|g_i|^2 d^-2a / (I + N).
class RetroCcdf {
public:
    RetroCcdf(const SystemParams& params, double reflector_inner, double density, quad::Tolerance tol)
        : alpha_(params.pathloss_exp),
          inner2_(reflector_inner * reflector_inner),
          outer2_(params.radius_m * params.radius_m),
          density_(density),
          noise_rate_(params.noise_w / (params.pt_w * params.tau_s)),
          tol_(tighter(tol, 1e-2))
    {
    }

    // int_{inner}^{rho} Y y/(Y + y^2a) dy = 1/2 int_{inner^2}^{rho^2} du / (1 + u^a / Y)
    [[nodiscard]] double interference_integral(double y_level) const
    {
        if (y_level <= 0.0 || inner2_ >= outer2_) {
            return 0.0;
        }
        if (std::isinf(y_level)) {
            return 0.5 * (outer2_ - inner2_);
        }
        const double a = alpha_;
        const auto integrand = [a, y_level](double u) { return 1.0 / (1.0 + std::pow(u, a) / y_level); };
        return 0.5 * quad::integrate(integrand, inner2_, outer2_, {tol_.rel, 0.0}).value;
    }

    [[nodiscard]] double at(double y_level) const
    {
        if (y_level <= 0.0) {
            return 1.0;
        }
        double exponent = 0.0;
        if (noise_rate_ > 0.0) {
            if (std::isinf(y_level)) {
                return 0.0;
            }
            exponent += y_level * noise_rate_;
        }
        if (density_ > 0.0) {
            exponent += 2.0 * std::numbers::pi * density_ * interference_integral(y_level);
        }
        return std::exp(-exponent);
    }

private:
    double alpha_;
    double inner2_;
    double outer2_;
    double density_;
    double noise_rate_;
    quad::Tolerance tol_;
};

}  // namespace

double lambda_term(AnnulusSpec spec, const SystemParams& params)
{
    check_annulus(spec);
    check_alpha(params);
    const double a = params.pathloss_exp;
    const double num = std::pow(spec.outer, 2.0 - a) - std::pow(spec.inner, 2.0 - a);
    const double den = (2.0 - a) * (spec.outer * spec.outer - spec.inner * spec.inner);
    return 2.0 * params.zeta * params.pt_w * num / den;
}

double q_dib(const SystemParams& params)
{
    const double mean_count = params.mean_count();
    if (!(mean_count > 1.0)) {
        throw ParamError("distance-inversion closed form needs lambda*pi*(rho^2-xi^2) > 1");
    }
    const double lam = lambda_term({params.exclusion_m, params.radius_m}, params);
    return lam * (1.0 + static_cast<double>(params.antennas) / mean_count);
}

double ccdf_total(const CcdfQuery& q, const SystemParams& params, quad::Tolerance tol)
{
    check_reflectors(q.reflector_inner, q.density, params);
    if (!(q.d > 0.0)) {
        throw ParamError("tagged distance must be positive");
    }
    const double m = static_cast<double>(params.antennas);
    const double t = q.x / params.omni_power(q.d);
    if (!(t >= 1.0 && t <= m + 1.0)) {
        throw ParamError("CCDF argument outside the support [Q_OM, (M+1) Q_OM]");
    }
    const double dyadic = std::pow(q.d, -2.0 * params.pathloss_exp);
    const double y_level = t == m + 1.0 ? kInf : (t - 1.0) / ((m + 1.0 - t) * dyadic);
    return RetroCcdf(params, q.reflector_inner, q.density, tol).at(y_level);
}

double qbar_re(double d, double reflector_inner, double density, const SystemParams& params, quad::Tolerance tol)
{
    check_reflectors(reflector_inner, density, params);
    if (!(d > 0.0)) {
        throw ParamError("tagged distance must be positive");
    }
    const double m = static_cast<double>(params.antennas);
    const double scale = m * params.omni_power(d);
    const double log_d2a = 2.0 * params.pathloss_exp * std::log(d);
    const RetroCcdf ccdf(params, reflector_inner, density, tol);

    // With r = (t-1)/(M+1-t), dt = M dr/(1+r)^2; with s = ln r the weight
    // becomes the logistic density e^s/(1+e^s)^2 and the endpoint t = M+1
    // (Y -> infinity) moves to s -> +infinity, where the weight vanishes.
    const auto integrand = [&ccdf, log_d2a](double s) {
        const double weight = 1.0 / (std::exp(-s) + 2.0 + std::exp(s));
        return weight * ccdf.at(std::exp(s + log_d2a));
    };
    // Weight mass outside |s| <= 40 is below 1e-17.
    static constexpr std::array<double, 17> breaks{-40, -35, -30, -25, -20, -15, -10, -5, 0,
                                                   5,   10,  15,  20,  25,  30,  35,  40};
    const quad::Tolerance normalized{tol.rel, tol.abs / scale};
    const double share = quad::integrate_pieces(integrand, breaks.data(), static_cast<int>(breaks.size()),
                                                normalized)
                             .value;
    return scale * share;
}

double q_fb_retro(double reflector_inner, double density, const SystemParams& params, quad::Tolerance tol)
{
    check_reflectors(reflector_inner, density, params);
    const double rho = params.radius_m;
    if (reflector_inner >= rho) {
        return 0.0;
    }
    const double area_norm = 2.0 / (rho * rho - reflector_inner * reflector_inner);
    const quad::Tolerance inner_tol = tighter(tol, 1e-1);
    const auto integrand = [&](double y) { return qbar_re(y, reflector_inner, density, params, inner_tol) * y; };
    const quad::Tolerance outer_tol{tol.rel, tol.abs / area_norm};
    return area_norm * quad::integrate(integrand, reflector_inner, rho, outer_tol).value;
}

double q_fb_total(const SystemParams& params, quad::Tolerance tol)
{
    return lambda_term({params.exclusion_m, params.radius_m}, params) +
           q_fb_retro(params.exclusion_m, params.density, params, tol);
}

double q_dbb(double delta, const SystemParams& params, quad::Tolerance tol)
{
    const double xi = params.exclusion_m;
    const double rho = params.radius_m;
    if (!(delta >= xi && delta <= rho)) {
        throw ParamError("distance threshold must lie in [xi, rho]");
    }
    const double eps = (delta * delta - xi * xi) / (rho * rho - xi * xi);
    double total = 0.0;
    if (delta > xi) {
        total += eps * lambda_term({xi, delta}, params);
    }
    if (delta < rho) {
        total += (1.0 - eps) *
                 (lambda_term({delta, rho}, params) + q_fb_retro(delta, params.density, params, tol));
    }
    return total;
}

double q_pbb(double p, const SystemParams& params, quad::Tolerance tol)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParamError("reflection probability must lie in [0,1]");
    }
    const double lam = lambda_term({params.exclusion_m, params.radius_m}, params);
    if (p == 0.0) {
        return lam;
    }
    return lam + p * q_fb_retro(params.exclusion_m, p * params.density, params, tol);
}

AsymptoticLimits asymptotic_limits(const SystemParams& params)
{
    const double lam = lambda_term({params.exclusion_m, params.radius_m}, params);
    return {lam, static_cast<double>(params.antennas) * lam};
}


double tagged_dbb_energy(double d, double delta, const SystemParams& params, quad::Tolerance tol)
{
    const double omni = params.omni_power(d);
    if (d <= delta) {
        return omni;
    }
    return omni + qbar_re(d, delta, params.density, params, tol);
}

double tagged_pbb_energy(double d, double p, const SystemParams& params, quad::Tolerance tol)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParamError("reflection probability must lie in [0,1]");
    }
    const double omni = params.omni_power(d);
    if (p == 0.0) {
        return omni;
    }
    return omni + p * qbar_re(d, params.exclusion_m, p * params.density, params, tol);
}

}  // namespace retrobeam
