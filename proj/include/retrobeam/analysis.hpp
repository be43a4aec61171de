#pragma once

#include "retrobeam/params.hpp"
#include "retrobeam/quadrature.hpp"

namespace retrobeam {

/// Annulus inner < r < outer, with 1 < inner.
struct AnnulusSpec {
    double inner = 0.0;
    double outer = 0.0;
};

/// Mean omnidirectional power of an ER uniform (in area) on the annulus:
///   2 zeta P_t (outer^(2-a) - inner^(2-a)) / ((2-a)(outer^2 - inner^2)).
double lambda_term(AnnulusSpec spec, const SystemParams& params);

/// Average harvested power under distance-inversion backscattering,
/// Lambda(xi,rho) (1 + M / (lambda pi (rho^2 - xi^2))). Needs a mean ER count
/// above 1 (Beta shape (E[K]-1) M must be positive).
double q_dib(const SystemParams& params);

/// One point of the CCDF of a tagged ER's total harvested power under full
/// backscattering.
struct CcdfQuery {
    double x = 0.0;                // total power (W)
    double d = 0.0;                // tagged ER distance (m)
    double reflector_inner = 0.0;  // interferers live on [reflector_inner, rho]
    double density = 0.0;         // interferer density (per m^2)
};

/// P(Q_total > x | d) for a tagged reflecting ER among PPP reflectors:
///   exp(-U(x)) exp(-2 pi density int_{inner}^{rho} Y y / (Y + y^(2a)) dy)
/// with t = x/(zeta P_t d^-a), Y = (t-1)/((M+1-t) d^-2a), U = Y sigma^2/(P_t tau).
/// Throws ParamError when x is outside [zeta P_t d^-a, (M+1) zeta P_t d^-a].
double ccdf_total(const CcdfQuery& q, const SystemParams& params, quad::Tolerance tol = {});

/// Mean retrodirective power of a tagged reflecting ER at distance d: the
/// integral of the total-power CCDF over its support, which equals
/// E[Q_total] - zeta P_t d^-a.
double qbar_re(double d, double reflector_inner, double density, const SystemParams& params,
               quad::Tolerance tol = {});

/// Retrodirective part of the full-backscattering average over ER positions
/// uniform on [reflector_inner, rho], interferers on the same annulus.
double q_fb_retro(double reflector_inner, double density, const SystemParams& params, quad::Tolerance tol = {});

/// Lambda(xi,rho) + q_fb_retro(xi, lambda).
double q_fb_total(const SystemParams& params, quad::Tolerance tol = {});

/// Distance-based binary backscattering average:
///   eps Lambda(xi,delta) + (1-eps) [Lambda(delta,rho) + q_fb_retro(delta, lambda)],
/// eps = (delta^2 - xi^2)/(rho^2 - xi^2), the share of ERs inside delta.
double q_dbb(double delta, const SystemParams& params, quad::Tolerance tol = {});

/// Probabilistic binary backscattering average Lambda(xi,rho) + p q_fb_retro(xi, p lambda).
double q_pbb(double p, const SystemParams& params, quad::Tolerance tol = {});

struct AsymptoticLimits {
    double dense = 0.0;   // Lambda(xi,rho): reflections useless
    double sparse = 0.0;  // M Lambda(xi,rho): beamforming gain
};

AsymptoticLimits asymptotic_limits(const SystemParams& params);


/// Mean power of a tagged ER at distance d under DBB(delta): omni only when
/// d <= delta, otherwise omni plus qbar_re(d, delta, lambda).
double tagged_dbb_energy(double d, double delta, const SystemParams& params, quad::Tolerance tol = {});

/// Mean power of a tagged ER at distance d under PBB(p): the ER itself
/// reflects with probability p among reflectors of density p*lambda.
double tagged_pbb_energy(double d, double p, const SystemParams& params, quad::Tolerance tol = {});

}  // namespace retrobeam
