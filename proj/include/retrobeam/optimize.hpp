#pragma once

#include "retrobeam/params.hpp"
#include "retrobeam/quadrature.hpp"

namespace retrobeam {

/// Which crossing the DBB threshold solves.
enum class DeltaBranch {
    /// Q_OM(xi) <= Q_OM(rho) + qbar_re(rho, rho): the innermost ER stays
    /// silent and the edge ER catches up with it.
    inner_fixed,
    /// Otherwise the silent ER at the threshold itself meets the edge ER.
    threshold_moving,
};

const char* to_string(DeltaBranch branch);

struct OptResult {
    double argument = 0.0;
    /// Max-min energy at the threshold (delta_star) or the edge objective (p_star).
    double objective = 0.0;
    DeltaBranch branch = DeltaBranch::inner_fixed;
    /// False when the crossing equation has no sign change on the interval;
    /// argument is then the boundary with the smaller gap.
    bool bracketed = true;
    /// Gap of the solved equation at `argument` (W); delta_star only.
    double residual = 0.0;
};

/// Quadrature accuracy used while optimizing; tighter than the default so the
/// root residual resolves well below 1e-10 relative.
inline constexpr quad::Tolerance kOptimizeQuad{1e-12, 1e-22};

/// Max-min DBB threshold. Edge energy E(delta) = Q_OM(rho) + qbar_re(rho, delta, lambda)
/// grows with delta; it is matched against Q_OM(xi) on the inner_fixed branch
/// and against Q_OM(delta) otherwise.
OptResult delta_star(const SystemParams& params, quad::Tolerance tol = kOptimizeQuad);

/// Edge-ER objective of PBB: p * qbar_re(rho, xi, p lambda) when the tagged ER's
/// own reflection probability is counted, qbar_re(rho, xi, p lambda) otherwise.
double pbb_edge_objective(double p, const SystemParams& params, bool include_self = true,
                          quad::Tolerance tol = kOptimizeQuad);

/// Maximizer of pbb_edge_objective over (0,1).
OptResult p_star(const SystemParams& params, bool include_self = true, quad::Tolerance tol = kOptimizeQuad);

/// Gap E(delta) - Q_OM(xi) or E(delta) - Q_OM(delta) for the given branch.
double delta_gap(double delta, DeltaBranch branch, const SystemParams& params, quad::Tolerance tol = kOptimizeQuad);

/// Which branch applies for these parameters.
DeltaBranch delta_branch(const SystemParams& params, quad::Tolerance tol = kOptimizeQuad);

}  // namespace retrobeam
