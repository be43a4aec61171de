#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "retrobeam/channel.hpp"
#include "retrobeam/harvest.hpp"
#include "retrobeam/network.hpp"
#include "retrobeam/params.hpp"
#include "retrobeam/rng.hpp"

namespace retrobeam {

/// Distance-inversion backscattering: beta_i = (d_i/rho)^(2 alpha), which
/// equalizes the round-trip gain d^-2a beta of every ER.
ReflectionProfile dib_profile(const SystemParams& params, const NetworkRealization& net);

/// Full backscattering: every ER reflects everything.
ReflectionProfile fb_profile(const NetworkRealization& net);

/// Distance-based binary backscattering: ERs farther than `delta` reflect.
/// Throws ParamError unless delta is in [xi, rho].
ReflectionProfile dbb_profile(const SystemParams& params, const NetworkRealization& net, double delta);

/// Probabilistic binary backscattering: each ER reflects independently with
/// probability p. Throws ParamError unless p is in [0,1].
ReflectionProfile pbb_profile(const NetworkRealization& net, double p, Rng& rng);

/// Per-ER retrodirective harvesting targets Gamma_i >= 0 (W).
struct HtbTargets {
    std::vector<double> gammas;

    static HtbTargets common(std::size_t count, double gamma) { return {std::vector<double>(count, gamma)}; }
};

struct HtbOutcome {
    ReflectionProfile profile;
    bool converged = false;
    std::size_t iterations = 0;
    /// q_re_i >= Gamma_i (1 - 1e-9) at the final profile.
    std::vector<bool> satisfied;
    /// Retrodirective power at the final profile.
    std::vector<double> q_re;
};

inline constexpr double kHtbStepTolerance = 1e-10;
inline constexpr double kHtbSatisfiedRelTol = 1e-9;

/// Foschini-Miljanic style target tracking, synchronous over all ERs:
///
///   beta_i(l+1) = min(1, Gamma_i / Q_RE(beta(l), d_i) * beta_i(l))
///
/// started from beta(0) = 1 with channels frozen. Stops when the largest
/// coefficient change drops below `tol` or after `max_iter` updates. A zero
/// target drives beta_i to 0; a zero Q_RE with a positive target is treated as
/// an infinite ratio, so beta_i goes to 1.
HtbOutcome htb_iterate(const SystemParams& params, const NetworkRealization& net, const ChannelRealization& channels,
                       const HtbTargets& targets, std::size_t max_iter = 100, double tol = kHtbStepTolerance);

struct HtbClosedForm {
    bool feasible = false;
    /// Raw solution of the linear system (empty when singular).
    std::vector<double> solution;
    /// Set only when feasible.
    ReflectionProfile profile;
    std::string reason;
};

/// Solves Q_RE(beta, d_i) = Gamma_i for all i at once. Writing
/// a_i = zeta P_t M d_i^-3a |g_i|^2, b_j = d_j^-2a |g_j|^2, N = M sigma^2/(P_t tau),
/// the conditions are (I - F) beta = u with F_ij = Gamma_i b_j / a_i and
/// u_i = Gamma_i N / a_i (self-coupling j = i included). Feasible iff the
/// system is nonsingular and every beta_i lands in (0,1], or is 0 for a zero target.
HtbClosedForm htb_closed_form(const SystemParams& params, const NetworkRealization& net,
                              const ChannelRealization& channels, const HtbTargets& targets);

}  // namespace retrobeam
