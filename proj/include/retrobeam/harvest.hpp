#pragma once

#include <complex>
#include <vector>

#include "retrobeam/channel.hpp"
#include "retrobeam/network.hpp"
#include "retrobeam/params.hpp"
#include "retrobeam/rng.hpp"

namespace retrobeam {

/// Reflection coefficient beta_i in [0,1] of every ER.
struct ReflectionProfile {
    std::vector<double> betas;

    [[nodiscard]] std::size_t size() const { return betas.size(); }
    /// Throws ParamError unless every beta is in [0,1] and the length is `expected`.
    void check(std::size_t expected) const;
};

/// Per-ER harvested power split into the omnidirectional and retrodirective parts.
struct HarvestReport {
    std::vector<double> q_om;
    std::vector<double> q_re;
    std::vector<double> q_total;
};

/// Massive-MIMO closed form of the harvested power.
///
///   q_om_i = zeta P_t d_i^-a
///   q_re_i = zeta P_t M d_i^-3a beta_i |g_i|^2 / (sum_k d_k^-2a beta_k |g_k|^2 + M sigma^2/(P_t tau))
///
/// The sum runs over all ERs, i included. With sigma^2 = 0 and nothing
/// reflected the retrodirective part is 0.
HarvestReport harvested_energy_asymptotic(const SystemParams& params, const NetworkRealization& net,
                                          const ChannelRealization& channels, const ReflectionProfile& profile);

/// Unit-norm energy beam x_e formed by phase conjugation of the backscattered
/// pilot: x_e = conj(u)/||u||, u = sum_k sqrt(beta_k P_t/M d_k^-2a) g_k f_k + n~
/// with n~ ~ CN(0, sigma^2/tau I). When u vanishes (nothing reflected, no noise)
/// the ET keeps the uniform pilot split, x_e = 1/sqrt(M).
std::vector<std::complex<double>> retrodirective_beam(const SystemParams& params, const NetworkRealization& net,
                                                      const ChannelRealization& channels,
                                                      const ReflectionProfile& profile, Rng& noise_rng);

/// Exact finite-M simulation of both phases: q_total_i = zeta P_t d_i^-a |f_i^T x_e|^2.
///
/// The omnidirectional/retrodirective split only exists asymptotically, so
/// q_om is the analytic zeta P_t d^-a and q_re = q_total - q_om, which can be
/// slightly negative at finite M. Requires full-mode channels.
HarvestReport simulate_two_phase(const SystemParams& params, const NetworkRealization& net,
                                 const ChannelRealization& channels, const ReflectionProfile& profile,
                                 Rng& noise_rng);

}  // namespace retrobeam
