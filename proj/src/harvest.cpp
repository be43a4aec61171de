#include "retrobeam/harvest.hpp"

#include <cmath>
#include <string>

#include "retrobeam/simd/kernels.hpp"

namespace retrobeam {

void ReflectionProfile::check(std::size_t expected) const
{
    if (betas.size() != expected) {
        throw ParamError("reflection profile has " + std::to_string(betas.size()) + " entries, expected " +
                         std::to_string(expected));
    }
    for (double b : betas) {
        if (!(b >= 0.0 && b <= 1.0)) {
            throw ParamError("reflection coefficient " + std::to_string(b) + " outside [0,1]");
        }
    }
}

namespace {

void check_inputs(const NetworkRealization& net, const ChannelRealization& channels,
                  const ReflectionProfile& profile)
{
    if (channels.size() != net.size()) {
        throw ParamError("channel realization does not match the network size");
    }
    profile.check(net.size());
}

}  // namespace

HarvestReport harvested_energy_asymptotic(const SystemParams& params, const NetworkRealization& net,
                                          const ChannelRealization& channels, const ReflectionProfile& profile)
{
    check_inputs(net, channels, profile);
    const std::size_t count = net.size();
    const double m = static_cast<double>(params.antennas);

    // Round-trip (dyadic) gain d^-2a |g|^2 of each ER.
    std::vector<double> dyadic(count);
    std::vector<double> omni(count);
    for (std::size_t k = 0; k < count; ++k) {
        omni[k] = params.omni_power(net.distances[k]);
        dyadic[k] = std::pow(net.distances[k], -2.0 * params.pathloss_exp) * channels.gain_power(k);
    }
    const double denominator = simd::dot(dyadic, profile.betas) + params.noise_term();

    HarvestReport report;
    report.q_om = omni;
    report.q_re.assign(count, 0.0);
    report.q_total.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (denominator > 0.0) {
            report.q_re[i] = m * omni[i] * profile.betas[i] * dyadic[i] / denominator;
        }
        report.q_total[i] = report.q_om[i] + report.q_re[i];
    }
    return report;
}

namespace {

struct ConjugatedPilot {
    std::vector<std::complex<double>> u;
    double norm_sq = 0.0;
};

ConjugatedPilot matched_filter_output(const SystemParams& params, const NetworkRealization& net,
                                      const ChannelRealization& channels, const ReflectionProfile& profile,
                                      Rng& noise_rng)
{
    if (channels.mode() != ChannelMode::full) {
        throw ParamError("the two-phase simulation needs full-mode channel vectors");
    }
    check_inputs(net, channels, profile);
    const unsigned m = params.antennas;
    if (channels.size() > 0 && channels.antennas() != m) {
        throw ParamError("channel vectors do not have M entries");
    }

    ConjugatedPilot pilot;
    pilot.u.resize(m);
    if (params.noise_w > 0.0) {
        fill_complex_gaussian(pilot.u, params.noise_w / params.tau_s, noise_rng);
    }
    for (std::size_t k = 0; k < net.size(); ++k) {
        if (profile.betas[k] == 0.0) {
            continue;
        }
        const std::complex<double> g = simd::sum(channels.vector(k));
        const double amp = std::sqrt(profile.betas[k] * params.pt_w / m *
                                     std::pow(net.distances[k], -2.0 * params.pathloss_exp));
        simd::axpy(amp * g, channels.vector(k), pilot.u);
    }
    pilot.norm_sq = simd::norm_sq(pilot.u);
    return pilot;
}

}  // namespace

std::vector<std::complex<double>> retrodirective_beam(const SystemParams& params, const NetworkRealization& net,
                                                      const ChannelRealization& channels,
                                                      const ReflectionProfile& profile, Rng& noise_rng)
{
    const ConjugatedPilot pilot = matched_filter_output(params, net, channels, profile, noise_rng);
    std::vector<std::complex<double>> beam(params.antennas);
    if (pilot.norm_sq == 0.0) {
        beam.assign(params.antennas, 1.0 / std::sqrt(static_cast<double>(params.antennas)));
        return beam;
    }
    const double scale = 1.0 / std::sqrt(pilot.norm_sq);
    for (std::size_t i = 0; i < beam.size(); ++i) {
        beam[i] = std::conj(pilot.u[i]) * scale;
    }
    return beam;
}

HarvestReport simulate_two_phase(const SystemParams& params, const NetworkRealization& net,
                                 const ChannelRealization& channels, const ReflectionProfile& profile,
                                 Rng& noise_rng)
{
    const ConjugatedPilot pilot = matched_filter_output(params, net, channels, profile, noise_rng);
    const std::size_t count = net.size();
    const double m = static_cast<double>(params.antennas);

    HarvestReport report;
    report.q_om.resize(count);
    report.q_re.resize(count);
    report.q_total.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double omni = params.omni_power(net.distances[i]);
        // |f_i^T x_e|^2 with x_e = conj(u)/||u||, i.e. |u^H f_i|^2/||u||^2.
        const double coupling = pilot.norm_sq > 0.0
                                    ? std::norm(simd::dot_conj(pilot.u, channels.vector(i))) / pilot.norm_sq
                                    : channels.gain_power(i) / m;
        report.q_om[i] = omni;
        report.q_total[i] = omni * coupling;
        report.q_re[i] = report.q_total[i] - omni;
    }
    return report;
}

}  // namespace retrobeam
