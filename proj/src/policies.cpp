#include "retrobeam/policies.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "retrobeam/simd/kernels.hpp"

namespace retrobeam {

ReflectionProfile dib_profile(const SystemParams& params, const NetworkRealization& net)
{
    ReflectionProfile profile;
    profile.betas.reserve(net.size());
    for (double d : net.distances) {
        profile.betas.push_back(std::min(1.0, std::pow(d / params.radius_m, 2.0 * params.pathloss_exp)));
    }
    return profile;
}

ReflectionProfile fb_profile(const NetworkRealization& net)
{
    return {std::vector<double>(net.size(), 1.0)};
}

ReflectionProfile dbb_profile(const SystemParams& params, const NetworkRealization& net, double delta)
{
    if (!(delta >= params.exclusion_m && delta <= params.radius_m)) {
        throw ParamError("distance threshold must lie in [xi, rho]");
    }
    ReflectionProfile profile;
    profile.betas.reserve(net.size());
    for (double d : net.distances) {
        profile.betas.push_back(d > delta ? 1.0 : 0.0);
    }
    return profile;
}

ReflectionProfile pbb_profile(const NetworkRealization& net, double p, Rng& rng)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParamError("reflection probability must lie in [0,1]");
    }
    std::bernoulli_distribution coin(p);
    ReflectionProfile profile;
    profile.betas.reserve(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        profile.betas.push_back(coin(rng) ? 1.0 : 0.0);
    }
    return profile;
}

namespace {

void check_targets(const NetworkRealization& net, const ChannelRealization& channels, const HtbTargets& targets)
{
    if (targets.gammas.size() != net.size() || channels.size() != net.size()) {
        throw ParamError("targets, channels and network must have the same length");
    }
    for (double g : targets.gammas) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw ParamError("harvesting targets must be finite and >= 0");
        }
    }
}

// Per-ER constants of the retrodirective term: q_re_i = coupling_i beta_i / (dyadic . beta + N).
struct RetroTerms {
    std::vector<double> dyadic;    // b_i = d_i^-2a |g_i|^2
    std::vector<double> coupling;  // a_i = zeta P_t M d_i^-3a |g_i|^2
    double noise = 0.0;

    RetroTerms(const SystemParams& params, const NetworkRealization& net, const ChannelRealization& channels)
        : dyadic(net.size()), coupling(net.size()), noise(params.noise_term())
    {
        const double m = static_cast<double>(params.antennas);
        for (std::size_t i = 0; i < net.size(); ++i) {
            dyadic[i] = std::pow(net.distances[i], -2.0 * params.pathloss_exp) * channels.gain_power(i);
            coupling[i] = m * params.omni_power(net.distances[i]) * dyadic[i];
        }
    }

    void evaluate(const std::vector<double>& betas, std::vector<double>& q_re) const
    {
        const double denominator = simd::dot(dyadic, betas) + noise;
        for (std::size_t i = 0; i < betas.size(); ++i) {
            q_re[i] = denominator > 0.0 ? coupling[i] * betas[i] / denominator : 0.0;
        }
    }
};

}  // namespace

HtbOutcome htb_iterate(const SystemParams& params, const NetworkRealization& net, const ChannelRealization& channels,
                       const HtbTargets& targets, std::size_t max_iter, double tol)
{
    check_targets(net, channels, targets);
    const std::size_t count = net.size();
    const RetroTerms terms(params, net, channels);

    HtbOutcome out;
    std::vector<double> beta(count, 1.0);
    std::vector<double> next(count);
    std::vector<double> q_re(count);

    for (std::size_t l = 0; l < max_iter; ++l) {
        terms.evaluate(beta, q_re);
        double step = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double gamma = targets.gammas[i];
            if (gamma == 0.0) {
                next[i] = 0.0;
            } else if (q_re[i] == 0.0) {
                next[i] = 1.0;
            } else {
                next[i] = std::min(1.0, gamma / q_re[i] * beta[i]);
            }
            step = std::max(step, std::abs(next[i] - beta[i]));
        }
        beta.swap(next);
        out.iterations = l + 1;
        if (step < tol) {
            out.converged = true;
            break;
        }
    }
    if (count == 0) {
        out.converged = true;
    }

    terms.evaluate(beta, q_re);
    out.satisfied.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.satisfied[i] = q_re[i] >= targets.gammas[i] * (1.0 - kHtbSatisfiedRelTol);
    }
    out.profile.betas = std::move(beta);
    out.q_re = std::move(q_re);
    return out;
}

HtbClosedForm htb_closed_form(const SystemParams& params, const NetworkRealization& net,
                              const ChannelRealization& channels, const HtbTargets& targets)
{
    check_targets(net, channels, targets);
    const auto count = static_cast<Eigen::Index>(net.size());
    HtbClosedForm out;
    if (count == 0) {
        out.reason = "empty network";
        return out;
    }
    const RetroTerms terms(params, net, channels);

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(count, count);
    Eigen::VectorXd rhs(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const double a = terms.coupling[static_cast<std::size_t>(i)];
        const double gamma = targets.gammas[static_cast<std::size_t>(i)];
        if (a <= 0.0) {
            if (gamma > 0.0) {
                out.reason = "ER " + std::to_string(i) + " has zero retrodirective coupling";
                return out;
            }
            rhs(i) = 0.0;
            continue;
        }
        for (Eigen::Index j = 0; j < count; ++j) {
            system(i, j) -= gamma * terms.dyadic[static_cast<std::size_t>(j)] / a;
        }
        rhs(i) = gamma * terms.noise / a;
    }

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) {
        out.reason = "singular target system";
        return out;
    }
    const Eigen::VectorXd beta = lu.solve(rhs);
    out.solution.assign(beta.data(), beta.data() + count);

    constexpr double slack = 1e-12;
    std::vector<double> clamped(out.solution);
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        const double b = clamped[i];
        const bool zero_target = targets.gammas[i] == 0.0;
        if (zero_target && std::abs(b) <= slack) {
            clamped[i] = 0.0;
        } else if (!(b > 0.0) || b > 1.0 + slack) {
            out.reason = "ER " + std::to_string(i) + " needs beta = " + std::to_string(b) + " outside (0,1]";
            return out;
        } else {
            clamped[i] = std::min(b, 1.0);
        }
    }
    out.feasible = true;
    out.profile.betas = std::move(clamped);
    return out;
}

}  // namespace retrobeam
