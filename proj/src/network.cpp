#include "retrobeam/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace retrobeam {

NetworkRealization NetworkRealization::from_distances(std::vector<double> d)
{
    NetworkRealization net;
    net.angles.assign(d.size(), 0.0);
    net.distances = std::move(d);
    return net;
}

NetworkRealization sample_network(const SystemParams& params, Rng& rng)
{
    NetworkRealization net;
    const double mean = params.mean_count();
    if (mean <= 0.0) {
        return net;
    }
    std::poisson_distribution<long long> count_dist(mean);
    const auto count = static_cast<std::size_t>(count_dist(rng));

    const double inner2 = params.exclusion_m * params.exclusion_m;
    const double outer2 = params.radius_m * params.radius_m;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    net.distances.reserve(count);
    net.angles.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // Radial CDF (r^2 - xi^2)/(rho^2 - xi^2) gives uniform density in area.
        const double r = std::sqrt(inner2 + unit(rng) * (outer2 - inner2));
        net.distances.push_back(std::clamp(r, params.exclusion_m, params.radius_m));
        net.angles.push_back(2.0 * std::numbers::pi * unit(rng));
    }
    return net;
}

void insert_tagged(NetworkRealization& net, double d)
{
    net.distances.insert(net.distances.begin(), d);
    net.angles.insert(net.angles.begin(), 0.0);
}

}  // namespace retrobeam
