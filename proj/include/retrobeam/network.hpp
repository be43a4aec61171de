#pragma once

#include <cstddef>
#include <vector>

#include "retrobeam/params.hpp"
#include "retrobeam/rng.hpp"

namespace retrobeam {

/// One draw of the ER point process on the annulus [xi, rho].
/// Angles are kept for plotting; only distances enter the energy formulas.
struct NetworkRealization {
    std::vector<double> distances;
    std::vector<double> angles;

    [[nodiscard]] std::size_t size() const { return distances.size(); }
    [[nodiscard]] bool empty() const { return distances.empty(); }

    /// Network built from explicit distances (angles zero).
    static NetworkRealization from_distances(std::vector<double> d);
};

/// Homogeneous PPP restricted to the annulus: K ~ Poisson(lambda*pi*(rho^2-xi^2)),
/// then K i.i.d. points uniform in area.
NetworkRealization sample_network(const SystemParams& params, Rng& rng);

/// Inserts an ER at distance `d` at index 0 (Palm conditioning on a tagged ER).
void insert_tagged(NetworkRealization& net, double d);

}  // namespace retrobeam
