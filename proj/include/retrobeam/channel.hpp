#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "retrobeam/network.hpp"
#include "retrobeam/params.hpp"
#include "retrobeam/rng.hpp"

namespace retrobeam {

enum class ChannelMode { full, reduced };

/// Rayleigh block-fading state of every ER for one block.
///
/// Full mode stores the M-element channel vector f_i of each ER (row-major,
/// ER i occupies [i*M, (i+1)*M)) and caches |g_i|^2 = |sum_m f_{i,m}|^2.
/// Reduced mode stores only |g_i|^2, which is exponential with mean M; that is
/// all the asymptotic harvested-power expression needs.
class ChannelRealization {
public:
    using cplx = std::complex<double>;

    static ChannelRealization reduced(std::vector<double> gain_power);
    static ChannelRealization full(unsigned antennas, std::vector<cplx> coefficients);

    [[nodiscard]] ChannelMode mode() const { return mode_; }
    [[nodiscard]] std::size_t size() const { return gain_power_.size(); }
    [[nodiscard]] unsigned antennas() const { return antennas_; }

    /// |g_i|^2
    [[nodiscard]] double gain_power(std::size_t i) const { return gain_power_[i]; }
    [[nodiscard]] std::span<const double> gain_powers() const { return gain_power_; }

    /// f_i; full mode only.
    [[nodiscard]] std::span<const cplx> vector(std::size_t i) const;

private:
    ChannelMode mode_ = ChannelMode::reduced;
    unsigned antennas_ = 0;
    std::vector<double> gain_power_;
    std::vector<cplx> coefficients_;
};

/// Independent channels for every ER of `net`. Full mode draws M i.i.d.
/// CN(0,1) entries per ER; reduced mode draws |g_i|^2 ~ Exp(mean M).
ChannelRealization draw_channels(const SystemParams& params, const NetworkRealization& net, ChannelMode mode,
                                 Rng& rng);

/// Fills `out` with i.i.d. CN(0, variance) samples.
void fill_complex_gaussian(std::span<std::complex<double>> out, double variance, Rng& rng);

}  // namespace retrobeam
