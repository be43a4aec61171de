#include "retrobeam/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "retrobeam/simd/kernels.hpp"

namespace retrobeam {

ChannelRealization ChannelRealization::reduced(std::vector<double> gain_power)
{
    ChannelRealization ch;
    ch.mode_ = ChannelMode::reduced;
    ch.gain_power_ = std::move(gain_power);
    return ch;
}

ChannelRealization ChannelRealization::full(unsigned antennas, std::vector<cplx> coefficients)
{
    if (antennas == 0 || coefficients.size() % antennas != 0) {
        throw std::invalid_argument("channel coefficients must hold a whole number of length-M vectors");
    }
    ChannelRealization ch;
    ch.mode_ = ChannelMode::full;
    ch.antennas_ = antennas;
    ch.coefficients_ = std::move(coefficients);
    const std::size_t count = ch.coefficients_.size() / antennas;
    ch.gain_power_.resize(count);
    // Sequential sum on purpose: the cached gain must not depend on the kernel in use.
    const auto& ref = simd::scalar_kernels();
    for (std::size_t i = 0; i < count; ++i) {
        ch.gain_power_[i] = std::norm(ref.sum(ch.vector(i).data(), antennas));
    }
    return ch;
}

std::span<const ChannelRealization::cplx> ChannelRealization::vector(std::size_t i) const
{
    if (mode_ != ChannelMode::full) {
        throw std::logic_error("channel vectors are only stored in full mode");
    }
    return std::span<const cplx>(coefficients_).subspan(i * antennas_, antennas_);
}

void fill_complex_gaussian(std::span<std::complex<double>> out, double variance, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    for (auto& z : out) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = {re, im};
    }
}

ChannelRealization draw_channels(const SystemParams& params, const NetworkRealization& net, ChannelMode mode,
                                 Rng& rng)
{
    const std::size_t count = net.size();
    const unsigned m = params.antennas;
    if (mode == ChannelMode::reduced) {
        std::exponential_distribution<double> gain(1.0 / static_cast<double>(m));
        std::vector<double> g2(count);
        for (auto& v : g2) {
            v = gain(rng);
        }
        return ChannelRealization::reduced(std::move(g2));
    }
    std::vector<std::complex<double>> coeffs(count * m);
    fill_complex_gaussian(coeffs, 1.0, rng);
    return ChannelRealization::full(m, std::move(coeffs));
}

}  // namespace retrobeam
