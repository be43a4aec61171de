#include "retrobeam/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace retrobeam {

double SystemParams::mean_count() const
{
    return density * std::numbers::pi * (radius_m * radius_m - exclusion_m * exclusion_m);
}

double SystemParams::noise_term() const
{
    return static_cast<double>(antennas) * noise_w / (pt_w * tau_s);
}

double SystemParams::omni_power(double d) const
{
    return zeta * pt_w * std::pow(d, -pathloss_exp);
}

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw ParamError("invalid parameters: " + what);
    }
}

}  // namespace

SystemParams validate_params(const SystemParams& raw, std::vector<std::string>* warnings)
{
    for (double v : {raw.density, raw.exclusion_m, raw.radius_m, raw.pathloss_exp, raw.pt_w, raw.noise_w,
                     raw.tau_s, raw.zeta, raw.carrier_hz}) {
        require(std::isfinite(v), "all fields must be finite");
    }
    require(raw.antennas >= 1, "antenna count M must be >= 1");
    require(raw.density >= 0.0, "density lambda must be >= 0");
    require(raw.exclusion_m > 1.0, "exclusion radius xi must exceed 1 m");
    require(raw.radius_m > raw.exclusion_m, "cell radius rho must exceed xi");
    require(raw.pathloss_exp > 2.0, "path-loss exponent alpha must exceed 2");
    require(raw.pt_w > 0.0, "transmit power must be positive");
    require(raw.noise_w >= 0.0, "noise power must be >= 0");
    require(raw.tau_s > 0.0, "waveform duration tau must be positive");
    require(raw.zeta > 0.0 && raw.zeta <= 1.0, "efficiency zeta must lie in (0,1]");
    require(raw.carrier_hz > 0.0, "carrier frequency must be positive");

    const double round_trip = 2.0 * raw.exclusion_m / kSpeedOfLight;
    if (warnings != nullptr && raw.tau_s >= round_trip) {
        std::ostringstream os;
        os << "waveform duration tau=" << raw.tau_s << " s is not shorter than the minimum round-trip delay "
           << round_trip << " s; pilot and reflections overlap";
        warnings->push_back(os.str());
    }
    return raw;
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt) + 30.0;
}

}  // namespace retrobeam
