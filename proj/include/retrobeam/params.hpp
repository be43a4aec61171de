#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace retrobeam {

/// Raised when a parameter set or a call argument violates the model's domain.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Physical constants of one cell. Everything is SI: W, m, s, Hz.
///
/// `carrier_hz` is recorded for provenance only. The model is baseband and
/// no formula reads it.
struct SystemParams {
    unsigned antennas = 500;      // M
    double density = 0.01;        // lambda, ERs per m^2
    double exclusion_m = 2.0;     // xi
    double radius_m = 30.0;       // rho
    double pathloss_exp = 3.0;    // alpha
    double pt_w = 1.0;            // transmit power
    double noise_w = 1e-18;       // sigma^2 (-150 dBm)
    double tau_s = 1e-8;          // single-tone waveform duration
    double zeta = 1.0;            // RF-to-DC efficiency
    double carrier_hz = 900e6;

    /// Mean ER count lambda*pi*(rho^2 - xi^2).
    [[nodiscard]] double mean_count() const;
    /// Matched-filter noise term M*sigma^2/(P_t*tau) of the harvested-power denominator.
    [[nodiscard]] double noise_term() const;
    /// zeta*P_t*d^-alpha.
    [[nodiscard]] double omni_power(double d) const;
};

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Checks every domain constraint and returns the parameters unchanged.
///
/// Throws ParamError on alpha <= 2, xi <= 1, rho <= xi, zeta outside (0,1],
/// non-positive P_t/tau/M, negative density or noise, or non-finite values.
/// A waveform that outlasts the shortest round trip (tau >= 2*xi/c) breaks the
/// orthogonality between the pilot and its reflections; this is reported
/// through `warnings` and does not reject the parameters.
SystemParams validate_params(const SystemParams& raw, std::vector<std::string>* warnings = nullptr);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace retrobeam
