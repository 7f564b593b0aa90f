#ifndef LEDFANO_PARAMS_HPP
#define LEDFANO_PARAMS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledfano/constants.hpp"

namespace ledfano {

inline constexpr double infinite_lifetime = std::numeric_limits<double>::infinity();

// Per-mode device constants at the running point.
struct ModeParams {
    double kappa0 = 0.0;    // photon escape rate of the mode [1/s]
    double tau_r = 0.0;     // radiative lifetime into the mode [s]
    double K_r = 0.0;       // lifetime sensitivity to carrier number, dimensionless
    double xi = 1.0;        // detection transmission, in [0,1]
};

struct DeviceParams {
    std::vector<ModeParams> modes;
    double tau_nr0 = infinite_lifetime;  // non-radiative lifetime [s]; infinity = no channel
    double K_nr = 0.0;
    double nbar_thermal = 0.0;           // thermal photons per mode; must stay 0

    void validate() const {
        if (modes.empty())
            throw std::invalid_argument("device: at least one photon mode is required");
        for (std::size_t l = 0; l < modes.size(); ++l) {
            const auto& m = modes[l];
            const std::string tag = "mode." + std::to_string(l + 1);
            if (!(m.kappa0 > 0.0))
                throw std::invalid_argument(tag + ".kappa0 must be > 0");
            if (!(m.tau_r > 0.0))
                throw std::invalid_argument(tag + ".tau_r must be > 0");
            if (!(m.xi >= 0.0 && m.xi <= 1.0))
                throw std::invalid_argument(tag + ".xi must lie in [0,1]");
            if (!std::isfinite(m.K_r))
                throw std::invalid_argument(tag + ".K_r must be finite");
        }
        if (!(tau_nr0 > 0.0))
            throw std::invalid_argument("tau_nr0 must be > 0 (or infinite)");
        if (!std::isfinite(K_nr))
            throw std::invalid_argument("K_nr must be finite");
        if (nbar_thermal != 0.0)
            throw std::invalid_argument("nbar_thermal must be 0 (thermal photons are neglected)");
    }

    bool has_nonradiative() const { return std::isfinite(tau_nr0); }
};

struct Modulation {
    double amplitude = 0.0;  // [1/s]
    double omega = 0.0;      // [rad/s]
};

struct PumpSpec {
    double P0 = 0.0;   // mean pump rate [1/s]
    double W_e = 1.0;  // pump Fano factor
    std::optional<Modulation> modulation;

    void validate() const {
        if (!(P0 > 0.0)) throw std::invalid_argument("P0 must be > 0");
        if (!(W_e >= 0.0)) throw std::invalid_argument("W_e must be >= 0");
    }
};

// Everything the small-signal analysis needs at the running point.
struct OperatingPoint {
    double P0 = 0.0;
    double W_e = 1.0;
    double n_c0 = 0.0;        // mean carrier number
    double tau_r0 = 0.0;      // total radiative lifetime, 1/tau_r0 = sum_l 1/tau_r_l
    double tau_nr0 = infinite_lifetime;
    double eps0 = 0.0;        // tau_r0 / tau_nr0
    double K_r = 0.0;         // flux-weighted mean of per-mode K_r
    double K_nr = 0.0;
    double tau_r_eff = 0.0;   // tau_r' = tau_r0/(1+K_r)
    double tau_nr_eff = infinite_lifetime;  // tau_nr' = tau_nr0/(1-K_nr)
    double tau_dd = 0.0;      // tau'' : 1/tau'' = 1/tau_r' + 1/tau_nr'
    double eps_prime = 0.0;   // tau_r'/tau_nr'
    double beta0 = 0.0;       // transfer efficiency
    double eta = 0.0;         // quantum efficiency
    double eta_d = 0.0;       // differential quantum efficiency
    double zeta1 = 1.0;
    double zeta2 = 1.0;
    double V0 = 0.0;          // total cavity output flux [1/s]
    double N0 = 0.0;          // detected flux [1/s]
    std::vector<double> mode_flux;       // V_l0 = n_c0 / tau_r_l
    std::vector<double> mode_photon;     // (n_l)_0 = V_l0 / kappa_l
    std::vector<double> mode_tau_r_eff;  // tau_r_l' = tau_r_l/(1+K_r_l)
    std::vector<double> mode_xi;

    std::size_t n_modes() const { return mode_flux.size(); }
};

// eta = beta0/(1+eps0), eta_d = beta0/(1+eps') with eps' = eps0 (1-K_nr)/(1+K_r).
inline std::pair<double, double> efficiencies_from_K(double eps0, double beta0,
                                                     double K_r, double K_nr) {
    if (!(eps0 >= 0.0)) throw std::invalid_argument("eps0 must be >= 0");
    if (!(beta0 >= 0.0 && beta0 <= 1.0)) throw std::invalid_argument("beta0 must lie in [0,1]");
    if (!(K_r > -1.0))
        throw std::invalid_argument("unphysical sensitivity: K_r = " + std::to_string(K_r) +
                                    " <= -1 makes tau_r' non-positive");
    const double eps_prime = eps0 * (1.0 - K_nr) / (1.0 + K_r);
    if (eps_prime <= -1.0)
        throw std::invalid_argument("unphysical differential efficiency: eps' = " +
                                    std::to_string(eps_prime) + " <= -1");
    return {beta0 / (1.0 + eps0), beta0 / (1.0 + eps_prime)};
}

inline OperatingPoint derive_operating_point(const DeviceParams& device, const PumpSpec& pump) {
    device.validate();
    pump.validate();

    OperatingPoint op;
    op.P0 = pump.P0;
    op.W_e = pump.W_e;
    op.tau_nr0 = device.tau_nr0;
    op.K_nr = device.K_nr;

    double inv_tau_r0 = 0.0;
    for (const auto& m : device.modes) inv_tau_r0 += 1.0 / m.tau_r;
    op.tau_r0 = 1.0 / inv_tau_r0;

    const double inv_tau_nr0 = device.has_nonradiative() ? 1.0 / device.tau_nr0 : 0.0;
    op.eps0 = op.tau_r0 * inv_tau_nr0;
    op.n_c0 = pump.P0 / (inv_tau_r0 + inv_tau_nr0);
    op.V0 = op.n_c0 * inv_tau_r0;  // = P0/(1+eps0)

    // Flux weights w_l = tau_r0/tau_r_l sum to one; beta0 is the flux-weighted mean of xi.
    double K_r = 0.0, beta0 = 0.0;
    for (const auto& m : device.modes) {
        const double w = op.tau_r0 / m.tau_r;
        K_r += w * m.K_r;
        beta0 += w * m.xi;
        op.mode_flux.push_back(op.n_c0 / m.tau_r);
        op.mode_photon.push_back(op.n_c0 / (m.tau_r * m.kappa0));
        op.mode_xi.push_back(m.xi);
    }
    op.K_r = K_r;
    op.beta0 = beta0;
    op.N0 = beta0 * op.V0;

    if (!(1.0 + K_r > 0.0))
        throw std::invalid_argument("unphysical sensitivity: K_r = " + std::to_string(K_r) +
                                    " <= -1 makes tau_r' non-positive");
    op.tau_r_eff = op.tau_r0 / (1.0 + K_r);
    op.tau_nr_eff = device.has_nonradiative() ? device.tau_nr0 / (1.0 - device.K_nr)
                                              : infinite_lifetime;
    const double inv_tau_dd = (1.0 + K_r) * inv_tau_r0 + (1.0 - device.K_nr) * inv_tau_nr0;
    if (!(inv_tau_dd > 0.0))
        throw std::invalid_argument("unphysical sensitivity: 1/tau'' = " +
                                    std::to_string(inv_tau_dd) + " is non-positive");
    op.tau_dd = 1.0 / inv_tau_dd;
    op.eps_prime = op.eps0 * (1.0 - device.K_nr) / (1.0 + K_r);

    auto [eta, eta_d] = efficiencies_from_K(op.eps0, beta0, K_r, device.K_nr);
    op.eta = eta;
    op.eta_d = eta_d;

    for (const auto& m : device.modes) {
        if (!(1.0 + m.K_r > 0.0))
            throw std::invalid_argument("unphysical sensitivity: per-mode K_r = " +
                                        std::to_string(m.K_r) + " <= -1");
        op.mode_tau_r_eff.push_back(m.tau_r / (1.0 + m.K_r));
    }

    // Multimodeness factors. The second bracket of zeta1 equals one by the
    // definition of beta0; it is evaluated literally anyway.
    double bracket_eff = 0.0, bracket_raw = 0.0;
    for (std::size_t l = 0; l < device.modes.size(); ++l) {
        bracket_eff += (op.tau_r_eff / op.mode_tau_r_eff[l]) * device.modes[l].xi / beta0;
        bracket_raw += (op.tau_r0 / device.modes[l].tau_r) * device.modes[l].xi / beta0;
    }
    op.zeta1 = bracket_eff * bracket_raw;
    op.zeta2 = bracket_eff * bracket_eff;
    if (!std::isfinite(op.zeta1) || !std::isfinite(op.zeta2))
        throw std::invalid_argument("non-finite multimodeness factor (beta0 = " +
                                    std::to_string(beta0) + ")");
    return op;
}

// Order-of-magnitude geometry inputs for the low-injection validity estimate.
struct CavityGeometry {
    double cavity_volume = 0.0;      // [m^3]
    double active_volume = 0.0;      // [m^3]
    double r_abs_per_length = 0.0;   // absorption coefficient R_abs/c [1/m]
    double transit_time = 0.0;       // photon transit time through the device [s]
    double Q = 0.0;                  // cavity quality factor, dimensionless
};

struct RegimeReport {
    double kappa_geo = 0.0;                // geometric estimate of the escape rate [1/s]
    double abs_rate = 0.0;                 // absorption rate scaled by V_active/V_cavity [1/s]
    double abs_ratio = 0.0;                // abs_rate / kappa_geo
    std::vector<double> mode_occupation;   // (n_l)_0 = R_sp,l / kappa_l^0 per mode
    double threshold = 0.01;
    bool pass = false;
};

// kappa ~ 1/(V^{1/3}/c + Q t_dev); R_abs scales with the active/cavity volume ratio.
inline RegimeReport check_low_injection(const DeviceParams& device, const PumpSpec& pump,
                                        const CavityGeometry& geo, double threshold = 0.01) {
    RegimeReport rep;
    rep.threshold = threshold;
    const double c = constants::speed_of_light;
    rep.kappa_geo = 1.0 / (std::cbrt(geo.cavity_volume) / c + geo.Q * geo.transit_time);
    rep.abs_rate = geo.r_abs_per_length * c * (geo.active_volume / geo.cavity_volume);
    rep.abs_ratio = rep.abs_rate / rep.kappa_geo;

    const OperatingPoint op = derive_operating_point(device, pump);
    rep.mode_occupation = op.mode_photon;

    rep.pass = rep.abs_ratio < threshold;
    for (double n : rep.mode_occupation)
        if (!(n < threshold)) rep.pass = false;
    return rep;
}

}  // namespace ledfano

#endif
