#ifndef LEDFANO_QW_SEMISSION_HPP
#define LEDFANO_QW_SEMISSION_HPP

#include <cmath>
#include <stdexcept>

#include "ledfano/constants.hpp"

namespace ledfano {
namespace qw {

// Highly p-doped parabolic quantum well in a microcavity where spontaneous
// emission is allowed only at the band edge.  The hole band-edge occupation is
// taken as unity, so the relative SE rate is the electron Fermi factor alone.
struct QWParams {
    double m_eff = 0.1;  // electron effective mass / free electron mass
    double T = 3.0;      // lattice temperature [K]
    double n_s = 0.0;    // sheet carrier density [1/m^2]

    void validate() const {
        if (!(m_eff > 0.0)) throw std::invalid_argument("m_eff must be > 0");
        if (!(T > 0.0)) throw std::invalid_argument("T must be > 0");
        if (!(n_s >= 0.0)) throw std::invalid_argument("n_s must be >= 0");
    }
};

// 2D effective density of states n0 = m kB T / (pi hbar^2).
inline double degenerate_density_scale(double m_eff, double T) {
    if (!(m_eff > 0.0 && T > 0.0))
        throw std::invalid_argument("degenerate_density_scale: inputs must be positive");
    using namespace constants;
    return m_eff * electron_mass * boltzmann * T / (pi * hbar * hbar);
}

// Exact band-edge Fermi factor of a 2D parabolic band: f_e = 1 - exp(-n_s/n0).
inline double band_edge_occupation(const QWParams& p) {
    p.validate();
    const double n0 = degenerate_density_scale(p.m_eff, p.T);
    return -std::expm1(-p.n_s / n0);
}

// Relative SE rate, R = f_e * f_h with f_h = 1.
inline double se_rate(const QWParams& p) { return band_edge_occupation(p); }

// K_r = d ln R / d ln n_s - 1 = x e^{-x}/(1-e^{-x}) - 1 with x = n_s/n0.
inline double k_r_of_density(const QWParams& p) {
    p.validate();
    if (p.n_s == 0.0) return 0.0;  // linear SE limit
    const double x = p.n_s / degenerate_density_scale(p.m_eff, p.T);
    return x * std::exp(-x) / (-std::expm1(-x)) - 1.0;
}

}  // namespace qw
}  // namespace ledfano

#endif
