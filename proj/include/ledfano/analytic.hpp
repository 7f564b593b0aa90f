#ifndef LEDFANO_ANALYTIC_HPP
#define LEDFANO_ANALYTIC_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ledfano/params.hpp"

namespace ledfano {

struct FanoQuery {
    OperatingPoint op;
    double W_e = 1.0;   // pump Fano factor at the queried frequency
    double omega = 0.0; // [rad/s]

    void validate() const {
        if (!(omega >= 0.0)) throw std::invalid_argument("omega must be >= 0");
        if (!(W_e >= 0.0)) throw std::invalid_argument("W_e must be >= 0");
    }
};

// Master formula:
//   W_ph = 1 - 2 eta_d zeta1 / (1+(Omega tau'')^2)
//            + (eta_d^2/eta) (1+W_e) zeta2 / (1+(Omega tau'')^2)
inline double fano_master(const OperatingPoint& op, double W_e, double omega) {
    if (op.eta == 0.0) throw std::invalid_argument("zero quantum efficiency");
    const double d = 1.0 + omega * omega * op.tau_dd * op.tau_dd;
    return 1.0 - 2.0 * op.eta_d * op.zeta1 / d +
           (op.eta_d * op.eta_d / op.eta) * (1.0 + W_e) * op.zeta2 / d;
}

inline double fano_master(const FanoQuery& q) {
    q.validate();
    return fano_master(q.op, q.W_e, q.omega);
}

inline double fano_zero_freq(const OperatingPoint& op, double W_e) {
    return fano_master(op, W_e, 0.0);
}

// Homogeneous emission/detection, zero frequency.
inline double fano_homogeneous(double eta, double eta_d, double W_e) {
    if (eta == 0.0) throw std::invalid_argument("zero quantum efficiency");
    return 1.0 - 2.0 * eta_d + (eta_d * eta_d / eta) * (1.0 + W_e);
}

// Inhomogeneous case with a single multimodeness factor zeta in (0,1].
inline double fano_inhomogeneous(double eta, double eta_d, double zeta, double W_e) {
    if (eta == 0.0) throw std::invalid_argument("zero quantum efficiency");
    if (!(zeta > 0.0 && zeta <= 1.0))
        throw std::invalid_argument("zeta must lie in (0,1]");
    return 1.0 - 2.0 * eta_d * zeta + (eta_d * eta_d * zeta / eta) * (1.0 + W_e);
}

// Classic single-efficiency formula, W_ph = 1 - eta + eta W_e.
inline double fano_classic(double eta, double W_e) {
    return 1.0 - eta + eta * W_e;
}

// Alternative zero-frequency formula kept for comparison plots.
inline double fano_alternative(double eta, double eta_d, double W_e) {
    if (eta == 0.0) throw std::invalid_argument("zero quantum efficiency");
    return 1.0 - eta + (eta_d * eta_d / eta) * W_e;
}

// |dN~/dP~| = eta_d / sqrt(1 + (Omega tau'')^2)
inline double modulation_response(const OperatingPoint& op, double omega) {
    return op.eta_d / std::sqrt(1.0 + omega * omega * op.tau_dd * op.tau_dd);
}

// Photon flux cross-spectrum <dV_l^* dV_m>/T between cavity modes l and m.
inline std::complex<double> mode_cross_spectrum(const OperatingPoint& op, std::size_t l,
                                                std::size_t m, double omega, double W_e) {
    if (l >= op.n_modes() || m >= op.n_modes())
        throw std::out_of_range("mode index out of range");
    const std::complex<double> i(0.0, 1.0);
    const double ot = omega * op.tau_dd;
    const double gl = op.tau_dd / op.mode_tau_r_eff[l];
    const double gm = op.tau_dd / op.mode_tau_r_eff[m];

    // Pump + radiative + non-radiative drive through the shared carrier reservoir.
    const double drive = W_e * op.P0 + op.V0 + op.eps0 * op.V0;
    std::complex<double> s = gl * gm * drive / (1.0 + ot * ot);
    // Cross correlation <Gamma_r^* F_r,l> = -V_l0.
    s += gl * (-op.mode_flux[m]) / (1.0 - i * ot);
    s += gm * (-op.mode_flux[l]) / (1.0 + i * ot);
    if (l == m) s += op.mode_flux[l];
    return s;
}

// Experimental ratio r = W_ph(W_e=0)/W_ph(W_e=1) in the homogeneous case.
inline double ratio_r(double eta, double eta_d) {
    const double num = 1.0 - 2.0 * eta_d + eta_d * eta_d / eta;
    const double den = 1.0 - 2.0 * eta_d + 2.0 * eta_d * eta_d / eta;
    if (den == 0.0) throw std::invalid_argument("ratio_r: zero denominator");
    return num / den;
}

struct SplReport {
    bool sub_poissonian = false;  // true iff 0 < eta_d < eta
    double K_sum = 0.0;           // K_r + K_nr
    double eta = 0.0;
    double eta_d = 0.0;
};

// Sub-Poissonian-light condition with a Poissonian pump.
inline SplReport spl_condition(const OperatingPoint& op) {
    SplReport r;
    r.eta = op.eta;
    r.eta_d = op.eta_d;
    r.K_sum = op.K_r + op.K_nr;
    r.sub_poissonian = (op.eta_d > 0.0 && op.eta_d < op.eta);
    // The two criteria are algebraically equivalent whenever a non-radiative
    // channel is present; the boundary eps0 = 0 forces eta_d = eta.
    if (op.eps0 > 0.0 && r.sub_poissonian != (r.K_sum < 0.0))
        throw std::logic_error("spl_condition: criteria disagree");
    return r;
}

}  // namespace ledfano

#endif
