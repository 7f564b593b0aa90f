#ifndef LEDFANO_STEADY_STATE_HPP
#define LEDFANO_STEADY_STATE_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledfano/params.hpp"

namespace ledfano {

// One recombination channel as a carrier-number dependent rate law R(n_c).
// power_law: n_c/tau ~ n_c^p, anchored so that R(n_ref) = n_ref/tau_ref.
// qw_band_edge: R = rate_scale * (1 - exp(-n_c/n_deg)), the band-edge SE model.
struct RecombinationLaw {
    enum class Kind { none, power_law, qw_band_edge };

    Kind kind = Kind::none;
    double p = 1.0;
    double tau_ref = 1.0;    // [s]
    double n_ref = 1.0;
    double n_deg = 1.0;      // degeneracy carrier number for the QW law
    double rate_scale = 1.0; // [1/s]

    static RecombinationLaw none() { return {}; }

    static RecombinationLaw power_law(double p, double tau_ref, double n_ref) {
        if (!(tau_ref > 0.0)) throw std::invalid_argument("tau_ref must be > 0");
        if (!(n_ref > 0.0)) throw std::invalid_argument("n_ref must be > 0");
        RecombinationLaw law;
        law.kind = Kind::power_law;
        law.p = p;
        law.tau_ref = tau_ref;
        law.n_ref = n_ref;
        return law;
    }

    static RecombinationLaw qw_band_edge(double n_deg, double rate_scale) {
        if (!(n_deg > 0.0)) throw std::invalid_argument("n_deg must be > 0");
        if (!(rate_scale > 0.0)) throw std::invalid_argument("rate_scale must be > 0");
        RecombinationLaw law;
        law.kind = Kind::qw_band_edge;
        law.n_deg = n_deg;
        law.rate_scale = rate_scale;
        return law;
    }

    double rate(double n) const {
        switch (kind) {
            case Kind::none: return 0.0;
            case Kind::power_law: return (n_ref / tau_ref) * std::pow(n / n_ref, p);
            case Kind::qw_band_edge: return rate_scale * (-std::expm1(-n / n_deg));
        }
        return 0.0;
    }

    // Logarithmic derivative d ln R / d ln n, analytic per law.
    double log_slope(double n) const {
        switch (kind) {
            case Kind::none: return 0.0;
            case Kind::power_law: return p;
            case Kind::qw_band_edge: {
                if (n == 0.0) return 1.0;
                const double x = n / n_deg;
                return x * std::exp(-x) / (-std::expm1(-x));
            }
        }
        return 0.0;
    }

    double tau(double n) const {
        const double r = rate(n);
        return r > 0.0 ? n / r : infinite_lifetime;
    }
};

struct LifetimeModel {
    RecombinationLaw radiative;
    RecombinationLaw nonradiative;  // Kind::none means infinite tau_nr

    void validate() const {
        if (radiative.kind == RecombinationLaw::Kind::none)
            throw std::invalid_argument("lifetime model needs a radiative channel");
    }

    double total_rate(double n) const {
        return radiative.rate(n) + nonradiative.rate(n);
    }
};

// Root of P0 = R_r(n) + R_nr(n).  The total rate is monotone for the supported
// laws; geometric bracket expansion followed by bisection.
inline double solve_carrier_number(double P0, const LifetimeModel& model) {
    model.validate();
    if (!(P0 > 0.0)) throw std::invalid_argument("P0 must be > 0");

    auto f = [&](double n) { return model.total_rate(n) - P0; };

    double lo = model.radiative.kind == RecombinationLaw::Kind::power_law
                    ? model.radiative.n_ref
                    : model.radiative.n_deg;
    double hi = lo;
    int decades = 0;
    while (f(lo) > 0.0) {
        lo /= 10.0;
        if (++decades > 60)
            throw std::runtime_error("no steady state in search range [" +
                                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    decades = 0;
    while (f(hi) < 0.0) {
        hi *= 10.0;
        if (++decades > 60)
            throw std::runtime_error("no steady state in search range [" +
                                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Lifetime sensitivities at n_c0.  Sign conventions:
//   K_r  = -(n/tau_r)  d tau_r /dn = log_slope_r  - 1   (p_r  - 1 for power laws)
//   K_nr = +(n/tau_nr) d tau_nr/dn = 1 - log_slope_nr   (1 - p_nr for power laws)
inline std::pair<double, double> extract_K(const LifetimeModel& model, double n_c0) {
    model.validate();
    if (!(n_c0 > 0.0)) throw std::invalid_argument("n_c0 must be > 0");
    const double K_r = model.radiative.log_slope(n_c0) - 1.0;
    const double K_nr = model.nonradiative.kind == RecombinationLaw::Kind::none
                            ? 0.0
                            : 1.0 - model.nonradiative.log_slope(n_c0);
    if (!std::isfinite(K_r) || !std::isfinite(K_nr))
        throw std::runtime_error("non-finite lifetime sensitivity at n_c0 = " +
                                 std::to_string(n_c0));
    return {K_r, K_nr};
}

// Numeric cross-check of extract_K by central differences on ln tau(ln n).
inline std::pair<double, double> extract_K_numeric(const LifetimeModel& model, double n_c0,
                                                   double rel_step = 1e-6) {
    const double h = rel_step * n_c0;
    auto logslope = [&](const RecombinationLaw& law) {
        return (std::log(law.rate(n_c0 + h)) - std::log(law.rate(n_c0 - h))) /
               (std::log(n_c0 + h) - std::log(n_c0 - h));
    };
    const double K_r = logslope(model.radiative) - 1.0;
    const double K_nr = model.nonradiative.kind == RecombinationLaw::Kind::none
                            ? 0.0
                            : 1.0 - logslope(model.nonradiative);
    return {K_r, K_nr};
}

struct ILCurve {
    std::vector<double> P;          // pump rate [1/s], strictly increasing
    std::vector<double> n_c;        // carrier number
    std::vector<double> V;          // total cavity output flux [1/s]
    std::vector<double> N;          // detected flux [1/s]
    std::vector<double> eta_num;    // secant slope N/P
    std::vector<double> eta_d_num;  // tangent slope dN/dP
};

// Samples the nonlinear steady state over a pump range (log spacing).
// The tangent slope uses central differences with dP = rel_step * P.
inline ILCurve il_curve(double P_min, double P_max, std::size_t n_points,
                        const LifetimeModel& model, double beta0,
                        double rel_step = 1e-4) {
    if (!(P_min > 0.0 && P_max > P_min)) throw std::invalid_argument("bad pump range");
    if (n_points < 2) throw std::invalid_argument("need at least two curve points");

    auto detected = [&](double P) {
        const double n = solve_carrier_number(P, model);
        return beta0 * model.radiative.rate(n);
    };

    ILCurve curve;
    const double lr = std::log(P_max / P_min) / double(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double P = P_min * std::exp(lr * double(i));
        double n;
        try {
            n = solve_carrier_number(P, model);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("il_curve failed at P = " + std::to_string(P) + ": " +
                                     e.what());
        }
        const double V = model.radiative.rate(n);
        const double dP = rel_step * P;
        curve.P.push_back(P);
        curve.n_c.push_back(n);
        curve.V.push_back(V);
        curve.N.push_back(beta0 * V);
        curve.eta_num.push_back(beta0 * V / P);
        curve.eta_d_num.push_back((detected(P + dP) - detected(P - dP)) / (2.0 * dP));
    }
    return curve;
}

struct ConsistencyReport {
    double n_c0 = 0.0;
    double eta_d_numeric = 0.0;      // finite-difference tangent of the I-L curve
    double eta_d_smallsignal = 0.0;  // beta0/(1+eps') from extract_K
    double rel_error = 0.0;
    bool ok = false;
};

// Closes the loop between the nonlinear curve and the small-signal expansion.
inline ConsistencyReport consistency_check(const LifetimeModel& model, double P0,
                                           double beta0, double tolerance = 1e-4) {
    ConsistencyReport rep;
    rep.n_c0 = solve_carrier_number(P0, model);

    const double dP = 1e-4 * P0;
    auto detected = [&](double P) {
        return beta0 * model.radiative.rate(solve_carrier_number(P, model));
    };
    rep.eta_d_numeric = (detected(P0 + dP) - detected(P0 - dP)) / (2.0 * dP);

    auto [K_r, K_nr] = extract_K(model, rep.n_c0);
    const double eps0 = model.nonradiative.rate(rep.n_c0) / model.radiative.rate(rep.n_c0);
    rep.eta_d_smallsignal = efficiencies_from_K(eps0, beta0, K_r, K_nr).second;

    rep.rel_error = std::abs(rep.eta_d_numeric - rep.eta_d_smallsignal) /
                    std::abs(rep.eta_d_smallsignal);
    rep.ok = rep.rel_error < tolerance;
    return rep;
}

}  // namespace ledfano

#endif
