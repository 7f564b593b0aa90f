#ifndef LEDFANO_LANGEVIN_HPP
#define LEDFANO_LANGEVIN_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ledfano/analytic.hpp"
#include "ledfano/params.hpp"
#include "ledfano/rng.hpp"
#include "ledfano/spectrum.hpp"

namespace ledfano {

struct SimConfig {
    double dt = 0.0;             // [s]
    double duration = 0.0;       // recorded trajectory length [s]
    int n_traj = 1;
    std::uint64_t seed = 0;
    std::size_t segment_length = 1 << 16;  // samples per spectral segment
    std::vector<double> omega_grid;        // [rad/s]
    double band_frac = 0.15;

    void validate(const OperatingPoint& op) const {
        if (!(dt > 0.0)) throw std::invalid_argument("sim.dt must be > 0");
        if (dt > op.tau_dd / 50.0)
            throw std::invalid_argument("sim.dt must be <= tau''/50 = " +
                                        std::to_string(op.tau_dd / 50.0));
        for (std::size_t l = 0; l < op.n_modes(); ++l) {
            const double kappa = op.mode_flux[l] / op.mode_photon[l];
            if (dt * kappa > 0.5)
                throw std::invalid_argument("sim.dt too large for escape rate of mode " +
                                            std::to_string(l + 1));
        }
        if (duration < 20.0 * double(segment_length) * dt)
            throw std::invalid_argument("sim.duration must cover at least 20 segments (>= " +
                                        std::to_string(20.0 * double(segment_length) * dt) +
                                        " s)");
        if (n_traj < 1) throw std::invalid_argument("sim.n_traj must be >= 1");
        if (omega_grid.empty()) throw std::invalid_argument("omega grid must not be empty");
    }
};

// One per-step realization of all white-noise sources, in rate units
// (per-step variance = diffusion coefficient / dt).
struct NoiseState {
    double gamma_P = 0.0;             // pump noise, variance W_e P0 / dt
    double gamma_nr = 0.0;            // non-radiative noise, variance (n_c0/tau_nr0)/dt
    double gamma_r = 0.0;             // derived: -sum_l F_r[l]
    std::vector<double> F_r;          // per-mode conversion noise, variance V_l0/dt
    std::vector<double> F_kappa;      // per-mode escape noise, variance kappa_l (n_l)_0 / dt
    std::vector<double> partition;    // detection partition noise, variance xi(1-xi) V_l0/dt
};

// Draws the correlated noise set of the linearized system.  Gamma_r is built
// as -sum_l F_r,l, which reproduces <Gamma_r^2> = n_c0/tau_r0 and the cross
// term <Gamma_r F_r,l> = -n_c0/tau_r,l exactly.
class NoiseSynthesizer {
public:
    NoiseSynthesizer(const OperatingPoint& op, double W_e, double dt) {
        const double inv_dt = 1.0 / dt;
        sd_pump_ = std::sqrt(W_e * op.P0 * inv_dt);
        sd_nr_ = std::sqrt(op.eps0 * op.V0 * inv_dt);
        for (std::size_t l = 0; l < op.n_modes(); ++l) {
            const double V_l0 = op.mode_flux[l];
            sd_Fr_.push_back(std::sqrt(V_l0 * inv_dt));
            // kappa_l (n_l)_0 = V_l0
            sd_Fkappa_.push_back(std::sqrt(V_l0 * inv_dt));
            const double xi = op.mode_xi[l];
            sd_part_.push_back(std::sqrt(xi * (1.0 - xi) * V_l0 * inv_dt));
        }
    }

    std::size_t n_modes() const { return sd_Fr_.size(); }

    template <typename Rng>
    void sample(Rng& rng, NoiseState& s) {
        s.gamma_P = sd_pump_ > 0.0 ? sd_pump_ * normal_(rng) : 0.0;
        s.gamma_nr = sd_nr_ > 0.0 ? sd_nr_ * normal_(rng) : 0.0;
        s.gamma_r = 0.0;
        for (std::size_t l = 0; l < sd_Fr_.size(); ++l) {
            s.F_r[l] = sd_Fr_[l] * normal_(rng);
            s.gamma_r -= s.F_r[l];
            s.F_kappa[l] = sd_Fkappa_[l] * normal_(rng);
        }
    }

    template <typename Rng>
    void sample_partition(Rng& rng, NoiseState& s) {
        for (std::size_t l = 0; l < sd_part_.size(); ++l)
            s.partition[l] = sd_part_[l] > 0.0 ? sd_part_[l] * normal_(rng) : 0.0;
    }

    NoiseState make_state() const {
        NoiseState s;
        s.F_r.assign(n_modes(), 0.0);
        s.F_kappa.assign(n_modes(), 0.0);
        s.partition.assign(n_modes(), 0.0);
        return s;
    }

private:
    double sd_pump_ = 0.0;
    double sd_nr_ = 0.0;
    std::vector<double> sd_Fr_, sd_Fkappa_, sd_part_;
    std::normal_distribution<double> normal_;
};

template <typename Rng>
inline NoiseState synthesize_noise(const OperatingPoint& op, double W_e, double dt, Rng& rng) {
    NoiseSynthesizer synth(op, W_e, dt);
    NoiseState s = synth.make_state();
    synth.sample(rng, s);
    synth.sample_partition(rng, s);
    return s;
}

struct TimeSeries {
    double dt = 0.0;
    std::vector<double> dn_c;                // carrier-number deviation
    std::vector<std::vector<double>> dV;     // per-mode output-flux deviation
};

// Euler-Maruyama integration of the linearized rate equations.  The same
// F_kappa realization enters both the photon-number step and the output flux;
// that sign correlation is what cancels the escape noise at low frequency.
template <typename Rng>
inline TimeSeries integrate(const OperatingPoint& op, double W_e, double dt,
                            std::size_t n_steps, Rng& rng,
                            const std::optional<Modulation>& modulation = std::nullopt,
                            std::size_t burn_in = 0, bool with_noise = true) {
    const std::size_t n_modes = op.n_modes();
    std::vector<double> kappa(n_modes), inv_tau_rl_eff(n_modes);
    for (std::size_t l = 0; l < n_modes; ++l) {
        kappa[l] = op.mode_flux[l] / op.mode_photon[l];
        inv_tau_rl_eff[l] = 1.0 / op.mode_tau_r_eff[l];
    }

    NoiseSynthesizer synth(op, W_e, dt);
    NoiseState noise = synth.make_state();

    // Guard threshold from the analytic stationary variance of dn_c.
    const double drive = W_e * op.P0 + op.V0 * (1.0 + op.eps0);
    const double stat_sd = std::sqrt(std::max(drive * op.tau_dd / 2.0, op.P0 * dt));
    const double guard = 1e6 * stat_sd;

    TimeSeries out;
    out.dt = dt;
    out.dn_c.reserve(n_steps);
    out.dV.assign(n_modes, {});
    for (auto& v : out.dV) v.reserve(n_steps);

    double dn_c = 0.0;
    std::vector<double> dn_l(n_modes, 0.0);
    const double inv_tau_dd = 1.0 / op.tau_dd;

    for (std::size_t k = 0; k < burn_in + n_steps; ++k) {
        if (with_noise) synth.sample(rng, noise);
        double dP = noise.gamma_P;
        if (modulation)  // omega = 0 means a constant step drive
            dP += modulation->omega == 0.0
                      ? modulation->amplitude
                      : modulation->amplitude * std::sin(modulation->omega * double(k) * dt);

        const double dn_c_prev = dn_c;
        dn_c += dt * (dP - dn_c_prev * inv_tau_dd + noise.gamma_r + noise.gamma_nr);
        for (std::size_t l = 0; l < n_modes; ++l) {
            const double dn_l_prev = dn_l[l];
            dn_l[l] += dt * (-kappa[l] * dn_l_prev + dn_c_prev * inv_tau_rl_eff[l] +
                             noise.F_kappa[l] + noise.F_r[l]);
            if (k >= burn_in)
                out.dV[l].push_back(kappa[l] * dn_l[l] - noise.F_kappa[l]);
        }
        if (k >= burn_in) out.dn_c.push_back(dn_c);

        if ((k & 0xfff) == 0 && std::abs(dn_c) > guard)
            throw std::runtime_error(
                "integration unstable: |dn_c| = " + std::to_string(std::abs(dn_c)) +
                " exceeds 1e6 x stationary sd (" + std::to_string(stat_sd) +
                ") at t = " + std::to_string(double(k) * dt));
    }
    return out;
}

// Beam-splitter detection: dN = sum_l xi_l dV_l + partition noise.
template <typename Rng>
inline std::vector<double> detect(const TimeSeries& series, const OperatingPoint& op,
                                  Rng& rng) {
    NoiseSynthesizer synth(op, 0.0, series.dt);
    NoiseState noise = synth.make_state();
    const std::size_t n = series.dn_c.size();
    std::vector<double> dN(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        synth.sample_partition(rng, noise);
        double acc = 0.0;
        for (std::size_t l = 0; l < op.n_modes(); ++l)
            acc += op.mode_xi[l] * series.dV[l][k] + noise.partition[l];
        dN[k] = acc;
    }
    return dN;
}

inline SpectrumEstimate estimate_fano(const std::vector<double>& dN, double N0,
                                      const SimConfig& cfg) {
    FanoEstimator est(cfg.omega_grid, cfg.dt, cfg.segment_length, cfg.band_frac);
    if (est.segments_in(dN.size()) < 20)
        throw std::invalid_argument(
            "too few spectral segments; need a series of at least " +
            std::to_string(10.5 * double(cfg.segment_length) * cfg.dt) + " s");
    est.add_series(dN);
    return est.finalize(N0);
}

struct ExperimentResult {
    OperatingPoint op;
    SpectrumEstimate estimate;
    std::vector<double> analytic;  // fano_master averaged over the same bins
};

inline unsigned simulation_threads() {
    if (const char* env = std::getenv("LED_FANO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return unsigned(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

// Full pipeline: derive -> integrate -> detect -> estimate, with one
// deterministic random stream per trajectory.  Trajectories may run in
// parallel; aggregation is in trajectory order, so the result is independent
// of scheduling and thread count.
inline ExperimentResult run_experiment(const DeviceParams& device, const PumpSpec& pump,
                                       const SimConfig& cfg) {
    ExperimentResult result;
    result.op = derive_operating_point(device, pump);
    const OperatingPoint& op = result.op;
    cfg.validate(op);

    const std::size_t n_steps = std::size_t(std::llround(cfg.duration / cfg.dt));
    const std::size_t burn_in = std::size_t(std::llround(10.0 * op.tau_dd / cfg.dt));

    std::vector<FanoEstimator> per_traj(
        std::size_t(cfg.n_traj),
        FanoEstimator(cfg.omega_grid, cfg.dt, cfg.segment_length, cfg.band_frac));

    auto worker = [&](std::size_t traj) {
        auto rng = make_stream(cfg.seed, traj);
        TimeSeries series =
            integrate(op, pump.W_e, cfg.dt, n_steps, rng, pump.modulation, burn_in);
        std::vector<double> dN = detect(series, op, rng);
        per_traj[traj].add_series(dN);
    };

    const unsigned n_threads =
        std::min<unsigned>(simulation_threads(), unsigned(cfg.n_traj));
    if (n_threads <= 1) {
        for (std::size_t t = 0; t < std::size_t(cfg.n_traj); ++t) worker(t);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_threads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < std::size_t(cfg.n_traj); t += n_threads)
                    worker(t);
            });
        for (auto& th : pool) th.join();
    }

    // Merge per-trajectory segment values in index order.
    FanoEstimator merged(cfg.omega_grid, cfg.dt, cfg.segment_length, cfg.band_frac);
    for (const auto& e : per_traj) merged.absorb(e);

    result.estimate = merged.finalize(op.N0);
    result.analytic =
        merged.band_average([&](double om) { return fano_master(op, pump.W_e, om); });
    return result;
}

// Deterministic sinusoidal-drive response |dN~/dP~| measured by lock-in
// projection over whole periods after the transient has decayed.
inline double measured_modulation_response(const DeviceParams& device, const PumpSpec& pump,
                                           double omega, double dt) {
    OperatingPoint op = derive_operating_point(device, pump);
    const double period = 2.0 * constants::pi / omega;
    const std::size_t steps_per_period = std::size_t(std::llround(period / dt));
    const double dt_eff = period / double(steps_per_period);

    const double amplitude = 0.01 * pump.P0;
    Modulation mod{amplitude, omega};
    const std::size_t n_periods =
        std::max<std::size_t>(4, std::size_t(std::ceil(2.0 * op.tau_dd / period)));
    const std::size_t burn_in = std::size_t(std::llround(20.0 * op.tau_dd / dt_eff)) +
                                4 * steps_per_period;
    const std::size_t n_steps = n_periods * steps_per_period;

    auto rng = make_stream(0, 0);  // unused: noise is off
    // Phase continuity: modulation phase is k*dt from step 0, so the recorded
    // window starts at a known phase offset; lock-in magnitude is phase-free.
    TimeSeries series = integrate(op, 0.0, dt_eff, n_steps, rng, mod, burn_in, false);

    double in_phase = 0.0, quad = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        double dN = 0.0;
        for (std::size_t l = 0; l < op.n_modes(); ++l)
            dN += op.mode_xi[l] * series.dV[l][k];
        const double phase = omega * double(burn_in + k) * dt_eff;
        in_phase += dN * std::sin(phase);
        quad += dN * std::cos(phase);
    }
    const double amp_N = 2.0 * std::hypot(in_phase, quad) / double(n_steps);
    return amp_N / amplitude;
}

}  // namespace ledfano

#endif
