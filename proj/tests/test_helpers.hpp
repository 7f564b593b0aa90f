#ifndef LEDFANO_TEST_HELPERS_HPP
#define LEDFANO_TEST_HELPERS_HPP

#include <random>
#include <string>

#include "ledfano/params.hpp"

namespace ledfano::testing {

// True iff fn() throws E whose message contains substr.
template <typename E, typename Fn>
bool throws_containing(Fn&& fn, const std::string& substr) {
    try {
        fn();
    } catch (const E& e) {
        return std::string(e.what()).find(substr) != std::string::npos;
    } catch (...) {
        return false;
    }
    return false;
}

// Random valid device/pump fixtures for property tests.
struct RandomDeviceOptions {
    int max_modes = 4;
    bool vary_mode_K = true;       // per-mode K_r spread
    bool allow_infinite_nr = true;
    double K_abs_max = 0.8;
};

inline DeviceParams random_device(std::mt19937& rng,
                                  const RandomDeviceOptions& opt = {}) {
    std::uniform_int_distribution<int> n_modes(1, opt.max_modes);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DeviceParams dev;
    const int n = n_modes(rng);
    for (int l = 0; l < n; ++l) {
        ModeParams m;
        m.kappa0 = 1e11 * (0.5 + u(rng));
        m.tau_r = 1e-9 * (0.3 + 3.0 * u(rng));
        m.K_r = opt.vary_mode_K ? opt.K_abs_max * (2.0 * u(rng) - 1.0) : 0.0;
        m.xi = u(rng);
        dev.modes.push_back(m);
    }
    if (!opt.allow_infinite_nr || u(rng) < 0.7) {
        dev.tau_nr0 = 1e-9 * (0.3 + 3.0 * u(rng));
        dev.K_nr = opt.K_abs_max * (2.0 * u(rng) - 1.0);
    }
    return dev;
}

inline PumpSpec random_pump(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PumpSpec p;
    p.P0 = 1e6 * (0.1 + 10.0 * u(rng));
    p.W_e = 2.0 * u(rng);
    return p;
}

}  // namespace ledfano::testing

#endif
