#ifndef LEDFANO_CONFIG_HPP
#define LEDFANO_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledfano/langevin.hpp"
#include "ledfano/params.hpp"
#include "ledfano/steady_state.hpp"

namespace ledfano {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration file: one `key = value` pair per line,
// '#' starts a comment.  Keys follow the documented schema
// (mode.N.kappa0, mode.N.tau_r, mode.N.K_r, mode.N.xi, tau_nr0, K_nr,
//  P0, W_e, sim.*, model.*).
class Config {
public:
    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        Config cfg;
        cfg.path_ = path;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw ConfigError(path + ":" + std::to_string(lineno) +
                                      ": expected `key = value`");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
            cfg.entries_[key] = value;
        }
        return cfg;
    }

    static Config from_string(const std::string& text) {
        const std::string tmp = "<inline>";
        Config cfg;
        cfg.path_ = tmp;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            cfg.entries_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return cfg;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const std::string& require(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(path_ + ": missing required key `" + key + "`");
        return it->second;
    }

    double get_double(const std::string& key) const {
        const std::string& v = require(key);
        if (v == "inf" || v == "infinity") return infinite_lifetime;
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError(path_ + ": key `" + key + "`: not a number: `" + v + "`");
        }
    }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = require(key);
        try {
            return std::stoull(v);
        } catch (const std::exception&) {
            throw ConfigError(path_ + ": key `" + key + "`: not an integer: `" + v + "`");
        }
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? entries_.at(key) : fallback;
    }

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }

    // Canonical serialized form (sorted keys), used for provenance hashing.
    std::string canonical() const {
        std::ostringstream out;
        for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
        return out.str();
    }

    std::uint64_t hash() const {  // FNV-1a
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : canonical()) {
            h ^= std::uint64_t(static_cast<unsigned char>(c));
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    DeviceParams device() const {
        DeviceParams dev;
        for (int n = 1;; ++n) {
            const std::string prefix = "mode." + std::to_string(n) + ".";
            if (!has(prefix + "kappa0")) break;
            ModeParams m;
            m.kappa0 = get_double(prefix + "kappa0");
            m.tau_r = get_double(prefix + "tau_r");
            m.K_r = get_double(prefix + "K_r", 0.0);
            m.xi = get_double(prefix + "xi", 1.0);
            dev.modes.push_back(m);
        }
        if (dev.modes.empty())
            throw ConfigError(path_ + ": missing required key `mode.1.kappa0`");
        dev.tau_nr0 = get_double("tau_nr0", infinite_lifetime);
        dev.K_nr = get_double("K_nr", 0.0);
        return dev;
    }

    PumpSpec pump() const {
        PumpSpec p;
        p.P0 = get_double("P0");
        p.W_e = get_double("W_e", 1.0);
        if (has("mod.amplitude"))
            p.modulation = Modulation{get_double("mod.amplitude"), get_double("mod.omega")};
        return p;
    }

    SimConfig sim(std::vector<double> omega_grid) const {
        SimConfig s;
        s.dt = get_double("sim.dt");
        s.duration = get_double("sim.duration");
        s.n_traj = int(get_u64("sim.n_traj", 1));
        s.seed = get_u64("sim.seed", 0);
        s.segment_length = std::size_t(get_u64("sim.segment_length", 1 << 16));
        s.band_frac = get_double("sim.band_frac", 0.15);
        s.omega_grid = std::move(omega_grid);
        return s;
    }

    LifetimeModel lifetime_model() const {
        LifetimeModel model;
        const std::string type = get_string("model.type", "power_law");
        if (type == "power_law") {
            model.radiative = RecombinationLaw::power_law(get_double("model.p_r"),
                                                          get_double("model.tau_r_ref"),
                                                          get_double("model.n_ref"));
        } else if (type == "qw") {
            model.radiative = RecombinationLaw::qw_band_edge(get_double("model.n_deg"),
                                                            get_double("model.rate_scale"));
        } else {
            throw ConfigError(path_ + ": key `model.type`: unknown model `" + type + "`");
        }
        if (has("model.p_nr")) {
            model.nonradiative = RecombinationLaw::power_law(
                get_double("model.p_nr"), get_double("model.tau_nr_ref"),
                get_double("model.n_ref", get_double("model.n_nr_ref", 1.0)));
        }
        return model;
    }

    const std::string& path() const { return path_; }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::string path_;
    std::map<std::string, std::string> entries_;
};

}  // namespace ledfano

#endif
