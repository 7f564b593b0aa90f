#ifndef LEDFANO_CONSTANTS_HPP
#define LEDFANO_CONSTANTS_HPP

namespace ledfano {
namespace constants {

// CODATA 2018 values, SI units.
inline constexpr double electron_mass   = 9.1093837015e-31;  // kg
inline constexpr double boltzmann       = 1.380649e-23;      // J/K
inline constexpr double hbar            = 1.054571817e-34;   // J s
inline constexpr double speed_of_light  = 2.99792458e8;      // m/s
inline constexpr double pi              = 3.14159265358979323846;

}  // namespace constants
}  // namespace ledfano

#endif
