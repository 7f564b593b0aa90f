#ifndef LEDFANO_VERSION_HPP
#define LEDFANO_VERSION_HPP

namespace ledfano {
inline constexpr const char* version = "0.1.0";
}

#endif
