#ifndef LEDFANO_RNG_HPP
#define LEDFANO_RNG_HPP

#include <cstdint>
#include <random>

namespace ledfano {

// splitmix64, used to expand (master seed, stream index) into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-trajectory stream: results depend only on (seed, index),
// never on scheduling.
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed ^ (0xa0761d6478bd642fULL * (index + 1));
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    std::seed_seq seq{std::uint32_t(a), std::uint32_t(a >> 32),
                      std::uint32_t(b), std::uint32_t(b >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace ledfano

#endif
