/* Seeded deterministic generator; every sampled check and the meataxe word
 * generator draw from this so reports are byte-reproducible across runs. */

#ifndef WSH_RNG_HPP
#define WSH_RNG_HPP

#include <cstdint>

namespace wsh {

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed ^ 0x9e3779b97f4a7c15ull) {}

    uint64_t next() {
        // splitmix64 step
        s += 0x9e3779b97f4a7c15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

}  // namespace wsh

#endif
