#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ricbox {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic PRNG. mt19937_64 output is fully specified by the standard,
// so identical seeds give identical streams on every platform; std
// distributions are not, so all draws are hand-rolled here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent substream `stream` of a master seed. Substream ids are
    // fixed constants per consumer (env, actor init, policy sampling, ...).
    static Rng derive(std::uint64_t master, std::uint64_t stream) {
        return Rng(splitmix64(master ^ splitmix64(stream)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n), Lemire's multiply-shift reduction.
    std::uint32_t uniform_int(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller; consumes two uniforms per draw.
    double normal() {
        double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::mt19937_64 engine_;
};

// Substream ids used by the training stack.
namespace rng_stream {
inline constexpr std::uint64_t env = 1;
inline constexpr std::uint64_t actor_init = 2;
inline constexpr std::uint64_t critic_init = 3;
inline constexpr std::uint64_t policy = 4;
inline constexpr std::uint64_t shuffle = 5;
inline constexpr std::uint64_t baseline = 6;
} // namespace rng_stream

} // namespace ricbox
