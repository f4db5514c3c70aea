#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmrx {

// Stream purposes. Keeping them distinct guarantees that channel, noise and
// payload draws never share a generator.
enum class Stream : std::uint64_t {
    kChannel = 1,
    kNoise = 2,
    kPayload = 3,
    kDmrs = 4,
    kTest = 99,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic seed for (master seed, purpose, indices...). Index tuples
// that differ anywhere map to unrelated seeds.
inline std::uint64_t stream_seed(std::uint64_t master, Stream purpose,
                                 std::initializer_list<std::uint64_t> ids) {
    std::uint64_t h = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(purpose)));
    for (std::uint64_t id : ids) h = splitmix64(h ^ splitmix64(id + 0x632BE59BD9B4E019ull));
    return h;
}

inline std::mt19937_64 make_stream(std::uint64_t master, Stream purpose,
                                   std::initializer_list<std::uint64_t> ids) {
    return std::mt19937_64(stream_seed(master, purpose, ids));
}

}  // namespace mmrx
