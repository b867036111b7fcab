#pragma once

// Counter-based random number generation.  Every stream is a pure function
// of (key, counter), so grid points and realizations can be sampled in any
// order, or concurrently, and still reproduce bit-identical values.

#include <cmath>
#include <cstdint>

namespace bellchain {

// splitmix64 finalizer; passes BigCrush as a 64-bit mixer.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stateless stream: value i of the stream identified by `key`.
inline uint64_t counter_u64(uint64_t key, uint64_t i) {
    return splitmix64(splitmix64(key) ^ splitmix64(i * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

// Combine subkeys (seed, axis indices, ...) into one stream key.
inline uint64_t make_key(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
    uint64_t k = splitmix64(a);
    k = splitmix64(k ^ splitmix64(b + 0x9e3779b97f4a7c15ULL));
    k = splitmix64(k ^ splitmix64(c + 0x7f4a7c159e3779b9ULL));
    k = splitmix64(k ^ splitmix64(d + 0x4f6cdd1d2545f491ULL));
    return k;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double counter_uniform(uint64_t key, uint64_t i) {
    return static_cast<double>(counter_u64(key, i) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller.  Draw j of stream `key`; consumes two
// uniforms per value so that draw j is independent of all others.
inline double counter_normal(uint64_t key, uint64_t j) {
    double u1 = counter_uniform(key, 2 * j);
    double u2 = counter_uniform(key, 2 * j + 1);
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // guard log(0)
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Small bounded helpers for test-instance generation.
inline int counter_int(uint64_t key, uint64_t i, int lo, int hi) {  // inclusive bounds
    const uint64_t span = static_cast<uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(counter_u64(key, i) % span);
}

}  // namespace bellchain
