#include "fda/rng.hpp"

#include <cmath>

#include "fda/errors.hpp"

namespace fda {

namespace {

constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

// PCG-XSH-RR with the increment and initial state both derived from
// (seed, stream_id), so different stream ids give unrelated sequences.
RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    const std::uint64_t mixed = splitmix64(seed ^ splitmix64(stream_id));
    inc_ = (splitmix64(stream_id ^ 0x5851F42D4C957F2DULL) << 1u) | 1u;
    state_ = 0u;
    next_u32();
    state_ += mixed;
    next_u32();
}

std::uint32_t RngStream::next_u32() {
    const std::uint64_t old = state_;
    state_ = old * kMultiplier + inc_;
    const std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double RngStream::chi_square(int k) {
    if (k < 1) throw Error("chi_square: degrees of freedom must be >= 1");
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        const double z = normal();
        s += z * z;
    }
    return s;
}

std::uint32_t RngStream::next_below(std::uint32_t bound) {
    if (bound == 0) throw Error("next_below: bound must be positive");
    const std::uint32_t threshold = (0u - bound) % bound;
    for (;;) {
        const std::uint32_t r = next_u32();
        if (r >= threshold) return r % bound;
    }
}

RngStream spawn_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed, stream_id);
}

} // namespace fda
