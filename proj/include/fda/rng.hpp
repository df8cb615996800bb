#pragma once

#include <cstdint>

namespace fda {

// Counter-based PCG32 generator with splittable streams. A (seed, stream_id)
// pair fully determines the sequence, independent of platform and of how many
// other streams exist, so replicate r of a study can always draw from
// spawn_stream(seed, r) and reproduce bit-identical results.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Standard normal via Box-Muller (pair cached).
    double normal();

    // Chi-square with k >= 1 integer degrees of freedom.
    double chi_square(int k);

    // Uniform integer in [0, bound), rejection sampled (no modulo bias).
    std::uint32_t next_below(std::uint32_t bound);

private:
    std::uint64_t state_;
    std::uint64_t inc_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Child stream for replicate / subject indexing; streams with distinct ids
// are statistically independent for any fixed seed.
RngStream spawn_stream(std::uint64_t seed, std::uint64_t stream_id);

} // namespace fda
