#pragma once

#include <cstdint>
#include <random>

namespace sheetlab {

// A reproducible random stream. The engine is std::mt19937_64 seeded through
// std::seed_seq from splitmix64 output of (seed, stream_id); both algorithms are
// fully specified by the standard, so draws match bit-for-bit across platforms.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    // Independent child stream, e.g. one per Monte-Carlo shard.
    RngStream derive(std::uint64_t child) const;

    std::uint64_t next_u64() { return engine_(); }
    double uniform();      // in (0, 1), never 0 or 1
    double normal();       // standard normal (Box-Muller, one value per call)
    double exponential();  // rate 1

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace sheetlab
