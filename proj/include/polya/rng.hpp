#pragma once

#include <cstdint>
#include <random>

namespace polya {

/// Reproducible random stream identified by (seed, stream_index).
///
/// Seeding goes through std::seed_seq into std::mt19937_64, both of which
/// are fully specified by the standard, and bounded draws use plain
/// rejection sampling instead of std::uniform_int_distribution (whose output
/// is implementation-defined). The same pair therefore yields the same
/// sequence on every platform and under any thread schedule.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64() { return engine_(); }
    // uniform on [0, bound), bound > 0
    std::uint64_t below(std::uint64_t bound);

    // Independent stream for substream `i` (e.g. one per trial).
    [[nodiscard]] RngStream substream(std::uint64_t i) const;

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

inline constexpr std::uint64_t default_seed = 0x5EED0001ULL;

} // namespace polya
