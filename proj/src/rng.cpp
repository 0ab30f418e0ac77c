#include "polya/rng.hpp"

#include "polya/errors.hpp"

namespace polya {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
    };
    return std::mt19937_64(seq);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(seeded_engine(seed, stream_index))
{
}

std::uint64_t RngStream::below(std::uint64_t bound)
{
    require(bound > 0, "RngStream::below: bound must be positive");
    // accept x >= 2^64 mod bound so that every residue is equally likely
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) {
            return x % bound;
        }
    }
}

RngStream RngStream::substream(std::uint64_t i) const
{
    // splitmix64 finalizer keeps (stream, i) pairs apart
    std::uint64_t z = stream_index_ + 0x9E3779B97F4A7C15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return RngStream(seed_, z);
}

} // namespace polya
