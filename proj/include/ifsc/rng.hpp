#pragma once

#include <cstdint>
#include <limits>

namespace ifsc {

/// Counter-seeded PRNG stream. Two streams constructed from the same
/// (seed, stream_id) pair produce identical sequences, so Monte-Carlo
/// trials can be farmed out to any number of workers and still reduce
/// to byte-identical results: each trial derives its own stream id and
/// never shares state.
///
/// The generator is xoshiro256++ with its state filled by splitmix64
/// runs over seed and stream id. Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1).
    double uniform();

    /// Standard normal via Box-Muller (second variate cached).
    double gaussian();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Deterministically derived child stream. Callers that need strict
    /// collision freedom across many lanes should allocate structured
    /// stream ids instead (e.g. block_index * 2^32 + lane).
    RngStream substream(std::uint64_t lane) const;

private:
    std::uint64_t state_[4];
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace ifsc
