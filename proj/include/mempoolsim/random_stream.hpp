#pragma once

#include <cstdint>
#include <random>

namespace mempoolsim {

/// Deterministic 64-bit random stream. Every draw is derived from the raw
/// mt19937_64 output so sequences are identical across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for (seed, stream_id).
    static RandomStream derive(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Exponential with the given rate, by inverse transform.
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to spread seeds and derive sub-seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for one replication of one cell of an experiment grid.
std::uint64_t derive_run_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t replication);

/// Sub-stream tags for a single simulation run.
enum class StreamId : std::uint64_t {
    Arrivals = 1,
    Attributes = 2,
    BlockIntervals = 3,
    MinerDraws = 4,
};

inline RandomStream substream(std::uint64_t seed, StreamId id) {
    return RandomStream::derive(seed, static_cast<std::uint64_t>(id));
}

}  // namespace mempoolsim
