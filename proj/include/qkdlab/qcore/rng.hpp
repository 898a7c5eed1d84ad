#pragma once

#include <cstdint>
#include <random>

namespace qkdlab {

/**
 * Deterministic pseudo-random stream.
 *
 * Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
 * converts raw words to doubles and bounded integers without going through
 * the implementation-defined std distributions. Identical seeds therefore
 * reproduce identical transcripts on every conforming toolchain.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    /// SplitMix64 finalizer; used to derive independent stream seeds.
    static std::uint64_t mix(std::uint64_t x);

    /// Seed for sub-stream `index` of `master`. Trial i of an experiment uses
    /// derive(master, i), so any subset of trials can be replayed alone.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

  private:
    std::mt19937_64 engine_;
};

} // namespace qkdlab
