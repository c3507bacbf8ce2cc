#pragma once

#include <cstdint>

namespace comove {

/// (master_seed, stream_id) fully determines a random stream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// Derives an independent child seed, e.g. one per Monte Carlo replicate.
/// Deterministic: child_seed(s, i) is a pure function of its arguments.
std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index);

/// Counter-based generator: output i is mix64(key + i * golden ratio), the
/// SplitMix64 sequence keyed by (master_seed, stream_id). Streams with
/// distinct seeds or ids are independent for practical purposes, and any
/// draw depends only on (seed spec, counter), so parallel replicates
/// reproduce exactly regardless of scheduling.
class CounterRng {
public:
    explicit CounterRng(SeedSpec spec);
    CounterRng(std::uint64_t master_seed, std::uint64_t stream_id = 0)
        : CounterRng(SeedSpec{master_seed, stream_id}) {}

    std::uint64_t next_u64();

    /// Uniform draw strictly inside (0, 1); safe input for the inverse CDF.
    double next_uniform();

    /// Standard normal draw via the inverse CDF (Wichura's AS 241, PPND16).
    double next_normal();

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Quantile of the standard normal distribution, p in (0, 1).
/// Wichura's algorithm AS 241 (PPND16), accurate to about 1e-15.
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double z);

} // namespace comove
