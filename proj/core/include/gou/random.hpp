#ifndef GOU_RANDOM_HPP
#define GOU_RANDOM_HPP

#include <cstdint>
#include <cmath>

namespace gou {

/// Value-like random stream: xoshiro256++ seeded through SplitMix64 from a
/// (run seed, stream id) pair. Streams with distinct ids are statistically
/// independent, so path i of a run can always be regenerated in isolation.
class RandomStream {
public:
    RandomStream() : RandomStream(0, 0) {}
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    /// Uniform on (0, 1]; never returns 0, safe under log().
    double uniform_pos();

    /// Standard normal via the AS241 inverse-CDF (one uniform per draw,
    /// no cached spare, keeps streams position-independent).
    double normal();

    /// Exponential with rate 1.
    double exponential();

    /// Gamma with given shape and rate (Marsaglia-Tsang, with the
    /// power boost for shape < 1).
    double gamma(double shape, double rate);

    /// Poisson count by summing exponential interarrivals; exact for the
    /// moderate means used here.
    std::uint64_t poisson(double mean);

private:
    std::uint64_t s_[4];
};

/// Inverse of the standard normal CDF (Wichura's AS241 PPND16 algorithm,
/// accurate to ~1e-16 relative).
double normal_icdf(double p);

} // namespace gou

#endif
