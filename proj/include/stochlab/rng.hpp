#pragma once

#include <array>
#include <cstdint>

namespace stochlab {

// Counter-based stream: Philox4x32-10 keyed by the seed, counter = (block, stream_id).
// Any (seed, stream_id) pair replays the same variates without shared state.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64();
    // uniform on the open interval (0,1), 53 bits
    double uniform();
    // standard normal via inverse CDF
    double normal();

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Wichura AS241, accurate to about 1e-16 over (0,1).
double normal_quantile(double p);
double normal_cdf(double x);

}  // namespace stochlab
