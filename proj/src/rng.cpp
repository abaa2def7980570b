#include "ifsc/rng.hpp"

#include <cmath>

namespace ifsc {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed;
    std::uint64_t a = splitmix64(x);
    x ^= stream_id * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
    state_[0] = a;
    state_[1] = splitmix64(x);
    state_[2] = splitmix64(x);
    state_[3] = splitmix64(x);
    // An all-zero state is the one fixed point of xoshiro; unreachable in
    // practice but cheap to rule out.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[3] = 1;
}

RngStream::result_type RngStream::operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_gaussian_ = r * std::sin(theta);
    has_cached_gaussian_ = true;
    return r * std::cos(theta);
}

RngStream RngStream::substream(std::uint64_t lane) const {
    std::uint64_t x = stream_id_ ^ rotl(lane, 32) ^ 0xd1b54a32d192ed03ULL;
    return RngStream(seed_, splitmix64(x));
}

}  // namespace ifsc
