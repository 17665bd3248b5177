#pragma once

#include <cmath>
#include <cstdint>

// Seeded, portable randomness. All simulation results must be bit-reproducible
// from (seed, replica, lane), so we avoid std:: distributions (their output is
// implementation-defined) and keep the generator and the draw functions here.

namespace degroot {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Lanes keep the clock stream, the opinion draws and the walker transition
// draws statistically independent even when they share one base seed.
enum class SeedLane : std::uint64_t {
    clocks = 0x11c7c3a0d6f3f2d1ULL,
    opinions = 0x5851f42d4c957f2dULL,
    walkers = 0xda3e39cb94b95bdbULL,
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replica, SeedLane lane) {
    std::uint64_t s = base;
    std::uint64_t h = splitmix64(s);
    s = h ^ (replica * 0x9e3779b97f4a7c15ULL);
    h = splitmix64(s);
    s = h ^ static_cast<std::uint64_t>(lane);
    return splitmix64(s);
}

// xoshiro256++, seeded through splitmix64.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        for (auto& word : state_) word = splitmix64(seed);
    }

    std::uint64_t next_u64() {
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

    // uniform in (0,1]; never returns 0 so -log stays finite
    double unit_open0() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    // uniform in [0,1)
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(unit_open0()) / rate; }

    // unbiased integer in [0, n) by rejection
    std::uint32_t below(std::uint32_t n) {
        const std::uint64_t span = 0x100000000ULL - (0x100000000ULL % n);
        std::uint64_t x;
        do {
            x = next_u64() >> 32;
        } while (x >= span);
        return static_cast<std::uint32_t>(x % n);
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = unit_open0();
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace degroot
