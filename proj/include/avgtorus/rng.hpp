#pragma once

#include <cmath>
#include <cstdint>

namespace avgtorus {

// splitmix64, used for seeding derived streams
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman/Vigna). Self-contained so that streams are
// bit-reproducible across platforms and standard libraries.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// One independent stream per (master seed, replica index); results are
// reproducible regardless of which thread runs which replica.
class RngStream {
  public:
    static RngStream for_replica(uint64_t master_seed, uint64_t replica) {
        return RngStream(master_seed + 0x9E3779B97F4A7C15ULL * (replica + 1));
    }
    explicit RngStream(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_.next(); }

    // uniform in [0,1)
    double uniform01() { return static_cast<double>(eng_.next() >> 11) * 0x1.0p-53; }

    double exponential(double rate) {
        // 1 - uniform01() is in (0,1], so the log argument never vanishes
        return -std::log(1.0 - uniform01()) / rate;
    }

    // unbiased uniform integer in [0, n) (Lemire)
    uint64_t uniform_below(uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(eng_.next()) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(eng_.next()) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool coin() { return (eng_.next() >> 63) != 0; }

  private:
    Xoshiro256pp eng_;
};

} // namespace avgtorus
