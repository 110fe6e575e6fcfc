#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace heatcut {

// Deterministic counter-splittable RNG. Streams are derived from a master
// seed plus a tag path, never from generator state, so the set of streams a
// run consumes does not depend on evaluation order or thread schedule.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        // splitmix64 expansion of the seed into xoshiro256** state
        uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
        if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0)
            state_[0] = 1;
    }

    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Stream for (master, tag, index), e.g. one per JL vector per iteration.
    static Rng stream(uint64_t master, uint64_t tag, uint64_t index = 0) {
        return Rng(mix(mix(master, tag), index));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; one spare cached per stream
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // index in [0, n)
    uint64_t below(uint64_t n) {
        // rejection-free Lemire-style bounded draw
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
        return static_cast<uint64_t>(m >> 64);
    }

    std::vector<double> gaussian_vector(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = normal();
        return v;
    }

    // uniform point on the unit sphere in R^n
    std::vector<double> unit_vector(std::size_t n) {
        std::vector<double> v = gaussian_vector(n);
        double s = 0;
        for (double x : v) s += x * x;
        s = std::sqrt(s);
        if (s == 0) {
            v[0] = 1.0;
            return v;
        }
        for (auto& x : v) x /= s;
        return v;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace heatcut
