#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace cplab {

// SplitMix64 (Steele/Lea/Flood; the java.util.SplittableRandom mixer).  The
// k-th output is a fixed avalanche function of seed + k * golden, so streams
// are pure integer arithmetic and reproduce bit-for-bit on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; pairs are drawn together so the
    // consumption pattern is fixed.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives an independent substream seed from a master seed and a tag path,
// e.g. derive_seed(master, {n, replication}).  Each step runs the SplitMix64
// mixer once, so distinct paths land in well-separated states.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = master;
    for (std::uint64_t tag : path) {
        SplitMix64 g(s ^ (tag + 0x632be59bd9b4e019ULL));
        s = g.next_u64();
    }
    return s;
}

} // namespace cplab
