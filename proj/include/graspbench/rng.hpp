#ifndef GRASPBENCH_RNG_HPP
#define GRASPBENCH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string>

namespace graspbench {

/// Counter-based generator (splitmix64 core). Hand-rolled so that streams are
/// reproducible byte-for-byte regardless of platform or standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) { return n > 0 ? next_u64() % n : 0; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stable FNV-1a over arbitrary bytes; used to derive per-experiment seeds
/// from (master_seed, object, pose, trial) so records are isolated.
inline uint64_t stable_hash64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t stable_hash64(const std::string& s, uint64_t seed = 0xcbf29ce484222325ULL) {
    return stable_hash64(s.data(), s.size(), seed);
}

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    return stable_hash64(bytes, 8, h);
}

}  // namespace graspbench

#endif
