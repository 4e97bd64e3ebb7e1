#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "ssr/error.hpp"

namespace ssr {

// All randomness in this project flows through RngStream: a std::mt19937_64
// engine (its output sequence is fixed by the standard) plus hand-rolled
// value transforms. std::*_distribution is never used because its output is
// implementation-defined; with these transforms the same seed produces the
// same bytes on every platform.
//
// Streams are derived from (seed, name) so that adding or reordering
// unrelated draws cannot perturb an existing stream.

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class RngStream {
public:
    RngStream() : eng_(0) {}
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], rejection-sampled (unbiased).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw ValidationError("uniform_int: empty range");
        std::uint64_t range = static_cast<std::uint64_t>(hi - lo);
        if (range == ~0ull) return static_cast<std::int64_t>(eng_());
        std::uint64_t mask = ~0ull;
        // smallest all-ones mask covering `range`
        for (int shift = 32; shift > 0; shift /= 2)
            if ((range >> (64 - shift)) == 0 && (mask >> shift) >= range) mask >>= shift;
        std::uint64_t draw;
        do {
            draw = eng_() & mask;
        } while (draw > range);
        return lo + static_cast<std::int64_t>(draw);
    }

    // Box-Muller, one normal per two uniforms. Stateless beyond the engine,
    // so engine state alone captures the stream.
    double normal(double mean, double sigma) {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::string save_state() const {
        std::ostringstream os;
        os << eng_;
        return os.str();
    }

    void load_state(const std::string& state) {
        std::istringstream is(state);
        is >> eng_;
        if (is.fail()) throw ValidationError("RngStream: malformed engine state");
    }

private:
    std::mt19937_64 eng_;
};

inline RngStream derive_stream(std::uint64_t seed, std::string_view name) {
    return RngStream(splitmix64(seed ^ fnv1a64(name)));
}

}  // namespace ssr
