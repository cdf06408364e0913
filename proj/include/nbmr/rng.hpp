#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace nbmr {

// mt19937_64 stream derived from (master, a, b). The engine and seed_seq are
// bit-exact per the standard, so seeded integer draws are portable; only the
// Gaussian draws (std::normal_distribution) are implementation-defined.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master),
                      static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(a),
                      static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c),
                      static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

// Uniform integer in [0, n), rejection sampled. std::uniform_int_distribution
// is implementation-defined, which would break cross-platform byte-identity
// of code files and sim records.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t umax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = umax - umax % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(g, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace nbmr
