#include "nbmr/field.hpp"

#include "nbmr/errors.hpp"

#include <stdexcept>
#include <string>

namespace nbmr {

// Conventional minimal-weight primitive polynomials, bit i = coeff of x^i.
// Frozen so codewords and code files are bit-exact across runs and builds.
std::uint32_t Field::primitive_poly(int m) {
    static constexpr std::uint32_t table[11] = {
        0,
        0x3,   // x + 1 (GF(2))
        0x7,   // x^2 + x + 1
        0xB,   // x^3 + x + 1
        0x13,  // x^4 + x + 1
        0x25,  // x^5 + x^2 + 1
        0x43,  // x^6 + x + 1
        0x89,  // x^7 + x^3 + 1
        0x11D, // x^8 + x^4 + x^3 + x^2 + 1
        0x211, // x^9 + x^4 + 1
        0x409, // x^10 + x^3 + 1
    };
    if (m < 1 || m > 10)
        throw config_error("field degree m must be in [1, 10], got " + std::to_string(m));
    return table[m];
}

Field::Field(int m)
    : m_(m), q_(1 << m), poly_(primitive_poly(m)) {
    const int n = q_ - 1;
    exp_.assign(2 * n, 0);
    log_.assign(q_, -1);

    std::uint32_t cur = 1;
    for (int i = 0; i < n; ++i) {
        if (log_[cur] != -1)
            throw config_error("polynomial 0x" + std::to_string(poly_) +
                               " is not primitive for m=" + std::to_string(m));
        exp_[i] = static_cast<symbol_t>(cur);
        exp_[i + n] = static_cast<symbol_t>(cur);
        log_[cur] = static_cast<std::int16_t>(i);
        cur <<= 1;
        if (cur & static_cast<std::uint32_t>(q_))
            cur ^= poly_;
    }
    if (cur != 1)
        throw config_error("exp table has period != 2^m - 1 for m=" + std::to_string(m));
}

symbol_t Field::inv(symbol_t a) const {
    if (a == 0)
        throw std::domain_error("inverse of 0 in GF(2^m)");
    return exp_[order() - log_[a]];
}

} // namespace nbmr
