#pragma once

#include <cstdint>
#include <vector>

namespace nbmr {

// A field element in [0, 2^m). Bit i of the value is the coefficient of
// alpha^i in the polynomial basis, so the m-bit channel representation of a
// symbol is its value read LSB-first.
using symbol_t = std::uint16_t;

/// GF(2^m) arithmetic for 1 <= m <= 10 with log/exp tables over a frozen
/// primitive polynomial per m (see primitive_poly), e.g. m=8 -> 0x11D.
/// Immutable after construction; all operations are pure.
class Field {
public:
    explicit Field(int m);

    int m() const { return m_; }
    int q() const { return q_; }              // field size 2^m
    int order() const { return q_ - 1; }      // multiplicative order of alpha
    std::uint32_t poly() const { return poly_; }

    // alpha^i for 0 <= i <= 2*(2^m - 1) - 2; wraps once past the period.
    symbol_t exp(int i) const { return exp_[i]; }
    // discrete log of a nonzero symbol, in [0, 2^m - 1)
    int log(symbol_t a) const { return log_[a]; }

    symbol_t add(symbol_t a, symbol_t b) const { return a ^ b; }

    symbol_t mul(symbol_t a, symbol_t b) const {
        if (a == 0 || b == 0)
            return 0;
        return exp_[log_[a] + log_[b]];
    }

    symbol_t inv(symbol_t a) const;           // throws std::domain_error on 0

    bool operator==(const Field& other) const {
        return m_ == other.m_ && poly_ == other.poly_;
    }

    static std::uint32_t primitive_poly(int m);

private:
    int m_ = 0;
    int q_ = 0;
    std::uint32_t poly_ = 0;
    std::vector<symbol_t> exp_;   // doubled table, size 2*(q-1), avoids mod
    std::vector<std::int16_t> log_;
};

inline Field build_field(int m) { return Field(m); }

} // namespace nbmr
