#pragma once

#include "nbmr/field.hpp"
#include "nbmr/transform.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nbmr {

enum class ChannelKind { Bec, Awgn };

/// One channel use carrying one bit of a symbol's m-bit representation.
struct BitObservation {
    ChannelKind kind;
    double y = 0.0;     // BEC: the delivered bit; AWGN: the real sample
    double sigma = 0.0; // AWGN noise standard deviation
    bool erased = false;
};

// Each bit independently erased with probability epsilon, else delivered
// exactly.
std::vector<BitObservation> transmit_bec(std::span<const std::uint8_t> bits,
                                         double epsilon, std::mt19937_64& rng);

// BPSK (0 -> +1), y = s + n with n ~ N(0, sigma^2),
// sigma^2 = 1 / (2 * rate_bits * 10^(ebn0_db/10)).
std::vector<BitObservation> transmit_awgn(std::span<const std::uint8_t> bits,
                                          double ebn0_db, double rate_bits,
                                          std::mt19937_64& rng);

double awgn_sigma(double ebn0_db, double rate_bits);

// Per-symbol posterior from the m bit observations of that symbol, using the
// bitwise factorization of memoryless binary-input channels. AWGN
// likelihoods are accumulated in the log domain and exponentiated with
// max-subtraction (m=8 products of 8 Gaussian factors underflow otherwise).
ProbVec symbol_posterior(const Field& field, std::span<const BitObservation> obs);

// LSB-first m-bit representation of each symbol, concatenated.
std::vector<std::uint8_t> symbols_to_bits(const Field& field,
                                          std::span<const symbol_t> symbols);

} // namespace nbmr
