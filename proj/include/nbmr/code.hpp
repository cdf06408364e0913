#pragma once

#include "nbmr/field.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace nbmr {

struct Edge {
    std::uint32_t check;
    std::uint32_t var;
    symbol_t label; // nonzero
};

struct Rational {
    std::int64_t num;
    std::int64_t den;
};

/// Indices of mother-code variables whose symbols are withheld from
/// transmission; the decoder sees them as erased.
using PuncturePattern = std::vector<std::uint32_t>;

/// (d_v, d_c)-regular non-binary LDPC code: labeled Tanner graph over
/// GF(2^m) with full-row-rank parity-check matrix and a precomputed
/// RREF-based encoder (pivot columns carry parity, the rest information).
class MotherCode {
public:
    MotherCode(Field field, std::uint32_t n, int d_v, int d_c,
               std::vector<Edge> edges, std::uint64_t seed);

    const Field& field() const { return field_; }
    std::uint32_t n() const { return n_; }               // variable count
    std::uint32_t checks() const { return checks_; }     // check count M
    std::uint32_t k() const { return n_ - checks_; }     // info symbols
    int d_v() const { return d_v_; }
    int d_c() const { return d_c_; }
    std::uint64_t seed() const { return seed_; }
    double rate() const { return static_cast<double>(k()) / n_; }

    // Edges sorted by (check, var); a check's edges are contiguous.
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t check_edge_begin(std::uint32_t c) const { return static_cast<std::size_t>(c) * d_c_; }
    // Edge indices incident to variable v, d_v of them.
    std::span<const std::uint32_t> var_edges(std::uint32_t v) const {
        return {var_edges_.data() + static_cast<std::size_t>(v) * d_v_, static_cast<std::size_t>(d_v_)};
    }

    const std::vector<std::uint32_t>& info_positions() const { return info_positions_; }

    // Fills the N-symbol codeword solving H x = 0 with the K info symbols at
    // info_positions.
    std::vector<symbol_t> encode(std::span<const symbol_t> info) const;
    std::vector<symbol_t> extract_info(std::span<const symbol_t> codeword) const;
    bool syndrome_ok(std::span<const symbol_t> x) const;

private:
    void build_encoder();

    Field field_;
    std::uint32_t n_;
    std::uint32_t checks_;
    int d_v_;
    int d_c_;
    std::uint64_t seed_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> var_edges_;

    std::vector<std::uint32_t> info_positions_;   // K columns, sorted
    std::vector<std::uint32_t> parity_positions_; // pivot column of row r
    std::vector<symbol_t> solve_;                 // M x K, row-major
};

// Random regular bipartite graph (configuration model with parallel-edge
// repair and best-effort 4-cycle removal) with uniform random nonzero labels.
// Labels are resampled up to 10 times per graph and the graph itself is
// resampled until H has full row rank; gives up after 100 attempts.
// Deterministic given (parameters, seed).
MotherCode build_mother(const Field& field, std::uint32_t n, int d_v, int d_c,
                        std::uint64_t seed);

enum class CoeffDomain {
    ExcludeZero,    // GF(2^m) \ {0}
    ExcludeZeroOne, // GF(2^m) \ {0, 1}, the experimental default
    AllOnes,        // plain repetition baseline
};

// GF(2^m) \ {0, 1} is empty for m = 1; throws config_error in that case.
void validate_coeff_domain(const Field& field, CoeffDomain domain);

/// Mother code extended by multiplicative repetition: T-1 extra copies
/// x[t*N+v] = r[t*N+v] * x[v] with nonzero coefficients r.
class RepCode {
public:
    RepCode(MotherCode mother, int T, std::vector<symbol_t> coeffs,
            CoeffDomain domain, std::uint64_t seed);

    const MotherCode& mother() const { return mother_; }
    const Field& field() const { return mother_.field(); }
    int T() const { return T_; }
    std::uint32_t length() const { return static_cast<std::uint32_t>(T_) * mother_.n(); }
    double rate() const { return mother_.rate() / T_; }
    CoeffDomain coeff_domain() const { return domain_; }
    std::uint64_t extend_seed() const { return seed_; }

    // Repetition coefficient r[t*N+v] for copy t in [1, T).
    symbol_t coeff(int t, std::uint32_t v) const {
        return coeffs_[static_cast<std::size_t>(t - 1) * mother_.n() + v];
    }
    const std::vector<symbol_t>& coeffs() const { return coeffs_; }

    std::vector<symbol_t> encode(std::span<const symbol_t> info) const;
    bool is_codeword(std::span<const symbol_t> x) const;

private:
    MotherCode mother_;
    int T_;
    CoeffDomain domain_;
    std::uint64_t seed_;
    std::vector<symbol_t> coeffs_; // (T-1) * N, all nonzero
};

RepCode extend(MotherCode mother, int T, CoeffDomain domain, std::uint64_t seed);

// Punctures ceil(N * (1 - R_mother / target)) uniformly random positions of
// the mother code. target == mother rate gives an empty pattern.
PuncturePattern random_puncture(const MotherCode& mother, Rational target_rate,
                                std::uint64_t seed);

// Transmitted symbol count after puncturing.
std::uint32_t transmitted_symbols(const RepCode& code, const PuncturePattern& pattern);

// Information bits over transmitted bits, the E_b accounting used for AWGN.
double transmitted_rate_bits(const RepCode& code, const PuncturePattern& pattern);

} // namespace nbmr
