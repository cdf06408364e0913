#pragma once

#include "nbmr/channel.hpp"
#include "nbmr/code.hpp"
#include "nbmr/transform.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace nbmr {

struct DecodeResult {
    bool success = false;
    std::vector<symbol_t> estimate; // mother symbols, last tentative decision
    int iterations = 0;             // 0 = solved from the channel alone
    std::vector<int> syndrome_trace; // unsatisfied checks after each decision
    int contradictions = 0; // zero-overlap products replaced by uniform
    // support-resolution decoding only:
    int unresolved_symbols = 0; // mother beliefs with support size > 1
    int residual_bits = 0;      // sum of log2(support) over those beliefs
};

/// Reduced BP decoder: the T-1 repetition copies are folded into each mother
/// variable's initial message (their degree-one variables never change the
/// messages they send back), and iterations run on the mother Tanner graph
/// only. Check updates convolve in the Walsh-Hadamard domain. Buffers are
/// reused across decode() calls; one Decoder serves one thread.
class Decoder {
public:
    explicit Decoder(const RepCode& code, PuncturePattern pattern = {});

    // Posterior columns for all T*N positions (q x T*N). Punctured mother
    // positions must carry uniform columns; assemble_posteriors() does that.
    void initialize(const Eigen::ArrayXXd& posteriors);
    void check_to_variable();
    void variable_to_check();
    // Beliefs' argmax per variable with near-ties (relative 1e-9) resolved
    // toward the smallest symbol; true when the mother syndrome is clear.
    bool tentative_decision(std::vector<symbol_t>& estimate);

    DecodeResult decode(const Eigen::ArrayXXd& posteriors, int max_iter);
    DecodeResult decode(std::span<const BitObservation> observations, int max_iter);

    // Erasure-channel decode with support resolution as the success test:
    // done when every mother belief's support is a single symbol. The
    // smallest-symbol tie rule makes the syndrome test vacuous for all-zero
    // transmission (0 is the minimum of every subspace), so the all-zero
    // shortcut must use this mode; support dynamics are codeword-independent.
    DecodeResult decode_resolution(const Eigen::ArrayXXd& posteriors, int max_iter);
    DecodeResult decode_resolution(std::span<const BitObservation> observations, int max_iter);

    // Posteriors from the bit observations of the transmitted positions (all
    // T*N symbols except punctured ones, in increasing index order, m bits
    // each); punctured positions get uniform columns.
    Eigen::ArrayXXd assemble_posteriors(std::span<const BitObservation> observations) const;

    const RepCode& code() const { return code_; }
    const PuncturePattern& pattern() const { return pattern_; }
    int unsatisfied_checks(std::span<const symbol_t> estimate) const;

    // Exposed for step-by-step comparison against reference decoders.
    const Eigen::ArrayXXd& var_init() const { return var_init_; }
    const Eigen::ArrayXXd& v2c() const { return v2c_; }
    const Eigen::ArrayXXd& c2v() const { return c2v_; }
    int contradictions() const { return contradictions_; }

private:
    const RepCode& code_;
    PuncturePattern pattern_;
    int q_;
    std::uint32_t n_;
    std::size_t n_edges_;

    std::vector<symbol_t> rep_perm_; // (T-1)*N tables: x -> r * x
    std::vector<symbol_t> rot_in_;   // per edge: x -> h^-1 * x
    std::vector<symbol_t> rot_out_;  // per edge: x -> h * x

    Eigen::ArrayXXd var_init_; // q x N
    Eigen::ArrayXXd v2c_;      // q x E
    Eigen::ArrayXXd c2v_;      // q x E
    Eigen::ArrayXXd check_buf_;  // q x d_c, transform-domain inputs
    Eigen::ArrayXXd prefix_buf_; // q x (d_c + 1)
    Eigen::ArrayXXd suffix_buf_; // q x (d_c + 1)
    Eigen::ArrayXd scratch_;     // q
    int contradictions_ = 0;
};

// Tie-tolerant argmax shared with the reference decoders in the test suite.
int argmax_symbol(const Eigen::Ref<const Eigen::ArrayXd>& belief);

} // namespace nbmr
