#pragma once

#include "nbmr/channel.hpp"
#include "nbmr/code.hpp"
#include "nbmr/code_io.hpp"
#include "nbmr/decoder.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace nbmr {

enum class InfoMode {
    Random,  // seeded random information words, encoder exercised per frame
    AllZero, // BEC-only shortcut; erasure decoding is codeword-independent
};

struct SimConfig {
    ChannelKind channel = ChannelKind::Bec;
    std::vector<double> grid;        // BEC: erasure probs; AWGN: Eb/N0 [dB]
    int max_iter = 200;
    std::uint64_t min_trials = 1;
    std::uint64_t max_frame_errors = 100;
    std::uint64_t max_frames = 1000000;
    std::uint64_t master_seed = 0;
    int workers = 1;
    InfoMode info_mode = InfoMode::Random;
};

/// One Monte Carlo measurement point. Every field is a deterministic
/// function of (code, pattern, config, master_seed); wall-clock timing is
/// deliberately kept out (reported separately on stderr by the CLI).
struct SimRecord {
    ChannelKind channel;
    double param = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t frame_errors = 0;
    double fer = 0.0;
    std::uint64_t symbol_errors = 0; // wrong mother symbols in final estimates
    std::uint64_t bit_errors = 0;    // wrong bits of those symbols
    double mean_iterations_ok = 0.0; // mean rounds over successful decodes
    std::uint64_t contradictions = 0;
    int max_iter = 0;
    std::uint64_t master_seed = 0;
    std::uint32_t code_crc = 0;
};

// Runs the grid in order; emits one record per grid point. Trials are
// processed in fixed-size blocks with the stop rule evaluated on block
// boundaries, so the executed trial set (and hence every record) is
// independent of the worker count. Trial i of grid point g draws from an rng
// stream seeded by (master_seed, g, i).
void run_sim(const RepCode& code, const PuncturePattern& pattern, const SimConfig& config,
             const std::function<void(const SimRecord&)>& emit,
             const std::function<void(const SimRecord&, double /*seconds*/)>& progress = {});

inline constexpr std::uint64_t kSimBlockSize = 256;

} // namespace nbmr
