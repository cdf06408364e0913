#include "nbmr/sim.hpp"

#include "nbmr/errors.hpp"
#include "nbmr/rng.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <thread>

namespace nbmr {

namespace {

struct TrialOutcome {
    bool frame_error = false;
    int iterations = 0;
    bool success = false;
    std::uint32_t symbol_errors = 0;
    std::uint32_t bit_errors = 0;
    std::uint32_t contradictions = 0;
};

// Per-worker context so decoder buffers are reused across trials.
struct Worker {
    explicit Worker(const RepCode& code, const PuncturePattern& pattern)
        : decoder(code, pattern), punctured(code.length(), false) {
        for (std::uint32_t v : pattern)
            punctured[v] = true;
    }
    Decoder decoder;
    std::vector<bool> punctured;
    std::vector<symbol_t> info;
    std::vector<symbol_t> codeword;
    std::vector<symbol_t> transmitted;
    std::vector<std::uint8_t> bits;
};

void validate(const SimConfig& config) {
    if (config.grid.empty())
        throw config_error("simulation grid must be non-empty");
    if (config.min_trials < 1)
        throw config_error("min_trials must be >= 1");
    if (config.max_frame_errors < 1 || config.max_frames < 1)
        throw config_error("stop rule must be positive");
    if (config.workers < 1)
        throw config_error("worker count must be >= 1");
    if (config.info_mode == InfoMode::AllZero && config.channel != ChannelKind::Bec)
        throw config_error("the all-zero shortcut is only valid on the BEC");
    if (config.max_iter < 1)
        throw config_error("max_iter must be >= 1");
}

TrialOutcome run_trial(Worker& w, const RepCode& code, const PuncturePattern& pattern,
                       const SimConfig& config, double param, std::uint64_t grid_index,
                       std::uint64_t trial_index) {
    const Field& field = code.field();
    // separate source and channel streams so the all-zero shortcut sees the
    // same channel realization as random information words
    auto info_rng = make_stream(config.master_seed, grid_index, trial_index, 1);
    auto rng = make_stream(config.master_seed, grid_index, trial_index, 2);

    const std::uint32_t k = code.mother().k();
    w.info.resize(k);
    if (config.info_mode == InfoMode::AllZero) {
        std::fill(w.info.begin(), w.info.end(), symbol_t{0});
        w.codeword.assign(code.length(), 0);
    } else {
        for (std::uint32_t j = 0; j < k; ++j)
            w.info[j] = static_cast<symbol_t>(uniform_below(info_rng, static_cast<std::uint64_t>(field.q())));
        w.codeword = code.encode(w.info);
    }

    w.transmitted.clear();
    for (std::uint32_t idx = 0; idx < code.length(); ++idx)
        if (!w.punctured[idx])
            w.transmitted.push_back(w.codeword[idx]);
    w.bits = symbols_to_bits(field, w.transmitted);

    std::vector<BitObservation> obs;
    if (config.channel == ChannelKind::Bec)
        obs = transmit_bec(w.bits, param, rng);
    else
        obs = transmit_awgn(w.bits, param, transmitted_rate_bits(code, pattern), rng);

    TrialOutcome out;
    if (config.info_mode == InfoMode::AllZero) {
        // support-resolution decode; symbol/bit counters report residual
        // erasures rather than hard-decision mistakes
        const DecodeResult res = w.decoder.decode_resolution(obs, config.max_iter);
        out.success = res.success;
        out.iterations = res.iterations;
        out.contradictions = static_cast<std::uint32_t>(res.contradictions);
        out.symbol_errors = static_cast<std::uint32_t>(res.unresolved_symbols);
        out.bit_errors = static_cast<std::uint32_t>(res.residual_bits);
        out.frame_error = !res.success;
        return out;
    }

    const DecodeResult res = w.decoder.decode(obs, config.max_iter);
    out.success = res.success;
    out.iterations = res.iterations;
    out.contradictions = static_cast<std::uint32_t>(res.contradictions);
    const std::uint32_t n = code.mother().n();
    for (std::uint32_t v = 0; v < n; ++v) {
        const symbol_t diff = field.add(res.estimate[v], w.codeword[v]);
        if (diff != 0) {
            ++out.symbol_errors;
            out.bit_errors += static_cast<std::uint32_t>(std::popcount(static_cast<unsigned>(diff)));
        }
    }
    out.frame_error = !res.success || out.symbol_errors != 0;
    return out;
}

} // namespace

void run_sim(const RepCode& code, const PuncturePattern& pattern, const SimConfig& config,
             const std::function<void(const SimRecord&)>& emit,
             const std::function<void(const SimRecord&, double)>& progress) {
    validate(config);
    const std::uint32_t code_crc = code_checksum(code, pattern);

    std::vector<Worker> workers;
    workers.reserve(static_cast<std::size_t>(config.workers));
    for (int w = 0; w < config.workers; ++w)
        workers.emplace_back(code, pattern);

    for (std::size_t g = 0; g < config.grid.size(); ++g) {
        const double param = config.grid[g];
        const auto started = std::chrono::steady_clock::now();

        SimRecord rec;
        rec.channel = config.channel;
        rec.param = param;
        rec.max_iter = config.max_iter;
        rec.master_seed = config.master_seed;
        rec.code_crc = code_crc;

        std::uint64_t iter_sum_ok = 0;
        std::uint64_t successes = 0;
        std::vector<TrialOutcome> block(kSimBlockSize);

        std::uint64_t next_trial = 0;
        for (;;) {
            const bool enough_errors =
                rec.frame_errors >= config.max_frame_errors && rec.trials >= config.min_trials;
            if (enough_errors || rec.trials >= config.max_frames)
                break;
            const std::uint64_t block_end = std::min(next_trial + kSimBlockSize, config.max_frames);
            const std::uint64_t block_n = block_end - next_trial;

            std::atomic<std::uint64_t> cursor{0};
            auto work = [&](int wi) {
                for (;;) {
                    const std::uint64_t slot = cursor.fetch_add(1);
                    if (slot >= block_n)
                        return;
                    block[slot] = run_trial(workers[static_cast<std::size_t>(wi)], code, pattern,
                                            config, param, g, next_trial + slot);
                }
            };
            if (config.workers == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (int wi = 0; wi < config.workers; ++wi)
                    pool.emplace_back(work, wi);
                for (auto& t : pool)
                    t.join();
            }

            for (std::uint64_t i = 0; i < block_n; ++i) {
                const TrialOutcome& t = block[i];
                ++rec.trials;
                rec.frame_errors += t.frame_error;
                rec.symbol_errors += t.symbol_errors;
                rec.bit_errors += t.bit_errors;
                rec.contradictions += t.contradictions;
                if (t.success) {
                    ++successes;
                    iter_sum_ok += static_cast<std::uint64_t>(t.iterations);
                }
            }
            next_trial = block_end;
        }

        rec.fer = static_cast<double>(rec.frame_errors) / static_cast<double>(rec.trials);
        rec.mean_iterations_ok =
            successes ? static_cast<double>(iter_sum_ok) / static_cast<double>(successes) : 0.0;
        if (progress) {
            const double secs = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - started)
                                    .count();
            progress(rec, secs);
        }
        emit(rec);
    }
}

} // namespace nbmr
