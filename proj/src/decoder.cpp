#include "nbmr/decoder.hpp"

#include "nbmr/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nbmr {

namespace {
constexpr double kClampTol = 1e-12; // transform-domain cancellation residue
constexpr double kTieTol = 1e-9;    // relative near-tie window for argmax
} // namespace

int argmax_symbol(const Eigen::Ref<const Eigen::ArrayXd>& belief) {
    const double best = belief.maxCoeff();
    const double cut = best - kTieTol * std::abs(best);
    for (int x = 0; x < belief.size(); ++x)
        if (belief[x] >= cut)
            return x;
    return 0;
}

Decoder::Decoder(const RepCode& code, PuncturePattern pattern)
    : code_(code), pattern_(std::move(pattern)), q_(code.field().q()),
      n_(code.mother().n()), n_edges_(code.mother().edges().size()) {
    for (std::uint32_t v : pattern_)
        if (v >= n_)
            throw config_error("punctured position out of range");

    const Field& f = code_.field();
    rep_perm_.resize(static_cast<std::size_t>(code_.T() - 1) * n_ * q_);
    for (int t = 1; t < code_.T(); ++t)
        for (std::uint32_t v = 0; v < n_; ++v) {
            symbol_t* table = rep_perm_.data() +
                (static_cast<std::size_t>(t - 1) * n_ + v) * static_cast<std::size_t>(q_);
            const symbol_t r = code_.coeff(t, v);
            for (int x = 0; x < q_; ++x)
                table[x] = f.mul(r, static_cast<symbol_t>(x));
        }

    rot_in_.resize(n_edges_ * static_cast<std::size_t>(q_));
    rot_out_.resize(n_edges_ * static_cast<std::size_t>(q_));
    for (std::size_t e = 0; e < n_edges_; ++e) {
        const symbol_t h = code_.mother().edges()[e].label;
        const symbol_t hinv = f.inv(h);
        for (int x = 0; x < q_; ++x) {
            rot_in_[e * static_cast<std::size_t>(q_) + static_cast<std::size_t>(x)] =
                f.mul(hinv, static_cast<symbol_t>(x));
            rot_out_[e * static_cast<std::size_t>(q_) + static_cast<std::size_t>(x)] =
                f.mul(h, static_cast<symbol_t>(x));
        }
    }

    var_init_.resize(q_, n_);
    v2c_.resize(q_, static_cast<Eigen::Index>(n_edges_));
    c2v_.resize(q_, static_cast<Eigen::Index>(n_edges_));
    check_buf_.resize(q_, code_.mother().d_c());
    prefix_buf_.resize(q_, code_.mother().d_c() + 1);
    suffix_buf_.resize(q_, code_.mother().d_c() + 1);
    scratch_.resize(q_);
}

Eigen::ArrayXXd Decoder::assemble_posteriors(std::span<const BitObservation> observations) const {
    const int m = code_.field().m();
    const std::size_t expected =
        static_cast<std::size_t>(transmitted_symbols(code_, pattern_)) * static_cast<std::size_t>(m);
    if (observations.size() != expected)
        throw config_error("observation count does not match transmitted bits");

    std::vector<bool> punctured(code_.length(), false);
    for (std::uint32_t v : pattern_)
        punctured[v] = true;

    Eigen::ArrayXXd post(q_, code_.length());
    std::size_t cursor = 0;
    for (std::uint32_t idx = 0; idx < code_.length(); ++idx) {
        if (punctured[idx]) {
            post.col(idx).setConstant(1.0 / q_);
            continue;
        }
        post.col(idx) = symbol_posterior(
            code_.field(), observations.subspan(cursor, static_cast<std::size_t>(m)));
        cursor += static_cast<std::size_t>(m);
    }
    return post;
}

void Decoder::initialize(const Eigen::ArrayXXd& posteriors) {
    if (posteriors.rows() != q_ || posteriors.cols() != static_cast<Eigen::Index>(code_.length()))
        throw config_error("posterior matrix must be q x T*N");
    contradictions_ = 0;
    for (std::uint32_t v = 0; v < n_; ++v) {
        var_init_.col(v) = posteriors.col(v);
        for (int t = 1; t < code_.T(); ++t) {
            const symbol_t* perm = rep_perm_.data() +
                (static_cast<std::size_t>(t - 1) * n_ + v) * static_cast<std::size_t>(q_);
            const auto copy = posteriors.col(static_cast<Eigen::Index>(t) * n_ + v);
            for (int x = 0; x < q_; ++x)
                var_init_(x, v) *= copy[perm[x]];
        }
        if (!normalize(var_init_.col(v)))
            ++contradictions_;
    }
    for (std::size_t e = 0; e < n_edges_; ++e)
        v2c_.col(static_cast<Eigen::Index>(e)) = var_init_.col(code_.mother().edges()[e].var);
    c2v_.setConstant(1.0 / q_);
}

void Decoder::check_to_variable() {
    const MotherCode& mother = code_.mother();
    const int d_c = mother.d_c();
    for (std::uint32_t c = 0; c < mother.checks(); ++c) {
        const std::size_t begin = mother.check_edge_begin(c);
        for (int i = 0; i < d_c; ++i) {
            const std::size_t e = begin + static_cast<std::size_t>(i);
            const symbol_t* rot = rot_in_.data() + e * static_cast<std::size_t>(q_);
            const auto msg = v2c_.col(static_cast<Eigen::Index>(e));
            for (int x = 0; x < q_; ++x)
                check_buf_(x, i) = msg[rot[x]];
            wht_inplace(check_buf_.col(i));
        }
        prefix_buf_.col(0).setOnes();
        for (int i = 0; i < d_c; ++i)
            prefix_buf_.col(i + 1) = prefix_buf_.col(i) * check_buf_.col(i);
        suffix_buf_.col(d_c).setOnes();
        for (int i = d_c - 1; i >= 0; --i)
            suffix_buf_.col(i) = suffix_buf_.col(i + 1) * check_buf_.col(i);

        for (int i = 0; i < d_c; ++i) {
            const std::size_t e = begin + static_cast<std::size_t>(i);
            scratch_ = prefix_buf_.col(i) * suffix_buf_.col(i + 1);
            wht_inplace(scratch_);
            scratch_ /= static_cast<double>(q_);
            const symbol_t* rot = rot_out_.data() + e * static_cast<std::size_t>(q_);
            auto out = c2v_.col(static_cast<Eigen::Index>(e));
            for (int x = 0; x < q_; ++x) {
                const double val = scratch_[rot[x]];
                out[x] = val < kClampTol ? 0.0 : val;
            }
            normalize(out);
        }
    }
}

void Decoder::variable_to_check() {
    const MotherCode& mother = code_.mother();
    const int d_v = mother.d_v();
    for (std::uint32_t v = 0; v < n_; ++v) {
        const auto edges = mother.var_edges(v);
        for (int a = 0; a < d_v; ++a) {
            auto out = v2c_.col(static_cast<Eigen::Index>(edges[static_cast<std::size_t>(a)]));
            out = var_init_.col(v);
            for (int b = 0; b < d_v; ++b)
                if (b != a)
                    out *= c2v_.col(static_cast<Eigen::Index>(edges[static_cast<std::size_t>(b)]));
            if (!normalize(out))
                ++contradictions_;
        }
    }
}

bool Decoder::tentative_decision(std::vector<symbol_t>& estimate) {
    const MotherCode& mother = code_.mother();
    estimate.resize(n_);
    for (std::uint32_t v = 0; v < n_; ++v) {
        scratch_ = var_init_.col(v);
        for (std::uint32_t e : mother.var_edges(v))
            scratch_ *= c2v_.col(static_cast<Eigen::Index>(e));
        estimate[v] = static_cast<symbol_t>(argmax_symbol(scratch_));
    }
    return mother.syndrome_ok(estimate);
}

int Decoder::unsatisfied_checks(std::span<const symbol_t> estimate) const {
    const MotherCode& mother = code_.mother();
    const Field& f = code_.field();
    int unsat = 0;
    for (std::uint32_t c = 0; c < mother.checks(); ++c) {
        symbol_t s = 0;
        const std::size_t begin = mother.check_edge_begin(c);
        for (int i = 0; i < mother.d_c(); ++i) {
            const Edge& e = mother.edges()[begin + static_cast<std::size_t>(i)];
            s = f.add(s, f.mul(e.label, estimate[e.var]));
        }
        unsat += s != 0;
    }
    return unsat;
}

DecodeResult Decoder::decode(const Eigen::ArrayXXd& posteriors, int max_iter) {
    if (max_iter < 1)
        throw config_error("max_iter must be >= 1");
    DecodeResult res;
    initialize(posteriors);
    if (tentative_decision(res.estimate)) {
        res.success = true;
        res.iterations = 0;
        res.syndrome_trace.push_back(0);
        res.contradictions = contradictions_;
        return res;
    }
    res.syndrome_trace.push_back(unsatisfied_checks(res.estimate));
    for (int it = 1; it <= max_iter; ++it) {
        check_to_variable();
        variable_to_check();
        const bool done = tentative_decision(res.estimate);
        res.syndrome_trace.push_back(done ? 0 : unsatisfied_checks(res.estimate));
        if (done) {
            res.success = true;
            res.iterations = it;
            res.contradictions = contradictions_;
            return res;
        }
    }
    res.success = false;
    res.iterations = max_iter;
    res.contradictions = contradictions_;
    return res;
}

DecodeResult Decoder::decode(std::span<const BitObservation> observations, int max_iter) {
    return decode(assemble_posteriors(observations), max_iter);
}

DecodeResult Decoder::decode_resolution(const Eigen::ArrayXXd& posteriors, int max_iter) {
    if (max_iter < 1)
        throw config_error("max_iter must be >= 1");
    const MotherCode& mother = code_.mother();
    auto survey = [&](DecodeResult& res) {
        res.estimate.resize(n_);
        res.unresolved_symbols = 0;
        res.residual_bits = 0;
        for (std::uint32_t v = 0; v < n_; ++v) {
            scratch_ = var_init_.col(v);
            for (std::uint32_t e : mother.var_edges(v))
                scratch_ *= c2v_.col(static_cast<Eigen::Index>(e));
            int support = 0;
            for (int x = 0; x < q_; ++x)
                support += scratch_[x] > 0.0;
            res.estimate[v] = static_cast<symbol_t>(argmax_symbol(scratch_));
            if (support > 1) {
                ++res.unresolved_symbols;
                while (support > 1) { // BEC supports are power-of-two cosets
                    support >>= 1;
                    ++res.residual_bits;
                }
            }
        }
        return res.unresolved_symbols == 0;
    };

    DecodeResult res;
    initialize(posteriors);
    Eigen::Index prev_support = -1;
    for (int it = 0; it <= max_iter; ++it) {
        if (it > 0) {
            check_to_variable();
            variable_to_check();
        }
        const bool done = survey(res);
        res.syndrome_trace.push_back(res.unresolved_symbols);
        if (done) {
            res.success = true;
            res.iterations = it;
            res.contradictions = contradictions_;
            return res;
        }
        // erasure messages are uniform over cosets and supports only shrink,
        // so an unchanged support count is an exact fixed point
        const Eigen::Index support = (v2c_ > 0.0).count();
        if (support == prev_support)
            break;
        prev_support = support;
    }
    res.success = false;
    res.iterations = max_iter;
    res.contradictions = contradictions_;
    return res;
}

DecodeResult Decoder::decode_resolution(std::span<const BitObservation> observations,
                                        int max_iter) {
    return decode_resolution(assemble_posteriors(observations), max_iter);
}

} // namespace nbmr
