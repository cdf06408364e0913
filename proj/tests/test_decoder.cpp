#include "nbmr/decoder.hpp"

#include "nbmr/errors.hpp"
#include "nbmr/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace nbmr;

namespace {

RepCode small_code(int m, std::uint32_t n, int d_c, int T, std::uint64_t seed) {
    Field f(m);
    MotherCode mother = build_mother(f, n, 2, d_c, seed);
    const CoeffDomain domain = m == 1 ? CoeffDomain::ExcludeZero : CoeffDomain::ExcludeZeroOne;
    return extend(std::move(mother), T, domain, seed);
}

std::vector<symbol_t> random_codeword(const RepCode& code, std::uint64_t seed) {
    auto rng = make_stream(seed);
    std::vector<symbol_t> info(code.mother().k());
    for (auto& s : info)
        s = static_cast<symbol_t>(uniform_below(rng, code.field().q()));
    return code.encode(info);
}

Eigen::ArrayXXd noiseless_posteriors(const RepCode& code, std::span<const symbol_t> x) {
    Eigen::ArrayXXd post = Eigen::ArrayXXd::Zero(code.field().q(), code.length());
    for (std::uint32_t idx = 0; idx < code.length(); ++idx)
        post(x[idx], idx) = 1.0;
    return post;
}

} // namespace

TEST_CASE("check update sends the forced symbol for point-mass inputs") {
    RepCode code = small_code(3, 9, 3, 1, 21);
    const Field& f = code.field();
    Decoder dec(code);

    // fabricate point masses consistent with an arbitrary assignment, then
    // verify every c2v message is the parity-forced point mass
    auto x = random_codeword(code, 5);
    dec.initialize(noiseless_posteriors(code, x));
    dec.check_to_variable();
    const MotherCode& mother = code.mother();
    for (std::uint32_t c = 0; c < mother.checks(); ++c) {
        for (int i = 0; i < mother.d_c(); ++i) {
            const std::size_t e = mother.check_edge_begin(c) + static_cast<std::size_t>(i);
            const Edge& edge = mother.edges()[e];
            symbol_t forced = 0;
            for (int j = 0; j < mother.d_c(); ++j) {
                if (j == i)
                    continue;
                const Edge& other = mother.edges()[mother.check_edge_begin(c) + static_cast<std::size_t>(j)];
                forced = f.add(forced, f.mul(other.label, x[other.var]));
            }
            forced = f.mul(f.inv(edge.label), forced);
            CHECK(dec.c2v()(forced, static_cast<Eigen::Index>(e)) == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("check update maps uniform inputs to uniform outputs") {
    RepCode code = small_code(2, 9, 3, 1, 22);
    Decoder dec(code);
    Eigen::ArrayXXd uniform =
        Eigen::ArrayXXd::Constant(code.field().q(), code.length(), 1.0 / code.field().q());
    dec.initialize(uniform);
    dec.check_to_variable();
    CHECK((dec.c2v() - 1.0 / code.field().q()).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("transform-domain check update equals naive convolution") {
    // random messages on a (2,3) GF(8) code; oracle convolves directly
    RepCode code = small_code(3, 12, 3, 1, 23);
    const Field& f = code.field();
    const int q = f.q();
    Decoder dec(code);
    auto rng = make_stream(99);

    Eigen::ArrayXXd post(q, code.length());
    for (std::uint32_t v = 0; v < code.length(); ++v) {
        for (int x = 0; x < q; ++x)
            post(x, v) = uniform_unit(rng) + 1e-9;
        post.col(v) /= post.col(v).sum();
    }
    dec.initialize(post);
    dec.check_to_variable();

    const MotherCode& mother = code.mother();
    for (std::uint32_t c = 0; c < mother.checks(); ++c) {
        for (int i = 0; i < mother.d_c(); ++i) {
            const std::size_t e = mother.check_edge_begin(c) + static_cast<std::size_t>(i);
            ProbVec acc = ProbVec::Zero(q);
            acc[0] = 1.0;
            for (int j = 0; j < mother.d_c(); ++j) {
                if (j == i)
                    continue;
                const std::size_t o = mother.check_edge_begin(c) + static_cast<std::size_t>(j);
                const Edge& oe = mother.edges()[o];
                ProbVec rotated(q);
                for (int x = 0; x < q; ++x)
                    rotated[x] = dec.var_init()(f.mul(f.inv(oe.label), static_cast<symbol_t>(x)), oe.var);
                acc = test::naive_xor_convolve(acc, rotated);
            }
            const Edge& edge = mother.edges()[e];
            ProbVec expect(q);
            for (int x = 0; x < q; ++x)
                expect[x] = acc[f.mul(edge.label, static_cast<symbol_t>(x))];
            expect /= expect.sum();
            for (int x = 0; x < q; ++x)
                CHECK(std::abs(dec.c2v()(x, static_cast<Eigen::Index>(e)) - expect[x]) <= 1e-10);
        }
    }
}

TEST_CASE("variable update is the normalized product with the other branch") {
    RepCode code = small_code(2, 9, 3, 1, 24);
    const int q = code.field().q();
    Decoder dec(code);
    auto rng = make_stream(100);
    Eigen::ArrayXXd post(q, code.length());
    for (std::uint32_t v = 0; v < code.length(); ++v) {
        for (int x = 0; x < q; ++x)
            post(x, v) = uniform_unit(rng) + 1e-9;
        post.col(v) /= post.col(v).sum();
    }
    dec.initialize(post);
    dec.check_to_variable();
    dec.variable_to_check();
    const MotherCode& mother = code.mother();
    for (std::uint32_t v = 0; v < mother.n(); ++v) {
        auto edges = mother.var_edges(v);
        ProbVec to0 = dec.var_init().col(v) * dec.c2v().col(edges[1]);
        to0 /= to0.sum();
        ProbVec to1 = dec.var_init().col(v) * dec.c2v().col(edges[0]);
        to1 /= to1.sum();
        CHECK((dec.v2c().col(edges[0]) - to0).abs().maxCoeff() <= 1e-12);
        CHECK((dec.v2c().col(edges[1]) - to1).abs().maxCoeff() <= 1e-12);
    }
    // uniform incoming reproduces the initial message
    Decoder dec2(code);
    dec2.initialize(post);
    dec2.variable_to_check();
    for (std::uint32_t v = 0; v < mother.n(); ++v)
        for (std::uint32_t e : mother.var_edges(v))
            CHECK((dec2.v2c().col(e) - dec2.var_init().col(v)).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("initialization folds repetition posteriors through the coefficients") {
    RepCode code = small_code(2, 9, 3, 2, 25);
    const Field& f = code.field();
    const int q = f.q();
    auto rng = make_stream(101);
    Eigen::ArrayXXd post(q, code.length());
    for (std::uint32_t v = 0; v < code.length(); ++v) {
        for (int x = 0; x < q; ++x)
            post(x, v) = uniform_unit(rng) + 1e-9;
        post.col(v) /= post.col(v).sum();
    }
    Decoder dec(code);
    dec.initialize(post);
    for (std::uint32_t v = 0; v < code.mother().n(); ++v) {
        ProbVec expect(q);
        for (int x = 0; x < q; ++x)
            expect[x] = post(x, v) * post(f.mul(code.coeff(1, v), static_cast<symbol_t>(x)),
                                          code.mother().n() + v);
        expect /= expect.sum();
        CHECK((dec.var_init().col(v) - expect).abs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("initialization with one copy fully erased reduces to the other copy") {
    RepCode code = small_code(3, 9, 3, 2, 26);
    const Field& f = code.field();
    const int q = f.q();
    auto rng = make_stream(102);
    Eigen::ArrayXXd post(q, code.length());
    // copy 0 erased (uniform), copy 1 informative
    for (std::uint32_t v = 0; v < code.mother().n(); ++v)
        post.col(v).setConstant(1.0 / q);
    for (std::uint32_t v = code.mother().n(); v < code.length(); ++v) {
        for (int x = 0; x < q; ++x)
            post(x, v) = uniform_unit(rng) + 1e-9;
        post.col(v) /= post.col(v).sum();
    }
    Decoder dec(code);
    dec.initialize(post);
    for (std::uint32_t v = 0; v < code.mother().n(); ++v) {
        ProbVec expect(q);
        for (int x = 0; x < q; ++x)
            expect[x] = post(f.mul(code.coeff(1, v), static_cast<symbol_t>(x)), code.mother().n() + v);
        expect /= expect.sum();
        CHECK((dec.var_init().col(v) - expect).abs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("T = 1 initialization is the channel posterior itself") {
    RepCode code = small_code(3, 9, 3, 1, 27);
    const int q = code.field().q();
    auto rng = make_stream(103);
    Eigen::ArrayXXd post(q, code.length());
    for (std::uint32_t v = 0; v < code.length(); ++v) {
        for (int x = 0; x < q; ++x)
            post(x, v) = uniform_unit(rng) + 1e-9;
        post.col(v) /= post.col(v).sum();
    }
    Decoder dec(code);
    dec.initialize(post);
    CHECK((dec.var_init() - post).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("noiseless input decodes in zero iterations") {
    for (int T : {1, 2, 3}) {
        RepCode code = small_code(3, 12, 3, T, 30 + static_cast<std::uint64_t>(T));
        auto x = random_codeword(code, 77);
        Decoder dec(code);
        DecodeResult res = dec.decode(noiseless_posteriors(code, x), 50);
        CHECK(res.success);
        CHECK(res.iterations == 0);
        for (std::uint32_t v = 0; v < code.mother().n(); ++v)
            CHECK(res.estimate[v] == x[v]);
    }
}

TEST_CASE("iteration cap produces FAIL") {
    RepCode code = small_code(2, 9, 3, 1, 33);
    auto rng = make_stream(7);
    auto x = random_codeword(code, 8);
    auto bits = symbols_to_bits(code.field(), x);
    auto obs = transmit_bec(bits, 0.9, rng); // far above any threshold
    Decoder dec(code);
    DecodeResult res = dec.decode(obs, 1);
    CHECK_FALSE(res.success);
    CHECK(res.iterations == 1);
    CHECK_THROWS_AS(dec.decode(obs, 0), config_error);
}

TEST_CASE("decoding recovers below-threshold BEC erasures at moderate length") {
    // (2,3) over GF(64), T = 1: threshold is ~0.646; eps = 0.3 decodes almost
    // surely (column-weight-2 stopping structures need label-consistent
    // cycles, ~1/(q-1) each, so GF(64) keeps the floor low at this length)
    RepCode code = small_code(6, 240, 3, 1, 44);
    auto x = random_codeword(code, 9);
    auto bits = symbols_to_bits(code.field(), x);
    Decoder dec(code);
    int ok = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto rng = make_stream(600 + t);
        auto obs = transmit_bec(bits, 0.3, rng);
        DecodeResult res = dec.decode(obs, 200);
        bool exact = res.success;
        if (exact)
            for (std::uint32_t v = 0; v < code.mother().n(); ++v)
                exact &= res.estimate[v] == x[v];
        ok += exact;
    }
    CHECK(ok >= 18);
}

TEST_CASE("zero-overlap products fall back to uniform and are counted") {
    RepCode code = small_code(2, 9, 3, 2, 35);
    const int q = code.field().q();
    Eigen::ArrayXXd post = Eigen::ArrayXXd::Zero(q, code.length());
    // copy 0 says "surely 1", copy 1 says "surely 0": impossible transmission
    for (std::uint32_t v = 0; v < code.mother().n(); ++v) {
        post(1, v) = 1.0;
        post(0, code.mother().n() + v) = 1.0;
    }
    // r * 0 = 0, so the folded product of mass-at-1 and permuted mass-at-0
    // has empty support at every variable
    Decoder dec(code);
    dec.initialize(post);
    CHECK(dec.contradictions() == static_cast<int>(code.mother().n()));
    for (std::uint32_t v = 0; v < code.mother().n(); ++v)
        CHECK((dec.var_init().col(v) - 1.0 / q).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("punctured positions enter as uniform and extra observations are rejected") {
    Field f(3);
    MotherCode mother = build_mother(f, 18, 2, 3, 55);
    PuncturePattern pattern = random_puncture(mother, Rational{1, 2}, 55);
    RepCode code = extend(std::move(mother), 1, CoeffDomain::ExcludeZero, 55);
    auto x = random_codeword(code, 10);

    std::vector<bool> punct(code.length(), false);
    for (auto v : pattern)
        punct[v] = true;
    std::vector<symbol_t> transmitted;
    for (std::uint32_t v = 0; v < code.length(); ++v)
        if (!punct[v])
            transmitted.push_back(x[v]);
    auto bits = symbols_to_bits(code.field(), transmitted);

    std::vector<BitObservation> obs(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        obs[i] = BitObservation{ChannelKind::Bec, static_cast<double>(bits[i]), 0.0, false};

    Decoder dec(code, pattern);
    Eigen::ArrayXXd post = dec.assemble_posteriors(obs);
    for (auto v : pattern)
        CHECK((post.col(v) - 1.0 / code.field().q()).abs().maxCoeff() <= 1e-12);

    // noise-free punctured transmission still decodes (pattern is rate 1/2)
    DecodeResult res = dec.decode(obs, 200);
    CHECK(res.success);
    for (std::uint32_t v = 0; v < code.mother().n(); ++v)
        CHECK(res.estimate[v] == x[v]);

    obs.emplace_back();
    CHECK_THROWS_AS(dec.assemble_posteriors(obs), config_error);
}

TEST_CASE("support-resolution decoding for all-zero erasure runs") {
    RepCode code = small_code(3, 12, 3, 2, 36);
    const int q = code.field().q();
    const std::uint32_t n = code.mother().n();

    // nothing erased: resolved immediately
    Eigen::ArrayXXd post = Eigen::ArrayXXd::Zero(q, code.length());
    for (std::uint32_t idx = 0; idx < code.length(); ++idx)
        post(0, idx) = 1.0;
    Decoder dec(code);
    DecodeResult res = dec.decode_resolution(post, 50);
    CHECK(res.success);
    CHECK(res.iterations == 0);
    CHECK(res.unresolved_symbols == 0);

    // copy 0 fully erased, copy 1 clean: initialization alone resolves it
    post.block(0, 0, q, n).setConstant(1.0 / q);
    res = dec.decode_resolution(post, 50);
    CHECK(res.success);
    CHECK(res.iterations == 0);

    // everything erased: nothing can resolve; residual counters cover all
    post.setConstant(1.0 / q);
    res = dec.decode_resolution(post, 50);
    CHECK_FALSE(res.success);
    CHECK(res.unresolved_symbols == static_cast<int>(n));
    CHECK(res.residual_bits == static_cast<int>(n) * code.field().m());
    for (symbol_t s : res.estimate)
        CHECK(s == 0); // ties resolve toward the smallest symbol

    // the syndrome decoder would declare instant success here, which is the
    // reason all-zero campaigns must use resolution mode
    DecodeResult syn = dec.decode(post, 50);
    CHECK(syn.success);
    CHECK(syn.iterations == 0);
}

TEST_CASE("reduced decoder equals full-graph BP on the repetition graph") {
    // spot instances here; the acceptance suite runs the 100-instance battery
    struct Inst {
        int m;
        std::uint32_t n;
        int d_c;
        int T;
        double eps;
    };
    int checked_iters = 0;
    for (const Inst& inst : {Inst{2, 9, 3, 2, 0.45}, Inst{3, 12, 3, 3, 0.5}, Inst{2, 12, 4, 2, 0.3}}) {
        RepCode code = small_code(inst.m, inst.n, inst.d_c, inst.T, 900 + inst.n);
        auto x = random_codeword(code, inst.n);
        auto bits = symbols_to_bits(code.field(), x);
        auto rng = make_stream(inst.n * 7);
        auto obs = transmit_bec(bits, inst.eps, rng);

        Decoder dec(code);
        Eigen::ArrayXXd post = dec.assemble_posteriors(obs);

        test::FullGraphDecoder ref(code);
        dec.initialize(post);
        ref.initialize(post);

        std::vector<symbol_t> est_red, est_full;
        for (int it = 0; it < 12; ++it) {
            dec.check_to_variable();
            dec.variable_to_check();
            ref.iterate();
            CHECK((dec.v2c() - ref.mother_v2c()).abs().maxCoeff() <= 1e-9);
            CHECK((dec.c2v() - ref.mother_c2v()).abs().maxCoeff() <= 1e-9);
            dec.tentative_decision(est_red);
            ref.decide(est_full);
            for (std::uint32_t v = 0; v < code.mother().n(); ++v)
                CHECK(est_red[v] == est_full[v]);
            ++checked_iters;
        }
    }
    CHECK(checked_iters == 36);
}
