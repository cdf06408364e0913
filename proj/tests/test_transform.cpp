#include "nbmr/transform.hpp"

#include "nbmr/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace nbmr;

namespace {

ProbVec random_prob(int q, std::mt19937_64& rng) {
    ProbVec p(q);
    for (int x = 0; x < q; ++x)
        p[x] = uniform_unit(rng) + 1e-6;
    p /= p.sum();
    return p;
}

} // namespace

TEST_CASE("double transform is 2^m times the identity") {
    auto rng = make_stream(77);
    for (int m = 1; m <= 10; ++m) {
        const int q = 1 << m;
        ProbVec p = random_prob(q, rng);
        ProbVec twice = p;
        wht_inplace(twice);
        wht_inplace(twice);
        twice /= static_cast<double>(q);
        CHECK((twice - p).abs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("transform convolution equals the naive double sum") {
    auto rng = make_stream(78);
    for (int m = 1; m <= 6; ++m) {
        const int q = 1 << m;
        for (int trial = 0; trial < 20; ++trial) {
            ProbVec a = random_prob(q, rng);
            ProbVec b = random_prob(q, rng);
            ProbVec fast = xor_convolve(a, b);
            ProbVec slow = test::naive_xor_convolve(a, b);
            CHECK((fast - slow).abs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("convolution of point masses lands on the XOR of the points") {
    const int q = 16;
    for (int a = 0; a < q; a += 3) {
        for (int b = 0; b < q; b += 5) {
            ProbVec pa = ProbVec::Zero(q), pb = ProbVec::Zero(q);
            pa[a] = 1.0;
            pb[b] = 1.0;
            ProbVec c = xor_convolve(pa, pb);
            CHECK(c[a ^ b] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(c.sum() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("convolving with uniform stays uniform") {
    auto rng = make_stream(79);
    const int q = 32;
    ProbVec u = ProbVec::Constant(q, 1.0 / q);
    ProbVec p = random_prob(q, rng);
    ProbVec c = xor_convolve(p, u);
    CHECK((c - 1.0 / q).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("normalize handles degenerate input") {
    ProbVec zero = ProbVec::Zero(8);
    CHECK_FALSE(normalize(zero));
    CHECK(zero[3] == doctest::Approx(1.0 / 8));

    ProbVec ok(4);
    ok << 1.0, 3.0, 0.0, 4.0;
    CHECK(normalize(ok));
    CHECK(ok.sum() == doctest::Approx(1.0));
    CHECK(ok[1] == doctest::Approx(3.0 / 8.0));
}
