#include "nbmr/density.hpp"

#include "nbmr/errors.hpp"
#include "nbmr/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace nbmr;

namespace {

Density random_density(int m, std::mt19937_64& rng) {
    Density d(m + 1);
    for (int i = 0; i <= m; ++i)
        d[i] = uniform_unit(rng) + 1e-3;
    d /= d.sum();
    return d;
}

} // namespace

TEST_CASE("Gaussian binomials count subspaces") {
    CHECK(gaussian_binomial(3, 0) == doctest::Approx(1.0));
    CHECK(gaussian_binomial(2, 1) == doctest::Approx(3.0));
    CHECK(gaussian_binomial(4, 2) == doctest::Approx(35.0));
    CHECK(gaussian_binomial(2, 3) == 0.0); // k > m by convention
    // against exhaustive enumeration of subspaces by dimension, m <= 4
    for (int m = 1; m <= 4; ++m) {
        std::map<int, int> by_dim;
        for (std::uint32_t mask : test::all_subspaces(m))
            by_dim[test::subspace_dim(mask)]++;
        for (int k = 0; k <= m; ++k)
            CHECK(gaussian_binomial(m, k) == doctest::Approx(by_dim[k]).epsilon(1e-12));
    }
}

TEST_CASE("kernel rows are conditional distributions and hit the forced entries") {
    for (int m : {1, 2, 3, 4, 6, 8, 10}) {
        OperatorTables t(m);
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                double sd = 0.0, st = 0.0;
                for (int k = 0; k <= m; ++k) {
                    sd += t.intersect_kernel(k)(i, j);
                    st += t.sum_kernel(k)(i, j);
                }
                CHECK(sd == doctest::Approx(1.0).epsilon(1e-10));
                CHECK(st == doctest::Approx(1.0).epsilon(1e-10));
            }
        }
        for (int k = 0; k <= m; ++k) {
            CHECK(t.intersect_kernel(k)(k, m) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(t.sum_kernel(k)(k, 0) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("kernels match exhaustive subspace-pair statistics for m <= 4") {
    for (int m = 1; m <= 4; ++m) {
        OperatorTables t(m);
        auto subs = test::all_subspaces(m);
        std::map<int, std::vector<std::uint32_t>> by_dim;
        for (std::uint32_t mask : subs)
            by_dim[test::subspace_dim(mask)].push_back(mask);
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                std::vector<double> inter_freq(m + 1, 0.0), sum_freq(m + 1, 0.0);
                double total = 0.0;
                for (std::uint32_t u : by_dim[i]) {
                    for (std::uint32_t v : by_dim[j]) {
                        inter_freq[test::subspace_dim(u & v)] += 1.0;
                        sum_freq[test::subspace_dim(test::subspace_sum_mask(u, v, m))] += 1.0;
                        total += 1.0;
                    }
                }
                for (int k = 0; k <= m; ++k) {
                    CHECK(std::abs(t.intersect_kernel(k)(i, j) - inter_freq[k] / total) <= 1e-10);
                    CHECK(std::abs(t.sum_kernel(k)(i, j) - sum_freq[k] / total) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("operator identities and closed binary forms") {
    auto rng = make_stream(4242);
    for (int m : {1, 2, 3, 5, 8}) {
        OperatorTables t(m);
        Density p = random_density(m, rng);
        CHECK((boxdot(p, delta_density(m, m), t) - p).abs().maxCoeff() <= 1e-12);
        CHECK((boxtimes(p, delta_density(m, 0), t) - p).abs().maxCoeff() <= 1e-12);

        Density q = random_density(m, rng);
        Density r = random_density(m, rng);
        CHECK((boxdot(p, q, t) - boxdot(q, p, t)).abs().maxCoeff() <= 1e-10);
        CHECK((boxtimes(p, q, t) - boxtimes(q, p, t)).abs().maxCoeff() <= 1e-10);
        CHECK((boxdot(boxdot(p, q, t), r, t) - boxdot(p, boxdot(q, r, t), t)).abs().maxCoeff() <= 1e-10);
        CHECK((boxtimes(boxtimes(p, q, t), r, t) - boxtimes(p, boxtimes(q, r, t), t)).abs().maxCoeff() <= 1e-10);
    }

    OperatorTables t1(1);
    const double e = 0.37;
    Density be(2);
    be << 1.0 - e, e;
    Density bd = boxdot(be, be, t1);
    CHECK(bd[0] == doctest::Approx(1.0 - e * e).epsilon(1e-12));
    CHECK(bd[1] == doctest::Approx(e * e).epsilon(1e-12));
    Density bt = boxtimes(be, be, t1);
    CHECK(bt[0] == doctest::Approx((1.0 - e) * (1.0 - e)).epsilon(1e-12));
    CHECK(bt[1] == doctest::Approx(2.0 * e - e * e).epsilon(1e-12));
}

TEST_CASE("operators agree with subspace sampling within 3 sigma") {
    auto rng = make_stream(515);
    const int m = 3;
    OperatorTables t(m);
    Density p = random_density(m, rng);
    Density q = random_density(m, rng);
    Density expect_inter = boxdot(p, q, t);
    Density expect_sum = boxtimes(p, q, t);

    const int samples = 200000;
    Eigen::ArrayXd inter_count = Eigen::ArrayXd::Zero(m + 1);
    Eigen::ArrayXd sum_count = Eigen::ArrayXd::Zero(m + 1);
    auto draw_dim = [&](const Density& d) {
        double u = uniform_unit(rng);
        for (int i = 0; i <= m; ++i) {
            u -= d[i];
            if (u <= 0.0)
                return i;
        }
        return m;
    };
    for (int s = 0; s < samples; ++s) {
        const int di = draw_dim(p);
        const int dj = draw_dim(q);
        auto a = test::sample_subspace_basis(m, di, rng);
        auto b = test::sample_subspace_basis(m, dj, rng);
        std::vector<std::uint16_t> stacked = a;
        stacked.insert(stacked.end(), b.begin(), b.end());
        const int dsum = test::gf2_rank(stacked);
        const int dinter = di + dj - dsum;
        inter_count[dinter] += 1.0;
        sum_count[dsum] += 1.0;
    }
    for (int k = 0; k <= m; ++k) {
        const double pi = expect_inter[k];
        const double ps = expect_sum[k];
        const double si = std::sqrt(samples * pi * (1 - pi));
        const double ss = std::sqrt(samples * ps * (1 - ps));
        CHECK(std::abs(inter_count[k] - samples * pi) <= 3.0 * si + 1.0);
        CHECK(std::abs(sum_count[k] - samples * ps) <= 3.0 * ss + 1.0);
    }
}

TEST_CASE("channel density") {
    CHECK((channel_density(4, 0.0) - delta_density(4, 0)).abs().maxCoeff() == 0.0);
    CHECK((channel_density(4, 1.0) - delta_density(4, 4)).abs().maxCoeff() == 0.0);
    Density b = channel_density(1, 0.3);
    CHECK(b[0] == doctest::Approx(0.7));
    CHECK(b[1] == doctest::Approx(0.3));
    Density e8 = channel_density(8, 0.5);
    for (int i = 0; i <= 8; ++i) {
        CHECK(e8[i] == doctest::Approx(e8[8 - i]).epsilon(1e-12));
    }
    CHECK(e8[0] == doctest::Approx(1.0 / 256.0).epsilon(1e-12));
    CHECK_THROWS_AS(channel_density(4, 1.5), config_error);
}

TEST_CASE("evolution matches the scalar binary recursion") {
    OperatorTables t1(1);
    struct Case {
        int T;
        int d_c;
        double eps;
    };
    for (const auto& c : {Case{1, 3, 0.40}, Case{2, 3, 0.60}, Case{1, 4, 0.30}, Case{3, 3, 0.70}}) {
        EvolveResult r = evolve(t1, c.d_c, c.T, c.eps, 120);
        double x = std::pow(c.eps, c.T);
        CHECK(r.p0_trace.front() == doctest::Approx(1.0 - x).epsilon(1e-12));
        for (std::size_t l = 1; l < r.p0_trace.size(); ++l) {
            x = test::binary_de_step(c.eps, c.T, c.d_c, x);
            CHECK(r.p0_trace[l] == doctest::Approx(1.0 - x).epsilon(1e-11));
        }
    }
}

TEST_CASE("evolution basics") {
    EvolveResult zero = evolve(3, 3, 1, 0.0);
    CHECK(zero.converged);
    CHECK(zero.iterations == 0);

    CHECK(evolve(1, 3, 1, 0.45).converged);
    CHECK_FALSE(evolve(1, 3, 1, 0.55).converged);

    EvolveResult r = evolve(4, 3, 2, 0.6, 2000);
    for (std::size_t l = 1; l < r.p0_trace.size(); ++l)
        CHECK(r.p0_trace[l] >= r.p0_trace[l - 1]);
}

TEST_CASE("threshold sanity on the binary family") {
    CHECK(threshold(1, 3, 1) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(threshold(1, 3, 2) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-4));
    CHECK(threshold(2, 3, 2) > threshold(2, 3, 1));
}
