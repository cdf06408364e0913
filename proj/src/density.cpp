#include "nbmr/density.hpp"

#include "nbmr/errors.hpp"

#include <cmath>
#include <string>

namespace nbmr {

double gaussian_binomial(int m, int k) {
    if (k < 0 || k > m)
        return 0.0;
    double p = 1.0;
    for (int l = 0; l < k; ++l)
        p *= (std::exp2(m) - std::exp2(l)) / (std::exp2(k) - std::exp2(l));
    return p;
}

namespace {

double log2_gaussian_binomial(int m, int k) {
    double s = 0.0;
    for (int l = 0; l < k; ++l)
        s += std::log2(std::exp2(m) - std::exp2(l)) - std::log2(std::exp2(k) - std::exp2(l));
    return s;
}

// The boxtimes squaring in evolve() compounds any mass deficit doubly
// exponentially, so densities are clamped and renormalized after every
// operator application.
Density clamp_normalize(Density d) {
    d = d.max(0.0);
    const double s = d.sum();
    if (s > 0.0)
        d /= s;
    return d;
}

} // namespace

OperatorTables::OperatorTables(int m) : m_(m) {
    if (m < 1 || m > 10)
        throw config_error("operator tables need m in [1, 10], got " + std::to_string(m));
    c_intersect_.assign(static_cast<std::size_t>(m + 1), Eigen::MatrixXd::Zero(m + 1, m + 1));
    c_sum_.assign(static_cast<std::size_t>(m + 1), Eigen::MatrixXd::Zero(m + 1, m + 1));
    for (int k = 0; k <= m; ++k) {
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                if (i >= k && j >= k && j <= k + m - i) {
                    const double lg = static_cast<double>((i - k) * (j - k)) +
                                      log2_gaussian_binomial(i, k) +
                                      log2_gaussian_binomial(m - i, j - k) -
                                      log2_gaussian_binomial(m, j);
                    c_intersect_[static_cast<std::size_t>(k)](i, j) = std::exp2(lg);
                }
                if (i <= k && j <= k && j >= k - i) {
                    const double lg = static_cast<double>((k - i) * (k - j)) +
                                      log2_gaussian_binomial(m - i, m - k) +
                                      log2_gaussian_binomial(i, k - j) -
                                      log2_gaussian_binomial(m, m - j);
                    c_sum_[static_cast<std::size_t>(k)](i, j) = std::exp2(lg);
                }
            }
        }
    }
}

Density boxdot(const Density& p, const Density& q, const OperatorTables& t) {
    Density out(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k)
        out[k] = p.matrix().dot(t.intersect_kernel(static_cast<int>(k)) * q.matrix());
    return clamp_normalize(std::move(out));
}

Density boxtimes(const Density& p, const Density& q, const OperatorTables& t) {
    Density out(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k)
        out[k] = p.matrix().dot(t.sum_kernel(static_cast<int>(k)) * q.matrix());
    return clamp_normalize(std::move(out));
}

Density channel_density(int m, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw config_error("erasure probability must be in [0, 1]");
    Density e(m + 1);
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        e[i] = binom * std::pow(epsilon, i) * std::pow(1.0 - epsilon, m - i);
        binom *= static_cast<double>(m - i) / static_cast<double>(i + 1);
    }
    return clamp_normalize(std::move(e));
}

Density delta_density(int m, int dim) {
    Density d = Density::Zero(m + 1);
    d[dim] = 1.0;
    return d;
}

EvolveResult evolve(const OperatorTables& tables, int d_c, int T, double epsilon,
                    int max_iter, double delta) {
    if (d_c < 2 || T < 1)
        throw config_error("density evolution needs d_c >= 2 and T >= 1");
    const int m = tables.m();
    const Density e = channel_density(m, epsilon);
    Density p_init = e;
    for (int t = 1; t < T; ++t)
        p_init = boxdot(p_init, e, tables);

    EvolveResult res;
    Density p = p_init;
    res.p0_trace.push_back(p[0]);
    for (int it = 0; it < max_iter; ++it) {
        if (1.0 - p[0] < delta) {
            res.converged = true;
            res.iterations = it;
            return res;
        }
        Density q = p;
        for (int d = 0; d < d_c - 2; ++d)
            q = boxtimes(q, p, tables);
        Density next = boxdot(p_init, q, tables);
        // P_0 is monotone non-decreasing; guard the trace against rounding.
        next[0] = std::max(next[0], p[0]);
        const double step = (next - p).abs().maxCoeff();
        p = next;
        res.p0_trace.push_back(p[0]);
        res.iterations = it + 1;
        if (step < kDeStallTol)
            break; // numerical fixed point; classify by current mass
    }
    res.converged = 1.0 - p[0] < delta;
    return res;
}

EvolveResult evolve(int m, int d_c, int T, double epsilon, int max_iter, double delta) {
    return evolve(OperatorTables(m), d_c, T, epsilon, max_iter, delta);
}

double threshold(int m, int d_c, int T, double bisect_tol) {
    if (!(bisect_tol > 0.0))
        throw config_error("bisection tolerance must be positive");
    const OperatorTables tables(m);
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        if (evolve(tables, d_c, T, mid).converged)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace nbmr
