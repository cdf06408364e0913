#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <vector>

namespace nbmr {

/// Density-evolution state: probability vector of length m+1 whose entry i is
/// the probability that a message's support forms a linear subspace of
/// GF(2)^m of dimension i.
using Density = Eigen::ArrayXd;

// Number of k-dimensional subspaces of GF(2)^m (2-Gaussian binomial).
// Returns 0 for k < 0 or k > m.
double gaussian_binomial(int m, int k);

/// Kernels of the subspace-intersection (boxdot) and subspace-sum (boxtimes)
/// operators: one (m+1)x(m+1) matrix per output dimension k, indexed (i, j)
/// by the operand dimensions. Rows of each conditional kernel over k sum to 1.
/// Entries are computed from log-domain Gaussian binomials so m=10 stays well
/// inside double range.
class OperatorTables {
public:
    explicit OperatorTables(int m);

    int m() const { return m_; }
    const Eigen::MatrixXd& intersect_kernel(int k) const { return c_intersect_[static_cast<std::size_t>(k)]; }
    const Eigen::MatrixXd& sum_kernel(int k) const { return c_sum_[static_cast<std::size_t>(k)]; }

private:
    int m_;
    std::vector<Eigen::MatrixXd> c_intersect_;
    std::vector<Eigen::MatrixXd> c_sum_;
};

// [P boxdot Q]_k = sum_ij C_boxdot(m,k,i,j) P_i Q_j  (variable-side combine,
// intersection of supports; identity element is the point mass at dimension m).
Density boxdot(const Density& p, const Density& q, const OperatorTables& t);

// [P boxtimes Q]_k, sum-of-subspaces semantics (check-side combine; identity
// is the point mass at dimension 0).
Density boxtimes(const Density& p, const Density& q, const OperatorTables& t);

// Binomial channel density of the BEC on m-bit symbols.
Density channel_density(int m, double epsilon);

// Point mass at dimension `dim`.
Density delta_density(int m, int dim);

inline constexpr int kDeMaxIterations = 300000;
inline constexpr double kDeDelta = 1e-9;
inline constexpr double kDeStallTol = 1e-15;
inline constexpr double kBisectTol = 1e-5;

struct EvolveResult {
    bool converged = false;
    int iterations = 0;
    std::vector<double> p0_trace; // P_0 after each update, monotone non-decreasing
};

// Fixed-point iteration of the (2, d_c)-regular update with T-fold repeated
// channel density: P(0) = E boxdot ... boxdot E, Q = P^{boxtimes(d_c-1)},
// P <- P(0) boxdot Q. Converged when 1 - P_0 < delta; iteration also stops at
// a numerical fixed point (step < kDeStallTol).
EvolveResult evolve(const OperatorTables& tables, int d_c, int T, double epsilon,
                    int max_iter = kDeMaxIterations, double delta = kDeDelta);
EvolveResult evolve(int m, int d_c, int T, double epsilon,
                    int max_iter = kDeMaxIterations, double delta = kDeDelta);

// BEC threshold of the (2, d_c) ensemble with repetition parameter T:
// bisection of evolve() over epsilon in [0, 1], midpoint of the final bracket.
double threshold(int m, int d_c, int T, double bisect_tol = kBisectTol);

} // namespace nbmr
