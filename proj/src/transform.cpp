#include "nbmr/transform.hpp"

#include <cassert>
#include <cmath>

namespace nbmr {

void wht_inplace(Eigen::Ref<Eigen::ArrayXd> a) {
    const Eigen::Index n = a.size();
    assert((n & (n - 1)) == 0 && n > 0);
    double* d = a.data();
    for (Eigen::Index h = 1; h < n; h <<= 1) {
        for (Eigen::Index i = 0; i < n; i += h << 1) {
            for (Eigen::Index j = i; j < i + h; ++j) {
                const double u = d[j];
                const double v = d[j + h];
                d[j] = u + v;
                d[j + h] = u - v;
            }
        }
    }
}

ProbVec xor_convolve(const ProbVec& p1, const ProbVec& p2) {
    ProbVec a = p1;
    ProbVec b = p2;
    wht_inplace(a);
    wht_inplace(b);
    a *= b;
    wht_inplace(a);
    a /= static_cast<double>(p1.size());
    return a;
}

bool normalize(Eigen::Ref<Eigen::ArrayXd> v) {
    const double s = v.sum();
    if (!(s > 0.0) || !std::isfinite(s)) {
        v.setConstant(1.0 / static_cast<double>(v.size()));
        return false;
    }
    v /= s;
    return true;
}

} // namespace nbmr
