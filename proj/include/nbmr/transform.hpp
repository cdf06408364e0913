#pragma once

#include <Eigen/Core>

namespace nbmr {

/// BP message / symbol posterior: 2^m non-negative reals indexed by symbol
/// value, summing to 1 after any normalization point.
using ProbVec = Eigen::ArrayXd;

// In-place Walsh-Hadamard transform, unnormalized: applying it twice yields
// the input scaled by the length. Length must be a power of two.
void wht_inplace(Eigen::Ref<Eigen::ArrayXd> a);

// Convolution under the additive (XOR) group of GF(2^m): transform both,
// multiply pointwise, transform back.
ProbVec xor_convolve(const ProbVec& p1, const ProbVec& p2);

// Scales v to unit sum. Returns false and leaves v uniform when the sum is
// nonpositive or not finite.
bool normalize(Eigen::Ref<Eigen::ArrayXd> v);

} // namespace nbmr
