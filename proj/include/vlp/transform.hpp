#pragma once

#include "vlp/grid.hpp"

namespace vlp {

/// Generalized Rademacher function r_k evaluated on atom x:
/// exp(2 pi i a_k / p_k) where a_k is the k-th subdivision digit of x.
cd rademacher(const RadixSequence& radix, int k, std::int64_t x);

/// Vilenkin character w_n on atom x, the product of r_k^{n_k}.
cd vilenkin_char(const RadixSequence& radix, std::int64_t n, std::int64_t x);

/// Reference transform pair, O(M^2):
///   fhat(n) = (1/M) sum_x f(x) conj(w_n(x)),   g(x) = sum_n s(n) w_n(x).
Spectrum forward_naive(const GridFunction& f);
GridFunction inverse_naive(const Spectrum& s);

/// Fast transform pair, O(M * sum p_j).
///
/// The group is a direct product, so the transform factorizes into
/// independent length-p_j DFTs along each digit axis with NO twiddle
/// factors.  This is not the cyclic mixed-radix FFT of Z_M, which would
/// insert twiddles and compute a different transform.  Each axis DFT is
/// a direct summation in ascending index order, so results are
/// bit-stable run to run.
Spectrum forward_fast(const GridFunction& f);
GridFunction inverse_fast(const Spectrum& s);

inline GridFunction inverse(const Spectrum& s) { return inverse_fast(s); }

}  // namespace vlp
