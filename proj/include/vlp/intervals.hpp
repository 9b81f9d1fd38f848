#pragma once

#include <map>
#include <optional>
#include <vector>

#include "vlp/radix.hpp"

namespace vlp {

/// One template piece of the combinatorial decomposition: the digit at
/// `level` ranges over [lo_digit, hi_digit] (closed), digits above are
/// frozen, digits below are free.
struct PieceTemplate {
    int level = 0;
    std::int64_t lo_digit = 0;
    std::int64_t hi_digit = 0;
    std::int64_t frozen = 0;  // contribution of the frozen digits above `level`
    IntervalZ iv;
};

/// Decomposition of [a, b) into {a}, the J_j pieces (digit j in
/// [0, beta_j), higher digits frozen at beta), the J~_j pieces (digit j
/// in [alpha_j+1, p_j-1], higher digits frozen at alpha) and the tail
/// piece J~_t (digit t in [alpha_t+1, beta_t-1]).
struct DecompositionPieces {
    std::int64_t a = 0;
    int t = 0;  // branching level; may equal levels() when b == M
    std::vector<PieceTemplate> J;
    std::vector<PieceTemplate> Jt;
    std::optional<PieceTemplate> Jtail;

    std::vector<IntervalZ> all_intervals() const;  // singleton first, then pieces
};

DecompositionPieces decompose(std::int64_t a, std::int64_t b, const RadixSequence& radix);

/// A digit range [alpha, beta] at a fixed level with a fixed frozen tail.
struct DigitRange {
    std::int64_t alpha = 0;
    std::int64_t beta = 0;
    IntervalZ iv;
};

struct TailKey {
    int level = 0;
    std::int64_t kappa = 0;
    auto operator<=>(const TailKey&) const = default;
};

/// Group the J~-shaped pieces of a disjoint family by (level t, frozen
/// tail kappa).  Within each group the digit ranges must be pairwise
/// disjoint; an overlap means the input intervals were not disjoint.
std::map<TailKey, std::vector<DigitRange>> reindex(
    const std::vector<DecompositionPieces>& family);

/// Real subinterval of the line with open/closed endpoint flags.
struct RealInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_lo = true;
    bool closed_hi = true;

    double length() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !closed_lo) return false;
        if (x == hi && !closed_hi) return false;
        return true;
    }
    /// Interval with the same center and c times the length.
    RealInterval dilate(double c) const {
        double h = 0.5 * c * length();
        return {center() - h, center() + h, closed_lo, closed_hi};
    }
};

/// Whitney decomposition of iv, affine image of the family
/// {[2^{-(k+1)}/3, 2^{-k}/3]}, [1/3, 2/3], {[1-2^{-k}/3, 1-2^{-(k+1)}/3]}.
/// Dyadic members shorter than min_len are not emitted (the family is
/// infinite; only members long enough to catch a lattice point matter).
/// Members are returned in ascending position order.
std::vector<RealInterval> whitney(const RealInterval& iv, double min_len);

/// Widened interval ((alpha - 1/2)/p_t, (beta + 1/2)/p_t), open.
RealInterval widen(std::int64_t p_t, std::int64_t alpha, std::int64_t beta);

/// Contiguous range of digits j in [0, p) with j/p in iv; empty (first >
/// second) when no lattice point falls inside.
std::pair<std::int64_t, std::int64_t> lattice_digits(const RealInterval& iv, std::int64_t p);

/// Frequencies whose level-t digit j satisfies j/p_t in iv, digits above
/// t frozen at kappa, digits below free.  Empty interval when iv holds
/// no lattice point.
IntervalZ transfer_back(const RealInterval& iv, int t, std::int64_t kappa,
                        const RadixSequence& radix);

/// Seven consecutive equal-length pieces of iv.
std::vector<RealInterval> split7(const RealInterval& iv);

/// Smooth cutoff: even, exactly 1 on [-2, 2], exactly 0 outside
/// [-2.01, 2.01], C-infinity monotone on the two collars.
double phi(double x);

/// Whitney refinement of one digit range: widen, decompose, transfer
/// every member back and drop duplicates at shared member endpoints so
/// the emitted pieces are disjoint and tile [alpha, beta] exactly.
struct RefinedPiece {
    std::int64_t jlo = 0;
    std::int64_t jhi = 0;
    IntervalZ iv;
    RealInterval real;
};
std::vector<RefinedPiece> refine_digit_range(const RadixSequence& radix, int t,
                                             std::int64_t kappa, std::int64_t alpha,
                                             std::int64_t beta);

/// Full smooth-cover pipeline for one digit range: refinement, 7-way
/// split, lattice filtering.  Pieces keeping a single lattice point go
/// to the Plancherel bucket (single = true, r/n_ref unset); the others
/// carry the dyadic scale r >= 0 with 2^r/p <= |real| < 2^{r+1}/p and
/// the least positive n_ref with 2^r n_ref / p_t inside.
struct CoverPiece {
    std::int64_t jlo = 0;
    std::int64_t jhi = 0;
    IntervalZ iv;
    RealInterval real;
    bool single = false;
    int r = 0;
    std::int64_t n_ref = 0;
};
std::vector<CoverPiece> smooth_cover(const RadixSequence& radix, int t, std::int64_t kappa,
                                     std::int64_t alpha, std::int64_t beta);

}  // namespace vlp
