#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vlp {

/// Half-open interval [a, b) of nonnegative integers (frequencies).
struct IntervalZ {
    std::int64_t a = 0;
    std::int64_t b = 0;

    IntervalZ() = default;
    IntervalZ(std::int64_t a_, std::int64_t b_) : a(a_), b(b_) {
        if (a_ < 0 || a_ > b_) throw std::domain_error("IntervalZ: need 0 <= a <= b");
    }
    std::int64_t length() const { return b - a; }
    bool empty() const { return a == b; }
    bool contains(std::int64_t n) const { return a <= n && n < b; }
    bool operator==(const IntervalZ&) const = default;
};

/// The sequence {p_j} together with its cumulative products m_k
/// (m_0 = 1, m_{k+1} = m_k * p_k).  Fixes the group prod Z_{p_j} and the
/// grid size M = m_{N+1}.
///
/// Two digit frames are used throughout and they run in opposite
/// directions:
///   - a frequency n < M has mixed-radix digits n = sum_j n_j m_j
///     (digit 0 is the least significant);
///   - an atom x < M (the segment [x/M, (x+1)/M)) has subdivision digits
///     a_j with stride M/m_{j+1}, so digit 0 is the coarsest subdivision
///     of [0,1].
/// Mixing the two frames up breaks every identity downstream, so all
/// digit access goes through this class.
class RadixSequence {
  public:
    explicit RadixSequence(std::vector<std::int64_t> p);

    /// Number of digits N+1.
    int levels() const { return static_cast<int>(p_.size()); }
    std::int64_t p(int k) const { return p_.at(static_cast<std::size_t>(k)); }
    /// m_k for 0 <= k <= levels().
    std::int64_t m(int k) const { return m_.at(static_cast<std::size_t>(k)); }
    /// Total grid size M.
    std::int64_t total() const { return m_.back(); }

    /// Mixed-radix digit n_k of a frequency.
    std::int64_t digit(std::int64_t n, int k) const {
        check_value(n);
        return (n / m(k)) % p(k);
    }
    /// Subdivision digit a_k of an atom index.
    std::int64_t atom_digit(std::int64_t x, int k) const {
        check_value(x);
        return (x / atom_stride(k)) % p(k);
    }
    /// Number of finest atoms in one level-(k+1) cell, M / m_{k+1}.
    std::int64_t atom_stride(int k) const { return total() / m(k + 1); }
    /// Number of finest atoms in one F_k atom, M / m_k.
    std::int64_t block(int k) const { return total() / m(k); }

    void check_value(std::int64_t n) const {
        if (n < 0 || n >= total()) throw std::domain_error("value out of [0, M)");
    }

    bool operator==(const RadixSequence&) const = default;

  private:
    std::vector<std::int64_t> p_;
    std::vector<std::int64_t> m_;
};

/// Digit vector of a frequency, least significant first, padded with
/// zeros to the full length N+1.
struct Digits {
    std::vector<std::int64_t> d;
};

Digits to_digits(std::int64_t n, const RadixSequence& radix);
std::int64_t from_digits(const Digits& digits, const RadixSequence& radix);

/// Digit-wise addition mod p_j (the group operation of prod Z_{p_j}).
std::int64_t dotplus(std::int64_t a, std::int64_t b, const RadixSequence& radix);
/// Inverse with respect to dotplus.
std::int64_t dotminus(std::int64_t n, const RadixSequence& radix);

}  // namespace vlp
