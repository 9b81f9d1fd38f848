#include "vlp/radix.hpp"

namespace vlp {

RadixSequence::RadixSequence(std::vector<std::int64_t> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("RadixSequence: empty sequence");
    m_.reserve(p_.size() + 1);
    m_.push_back(1);
    for (std::int64_t pj : p_) {
        if (pj < 2) throw std::invalid_argument("RadixSequence: every p_j must be >= 2");
        std::int64_t next = 0;
        if (__builtin_mul_overflow(m_.back(), pj, &next))
            throw std::overflow_error("RadixSequence: product of p_j overflows int64");
        m_.push_back(next);
    }
}

Digits to_digits(std::int64_t n, const RadixSequence& radix) {
    radix.check_value(n);
    Digits out;
    out.d.resize(static_cast<std::size_t>(radix.levels()));
    for (int k = 0; k < radix.levels(); ++k) {
        out.d[static_cast<std::size_t>(k)] = n % radix.p(k);
        n /= radix.p(k);
    }
    return out;
}

std::int64_t from_digits(const Digits& digits, const RadixSequence& radix) {
    if (digits.d.size() != static_cast<std::size_t>(radix.levels()))
        throw std::domain_error("from_digits: wrong digit count");
    std::int64_t n = 0;
    for (int k = 0; k < radix.levels(); ++k) {
        std::int64_t dk = digits.d[static_cast<std::size_t>(k)];
        if (dk < 0 || dk >= radix.p(k)) throw std::domain_error("from_digits: digit out of range");
        n += dk * radix.m(k);
    }
    return n;
}

std::int64_t dotplus(std::int64_t a, std::int64_t b, const RadixSequence& radix) {
    radix.check_value(a);
    radix.check_value(b);
    std::int64_t out = 0;
    for (int k = 0; k < radix.levels(); ++k) {
        std::int64_t pk = radix.p(k);
        out += ((a % pk + b % pk) % pk) * radix.m(k);
        a /= pk;
        b /= pk;
    }
    return out;
}

std::int64_t dotminus(std::int64_t n, const RadixSequence& radix) {
    radix.check_value(n);
    std::int64_t out = 0;
    for (int k = 0; k < radix.levels(); ++k) {
        std::int64_t pk = radix.p(k);
        out += ((pk - n % pk) % pk) * radix.m(k);
        n /= pk;
    }
    return out;
}

}  // namespace vlp
