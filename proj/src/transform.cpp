#include "vlp/transform.hpp"

#include <cmath>
#include <numbers>

namespace vlp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// roots[k][j] = exp(sign * 2 pi i j / p_k)
std::vector<std::vector<cd>> root_tables(const RadixSequence& radix, double sign) {
    std::vector<std::vector<cd>> roots(static_cast<std::size_t>(radix.levels()));
    for (int k = 0; k < radix.levels(); ++k) {
        std::int64_t pk = radix.p(k);
        auto& tab = roots[static_cast<std::size_t>(k)];
        tab.resize(static_cast<std::size_t>(pk));
        for (std::int64_t j = 0; j < pk; ++j) {
            double ang = sign * kTwoPi * static_cast<double>(j) / static_cast<double>(pk);
            tab[static_cast<std::size_t>(j)] = cd(std::cos(ang), std::sin(ang));
        }
    }
    return roots;
}

// One DFT pass along digit axis k: out[d] = sum_t in[t] * exp(sign*2pi i d t / p_k),
// applied to every line of stride atom_stride(k).
void axis_pass(std::vector<cd>& data, const RadixSequence& radix, int k,
               const std::vector<cd>& roots) {
    const std::int64_t p = radix.p(k);
    const std::int64_t stride = radix.atom_stride(k);
    const std::int64_t M = radix.total();
    const std::int64_t block = stride * p;
    std::vector<cd> buf(static_cast<std::size_t>(p));
    for (std::int64_t base = 0; base < M; base += block) {
        for (std::int64_t lo = 0; lo < stride; ++lo) {
            for (std::int64_t t = 0; t < p; ++t)
                buf[static_cast<std::size_t>(t)] =
                    data[static_cast<std::size_t>(base + t * stride + lo)];
            for (std::int64_t d = 0; d < p; ++d) {
                cd acc = 0.0;
                for (std::int64_t t = 0; t < p; ++t)
                    acc += buf[static_cast<std::size_t>(t)] *
                           roots[static_cast<std::size_t>((d * t) % p)];
                data[static_cast<std::size_t>(base + d * stride + lo)] = acc;
            }
        }
    }
}

// Frequency layout (digit n_k at stride m_k) -> atom layout (digit at
// stride atom_stride(k)).
std::int64_t to_atom_layout(const RadixSequence& radix, std::int64_t n) {
    std::int64_t out = 0;
    for (int k = 0; k < radix.levels(); ++k) {
        out += (n % radix.p(k)) * radix.atom_stride(k);
        n /= radix.p(k);
    }
    return out;
}

}  // namespace

cd rademacher(const RadixSequence& radix, int k, std::int64_t x) {
    if (k < 0 || k >= radix.levels()) throw std::domain_error("rademacher: level out of range");
    double ang = kTwoPi * static_cast<double>(radix.atom_digit(x, k)) /
                 static_cast<double>(radix.p(k));
    return cd(std::cos(ang), std::sin(ang));
}

cd vilenkin_char(const RadixSequence& radix, std::int64_t n, std::int64_t x) {
    radix.check_value(n);
    radix.check_value(x);
    double ang = 0.0;
    for (int k = 0; k < radix.levels(); ++k) {
        std::int64_t pk = radix.p(k);
        ang += static_cast<double>((radix.digit(n, k) * radix.atom_digit(x, k)) % pk) /
               static_cast<double>(pk);
    }
    ang *= kTwoPi;
    return cd(std::cos(ang), std::sin(ang));
}

Spectrum forward_naive(const GridFunction& f) {
    const RadixSequence& radix = f.radix;
    const std::int64_t M = radix.total();
    const int L = radix.levels();
    auto roots = root_tables(radix, -1.0);
    // digit tables keep the double loop at O(M^2 * levels)
    std::vector<std::vector<std::int64_t>> fdig(static_cast<std::size_t>(M)),
        adig(static_cast<std::size_t>(M));
    for (std::int64_t v = 0; v < M; ++v) {
        auto& fd = fdig[static_cast<std::size_t>(v)];
        auto& ad = adig[static_cast<std::size_t>(v)];
        fd.resize(static_cast<std::size_t>(L));
        ad.resize(static_cast<std::size_t>(L));
        for (int k = 0; k < L; ++k) {
            fd[static_cast<std::size_t>(k)] = radix.digit(v, k);
            ad[static_cast<std::size_t>(k)] = radix.atom_digit(v, k);
        }
    }
    Spectrum out(radix);
    for (std::int64_t n = 0; n < M; ++n) {
        cd acc = 0.0;
        for (std::int64_t x = 0; x < M; ++x) {
            cd w = 1.0;
            for (int k = 0; k < L; ++k) {
                std::int64_t pk = radix.p(k);
                std::int64_t e = (fdig[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] *
                                  adig[static_cast<std::size_t>(x)][static_cast<std::size_t>(k)]) %
                                 pk;
                w *= roots[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)];
            }
            acc += f.values[static_cast<std::size_t>(x)] * w;
        }
        out.coeffs[static_cast<std::size_t>(n)] = acc / static_cast<double>(M);
    }
    return out;
}

GridFunction inverse_naive(const Spectrum& s) {
    const RadixSequence& radix = s.radix;
    const std::int64_t M = radix.total();
    GridFunction out(radix);
    for (std::int64_t x = 0; x < M; ++x) {
        cd acc = 0.0;
        for (std::int64_t n = 0; n < M; ++n)
            acc += s.coeffs[static_cast<std::size_t>(n)] * vilenkin_char(radix, n, x);
        out.values[static_cast<std::size_t>(x)] = acc;
    }
    return out;
}

Spectrum forward_fast(const GridFunction& f) {
    const RadixSequence& radix = f.radix;
    const std::int64_t M = radix.total();
    auto roots = root_tables(radix, -1.0);
    std::vector<cd> work = f.values;
    for (int k = 0; k < radix.levels(); ++k)
        axis_pass(work, radix, k, roots[static_cast<std::size_t>(k)]);
    Spectrum out(radix);
    for (std::int64_t n = 0; n < M; ++n)
        out.coeffs[static_cast<std::size_t>(n)] =
            work[static_cast<std::size_t>(to_atom_layout(radix, n))] / static_cast<double>(M);
    return out;
}

GridFunction inverse_fast(const Spectrum& s) {
    const RadixSequence& radix = s.radix;
    const std::int64_t M = radix.total();
    auto roots = root_tables(radix, 1.0);
    std::vector<cd> work(static_cast<std::size_t>(M));
    for (std::int64_t n = 0; n < M; ++n)
        work[static_cast<std::size_t>(to_atom_layout(radix, n))] =
            s.coeffs[static_cast<std::size_t>(n)];
    for (int k = 0; k < radix.levels(); ++k)
        axis_pass(work, radix, k, roots[static_cast<std::size_t>(k)]);
    return GridFunction(radix, std::move(work));
}

}  // namespace vlp
