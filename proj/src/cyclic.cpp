#include "vlp/cyclic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "vlp/intervals.hpp"

namespace vlp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cd unit(double ang) { return cd(std::cos(ang), std::sin(ang)); }

std::int64_t mod_p(std::int64_t a, std::int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}

// psi_r on the integers mod p, cached per (p, r)
const std::vector<cd>& psi_table(std::int64_t p, int r) {
    static std::map<std::pair<std::int64_t, int>, std::vector<cd>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, fresh] = cache.try_emplace({p, r});
    if (fresh) {
        KernelSpec spec{p, r, 1};
        auto& tab = it->second;
        tab.resize(static_cast<std::size_t>(p));
        for (std::int64_t t = 0; t < p; ++t)
            tab[static_cast<std::size_t>(t)] = psi_r(static_cast<double>(t), spec);
    }
    return it->second;
}

}  // namespace

std::int64_t dist_p(std::int64_t a, std::int64_t b, std::int64_t p) {
    if (p < 2) throw std::domain_error("dist_p: p must be >= 2");
    std::int64_t c = mod_p(a - b, p);
    if (2 * c > p) c -= p;
    return std::llabs(c);
}

std::vector<std::int64_t> annulus(std::int64_t x, std::int64_t z, int k, std::int64_t p) {
    if (k < 0) throw std::domain_error("annulus: k must be >= 0");
    std::int64_t d = dist_p(x, z, p);
    if (d == 0) throw std::domain_error("annulus: x == z");
    std::vector<std::int64_t> out;
    if (k >= 62) return out;
    std::int64_t lo = d << k;
    if (lo > p) return out;
    std::int64_t hi = lo * 2;
    for (std::int64_t y = 0; y < p; ++y) {
        std::int64_t dy = dist_p(y, z, p);
        if (dy > lo && dy <= hi) out.push_back(y);
    }
    return out;
}

cd cot_partial_sum(std::int64_t p, std::int64_t alpha, std::int64_t t) {
    if (p < 2) throw std::domain_error("cot_partial_sum: p must be >= 2");
    if (alpha < 0 || alpha >= p) throw std::domain_error("cot_partial_sum: need 0 <= alpha < p");
    if (t % p == 0) throw std::domain_error("cot_partial_sum: p divides t (cot pole)");
    double arg = std::numbers::pi * static_cast<double>(t) / static_cast<double>(p);
    double c = std::cos(arg) / std::sin(arg);
    cd e = unit(-kTwoPi * static_cast<double>(mod_p(alpha * t, p)) / static_cast<double>(p));
    return 0.5 * e - 0.5 + cd(0, 0.5) * e * c - cd(0, 0.5) * c;
}

cd hilbert_cot(const std::vector<cd>& atom_integrals, std::int64_t m, std::int64_t t,
               std::int64_t p, double scale) {
    if (p < 2) throw std::domain_error("hilbert_cot: p must be >= 2");
    const auto len = static_cast<std::int64_t>(atom_integrals.size());
    if (len < 1 || m < 0 || m + len > p) throw std::domain_error("hilbert_cot: bad arc");
    if (t < 0 || t >= p) throw std::domain_error("hilbert_cot: target out of Z_p");
    if (t >= m && t < m + len) throw std::domain_error("hilbert_cot: target inside the arc");
    cd acc = 0.0;
    for (std::int64_t j = 0; j < len; ++j) {
        double arg = std::numbers::pi * static_cast<double>(t - (m + j)) / static_cast<double>(p);
        acc += atom_integrals[static_cast<std::size_t>(j)] * (std::cos(arg) / std::sin(arg));
    }
    return scale * acc;
}

void validate(const KernelSpec& spec) {
    if (spec.p < 2) throw std::domain_error("KernelSpec: p must be >= 2");
    if (spec.r < 0 || std::ldexp(1.0, spec.r) > static_cast<double>(spec.p))
        throw std::domain_error("KernelSpec: need 0 <= r with 2^r <= p");
    double band = static_cast<double>(spec.p) / std::ldexp(1.0, spec.r);
    if (spec.n_ref <= 0 || static_cast<double>(spec.n_ref) >= band)
        throw std::domain_error("KernelSpec: need 0 < n_ref < p / 2^r");
}

cd psi_r(double t, const KernelSpec& spec) {
    if (spec.r < 0) throw std::domain_error("psi_r: r must be >= 0");
    double scale = std::ldexp(1.0, spec.r);
    auto L = static_cast<std::int64_t>(std::ceil(2.01 * scale));
    cd acc = 0.0;
    for (std::int64_t l = -L; l <= L; ++l) {
        double weight = phi(static_cast<double>(l) / scale);
        if (weight == 0.0) continue;
        acc += weight * unit(kTwoPi * static_cast<double>(l) * t / static_cast<double>(spec.p));
    }
    return acc;
}

cd psi_periodic(std::int64_t p, int r, std::int64_t t) {
    if (p < 2 || r < 0) throw std::domain_error("psi_periodic: bad parameters");
    return psi_table(p, r)[static_cast<std::size_t>(mod_p(t, p))];
}

cd kernel(const KernelSpec& spec, std::int64_t n, std::int64_t m) {
    validate(spec);
    double step = std::ldexp(1.0, spec.r);
    cd mod = unit(-kTwoPi * step * static_cast<double>(spec.n_ref) * static_cast<double>(m) /
                  static_cast<double>(spec.p));
    return mod * psi_r(static_cast<double>(n - m), spec) / static_cast<double>(spec.p);
}

CyclicFunction kernel_apply(const KernelSpec& spec, const CyclicFunction& g) {
    validate(spec);
    if (g.p != spec.p) throw std::invalid_argument("kernel_apply: modulus mismatch");
    const auto& psi = psi_table(spec.p, spec.r);
    double step = std::ldexp(1.0, spec.r);
    CyclicFunction out(spec.p);
    for (std::int64_t n = 0; n < spec.p; ++n) {
        cd acc = 0.0;
        for (std::int64_t m = 0; m < spec.p; ++m) {
            cd mod = unit(-kTwoPi * step * static_cast<double>(spec.n_ref) *
                          static_cast<double>(m) / static_cast<double>(spec.p));
            acc += mod * psi[static_cast<std::size_t>(mod_p(n - m, spec.p))] *
                   g.values[static_cast<std::size_t>(m)];
        }
        out.values[static_cast<std::size_t>(n)] = acc / static_cast<double>(spec.p);
    }
    return out;
}

Lemma4Result lemma4_check(std::int64_t x, std::int64_t z, int k, const std::vector<cd>& lambda,
                          const std::vector<KernelSpec>& specs) {
    if (lambda.size() != specs.size())
        throw std::invalid_argument("lemma4_check: coefficient/spec mismatch");
    if (specs.empty()) throw std::invalid_argument("lemma4_check: empty kernel family");
    const std::int64_t p = specs.front().p;
    for (const KernelSpec& spec : specs) {
        validate(spec);
        if (spec.p != p) throw std::invalid_argument("lemma4_check: mixed moduli");
    }
    const std::int64_t d = dist_p(x, z, p);
    if (d == 0) throw std::domain_error("lemma4_check: x == z");

    double sum2 = 0.0;
    for (const cd& l : lambda) sum2 += std::norm(l);

    double lhs = 0.0;
    for (std::int64_t y : annulus(x, z, k, p)) {
        cd acc = 0.0;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const KernelSpec& spec = specs[i];
            const auto& psi = psi_table(p, spec.r);
            double step = std::ldexp(1.0, spec.r);
            cd mod = unit(-kTwoPi * step * static_cast<double>(spec.n_ref) *
                          static_cast<double>(y) / static_cast<double>(p));
            cd diff = psi[static_cast<std::size_t>(mod_p(z - y, p))] -
                      psi[static_cast<std::size_t>(mod_p(x - y, p))];
            acc += lambda[i] * mod * diff / static_cast<double>(p);
        }
        lhs += std::norm(acc);
    }
    double scale = std::pow(2.0, -5.0 * static_cast<double>(k) / 3.0) * sum2 /
                   static_cast<double>(d);
    return {lhs, scale};
}

double geometric_window_modulus(std::int64_t p, int r, std::int64_t q) {
    if (p < 2 || r < 0) throw std::domain_error("geometric_window_modulus: bad parameters");
    auto g = static_cast<std::int64_t>(static_cast<double>(p) / std::ldexp(1.0, r));
    double step = std::ldexp(1.0, r);
    cd acc = 0.0;
    for (std::int64_t y = 0; y < g; ++y)
        acc += unit(kTwoPi * step * static_cast<double>(q) * static_cast<double>(y) /
                    static_cast<double>(p));
    return std::abs(acc);
}

ExpSumResult expsum_bound_check(std::int64_t p, int r, std::int64_t a, std::int64_t b,
                                const std::vector<std::int64_t>& js,
                                const std::vector<cd>& lambda) {
    if (js.size() != lambda.size())
        throw std::invalid_argument("expsum_bound_check: frequency/coefficient mismatch");
    double step = std::ldexp(1.0, r);
    auto window = static_cast<std::int64_t>(static_cast<double>(p) / step);
    if (b - a + 1 != window) throw std::domain_error("expsum_bound_check: wrong window length");
    double half_band = static_cast<double>(p) / (2.0 * step);
    bool low = true, high = true;
    for (std::int64_t j : js) {
        if (j <= 0 || static_cast<double>(j) >= static_cast<double>(p) / step)
            throw std::domain_error("expsum_bound_check: frequency out of (0, p/2^r)");
        low = low && static_cast<double>(j) <= half_band;
        high = high && static_cast<double>(j) > half_band;
    }
    if (!low && !high)
        throw std::domain_error("expsum_bound_check: frequencies must sit in one band");

    double lhs = 0.0;
    for (std::int64_t y = a; y <= b; ++y) {
        cd acc = 0.0;
        for (std::size_t i = 0; i < js.size(); ++i)
            acc += lambda[i] * unit(-kTwoPi * step * static_cast<double>(js[i]) *
                                    static_cast<double>(y) / static_cast<double>(p));
        lhs += std::norm(acc);
    }
    double sum2 = 0.0;
    for (const cd& l : lambda) sum2 += std::norm(l);
    return {lhs, half_band * sum2};
}

CyclicFunction cyclic_forward(const CyclicFunction& h) {
    CyclicFunction out(h.p);
    for (std::int64_t j = 0; j < h.p; ++j) {
        cd acc = 0.0;
        for (std::int64_t l = 0; l < h.p; ++l)
            acc += h.values[static_cast<std::size_t>(l)] *
                   unit(-kTwoPi * static_cast<double>(j) * static_cast<double>(l) /
                        static_cast<double>(h.p));
        out.values[static_cast<std::size_t>(j)] = acc / static_cast<double>(h.p);
    }
    return out;
}

CyclicFunction arc_projector(const CyclicFunction& h, const Arc& I) {
    if (I.len < 0 || I.len > h.p || I.start < 0 || I.start >= h.p)
        throw std::domain_error("arc_projector: bad arc");
    CyclicFunction spec = cyclic_forward(h);
    CyclicFunction out(h.p);
    for (std::int64_t i = 0; i < I.len; ++i) {
        std::int64_t j = (I.start + i) % h.p;
        for (std::int64_t l = 0; l < h.p; ++l)
            out.values[static_cast<std::size_t>(l)] +=
                spec.values[static_cast<std::size_t>(j)] *
                unit(kTwoPi * static_cast<double>(j) * static_cast<double>(l) /
                     static_cast<double>(h.p));
    }
    return out;
}

double a2_constant_zp(const std::vector<double>& v) {
    const auto p = static_cast<std::int64_t>(v.size());
    if (p < 2) throw std::domain_error("a2_constant_zp: need p >= 2");
    for (double val : v)
        if (!(val > 0.0)) throw std::domain_error("a2_constant_zp: weight must be positive");
    double sup = 0.0;
    for (std::int64_t start = 0; start < p; ++start) {
        double sv = 0.0, si = 0.0;
        for (std::int64_t len = 1; len <= p; ++len) {
            auto idx = static_cast<std::size_t>((start + len - 1) % p);
            sv += v[idx];
            si += 1.0 / v[idx];
            double n = static_cast<double>(len);
            sup = std::max(sup, (sv / n) * (si / n));
        }
    }
    return sup;
}

WeightedLpResult weighted_lp_experiment(std::int64_t p, double rho,
                                        const std::vector<double>& v, const CyclicFunction& h) {
    if (h.p != p || static_cast<std::int64_t>(v.size()) != p)
        throw std::invalid_argument("weighted_lp_experiment: shape mismatch");
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::domain_error("weighted_lp_experiment: lacunary spec needs 0 <= rho < 1");
    for (double val : v)
        if (!(val > 0.0)) throw std::domain_error("weighted_lp_experiment: weight must be positive");

    // strict lattice bounds for an open interval endpoint
    auto first_above = [](double x) {
        double r = std::round(x);
        if (std::fabs(x - r) < 1e-9) return static_cast<std::int64_t>(r) + 1;
        return static_cast<std::int64_t>(std::ceil(x));
    };
    auto last_below = [](double x) {
        double r = std::round(x);
        if (std::fabs(x - r) < 1e-9) return static_cast<std::int64_t>(r) - 1;
        return static_cast<std::int64_t>(std::floor(x));
    };

    CyclicFunction spec = cyclic_forward(h);
    WeightedLpResult out;
    for (int s = 0; s < 63; ++s) {
        double lo = std::ldexp(1.0, -(s + 1));
        double hi = std::min(std::ldexp(1.0, -s) * (1.0 + rho), 1.0);
        if (hi * static_cast<double>(p) <= 1.0) break;  // no lattice point from here on
        std::int64_t jlo = std::max<std::int64_t>(first_above(lo * static_cast<double>(p)), 1);
        std::int64_t jhi = std::min<std::int64_t>(last_below(hi * static_cast<double>(p)), p - 1);
        if (jlo > jhi) continue;
        ++out.arc_count;
        // P_{I_s} h restricted energy, weighted
        for (std::int64_t l = 0; l < p; ++l) {
            cd acc = 0.0;
            for (std::int64_t j = jlo; j <= jhi; ++j)
                acc += spec.values[static_cast<std::size_t>(j)] *
                       unit(kTwoPi * static_cast<double>(j) * static_cast<double>(l) /
                            static_cast<double>(p));
            out.lhs += std::norm(acc) * v[static_cast<std::size_t>(l)];
        }
    }
    for (std::int64_t l = 0; l < p; ++l)
        out.rhs += std::norm(h.values[static_cast<std::size_t>(l)]) * v[static_cast<std::size_t>(l)];
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

double poisson_kernel(double theta, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("poisson_kernel: delta must be positive");
    double q = std::exp(-delta);
    return (1.0 - q * q) / (1.0 - 2.0 * q * std::cos(kTwoPi * theta) + q * q);
}

}  // namespace vlp
