#include "vlp/czmax.hpp"

#include <cmath>
#include <numbers>

namespace vlp {

namespace {

void check_omega(const GeneralizedInterval& omega, const RadixSequence& radix) {
    if (omega.k < 0 || omega.k >= radix.levels())
        throw std::domain_error("GeneralizedInterval: level out of range");
    const std::int64_t p = radix.p(omega.k);
    if (omega.parent < 0 || omega.parent >= radix.m(omega.k))
        throw std::domain_error("GeneralizedInterval: parent out of range");
    if (omega.start < 0 || omega.start >= p || omega.len < 1 || omega.len > p)
        throw std::domain_error("GeneralizedInterval: bad run");
}

}  // namespace

std::vector<std::pair<std::int64_t, std::int64_t>> atom_ranges(const GeneralizedInterval& omega,
                                                               const RadixSequence& radix) {
    check_omega(omega, radix);
    const std::int64_t p = radix.p(omega.k);
    const std::int64_t child = radix.atom_stride(omega.k);  // finest atoms per child
    const std::int64_t base = omega.parent * radix.block(omega.k);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    if (omega.start + omega.len <= p) {
        out.emplace_back(base + omega.start * child, base + (omega.start + omega.len) * child);
    } else {
        out.emplace_back(base, base + (omega.start + omega.len - p) * child);
        out.emplace_back(base + omega.start * child, base + p * child);
    }
    return out;
}

GeneralizedInterval triple(const GeneralizedInterval& omega, const RadixSequence& radix) {
    check_omega(omega, radix);
    const std::int64_t p = radix.p(omega.k);
    if (3 * omega.len >= p) return {omega.k, omega.parent, 0, p};
    std::int64_t start = (omega.start - omega.len) % p;
    if (start < 0) start += p;
    return {omega.k, omega.parent, start, 3 * omega.len};
}

std::vector<GeneralizedInterval> enumerate_generalized(const RadixSequence& radix) {
    std::vector<GeneralizedInterval> out;
    for (int k = 0; k < radix.levels(); ++k) {
        const std::int64_t p = radix.p(k);
        for (std::int64_t parent = 0; parent < radix.m(k); ++parent)
            for (std::int64_t start = 0; start < p; ++start)
                for (std::int64_t len = 1; len < p; ++len) out.push_back({k, parent, start, len});
    }
    return out;
}

GridFunction maximal(const GridFunction& f, double q) {
    if (q < 1.0) throw std::domain_error("maximal: q must be >= 1");
    const RadixSequence& radix = f.radix;
    const std::int64_t M = radix.total();
    std::vector<double> fq(static_cast<std::size_t>(M));
    for (std::int64_t x = 0; x < M; ++x)
        fq[static_cast<std::size_t>(x)] =
            std::pow(std::abs(f.values[static_cast<std::size_t>(x)]), q);

    double global = 0.0;
    for (double v : fq) global += v;
    global /= static_cast<double>(M);
    std::vector<double> best(static_cast<std::size_t>(M), global);

    for (int k = 0; k < radix.levels(); ++k) {
        const std::int64_t p = radix.p(k);
        const std::int64_t child = radix.atom_stride(k);
        std::vector<double> csum(static_cast<std::size_t>(p));
        std::vector<double> cbest(static_cast<std::size_t>(p));
        for (std::int64_t parent = 0; parent < radix.m(k); ++parent) {
            const std::int64_t base = parent * radix.block(k);
            for (std::int64_t c = 0; c < p; ++c) {
                double acc = 0.0;
                for (std::int64_t x = 0; x < child; ++x)
                    acc += fq[static_cast<std::size_t>(base + c * child + x)];
                csum[static_cast<std::size_t>(c)] = acc;
                cbest[static_cast<std::size_t>(c)] = 0.0;
            }
            for (std::int64_t start = 0; start < p; ++start) {
                double run = 0.0;
                for (std::int64_t len = 1; len < p; ++len) {
                    run += csum[static_cast<std::size_t>((start + len - 1) % p)];
                    double avg = run / static_cast<double>(len * child);
                    for (std::int64_t i = 0; i < len; ++i) {
                        auto c = static_cast<std::size_t>((start + i) % p);
                        cbest[c] = std::max(cbest[c], avg);
                    }
                }
            }
            for (std::int64_t c = 0; c < p; ++c)
                for (std::int64_t x = 0; x < child; ++x) {
                    auto idx = static_cast<std::size_t>(base + c * child + x);
                    best[idx] = std::max(best[idx], cbest[static_cast<std::size_t>(c)]);
                }
        }
    }
    GridFunction out(radix);
    for (std::int64_t x = 0; x < M; ++x)
        out.values[static_cast<std::size_t>(x)] =
            std::pow(best[static_cast<std::size_t>(x)], 1.0 / q);
    return out;
}

GridFunction sharp_maximal(const VectorGridFunction& g) {
    const RadixSequence& radix = g.radix;
    const std::int64_t M = radix.total();
    const std::size_t S = g.size();
    std::vector<double> best(static_cast<std::size_t>(M), 0.0);
    std::vector<cd> mean(S);
    for (int k = 0; k < radix.levels(); ++k) {
        const std::int64_t p = radix.p(k);
        const std::int64_t child = radix.atom_stride(k);
        std::vector<std::vector<cd>> csum(S, std::vector<cd>(static_cast<std::size_t>(p)));
        std::vector<double> cbest(static_cast<std::size_t>(p));
        for (std::int64_t parent = 0; parent < radix.m(k); ++parent) {
            const std::int64_t base = parent * radix.block(k);
            for (std::size_t s = 0; s < S; ++s)
                for (std::int64_t c = 0; c < p; ++c) {
                    cd acc = 0.0;
                    for (std::int64_t x = 0; x < child; ++x)
                        acc += g.components[s][static_cast<std::size_t>(base + c * child + x)];
                    csum[s][static_cast<std::size_t>(c)] = acc;
                }
            std::fill(cbest.begin(), cbest.end(), 0.0);
            for (std::int64_t start = 0; start < p; ++start)
                for (std::int64_t len = 1; len < p; ++len) {
                    const auto count = static_cast<double>(len * child);
                    for (std::size_t s = 0; s < S; ++s) {
                        cd acc = 0.0;
                        for (std::int64_t i = 0; i < len; ++i)
                            acc += csum[s][static_cast<std::size_t>((start + i) % p)];
                        mean[s] = acc / count;
                    }
                    double osc = 0.0;
                    for (std::int64_t i = 0; i < len; ++i) {
                        const std::int64_t c = (start + i) % p;
                        for (std::int64_t x = 0; x < child; ++x) {
                            double norm2 = 0.0;
                            for (std::size_t s = 0; s < S; ++s)
                                norm2 += std::norm(
                                    g.components[s][static_cast<std::size_t>(base + c * child + x)] -
                                    mean[s]);
                            osc += std::sqrt(norm2);
                        }
                    }
                    osc /= count;
                    for (std::int64_t i = 0; i < len; ++i) {
                        auto c = static_cast<std::size_t>((start + i) % p);
                        cbest[c] = std::max(cbest[c], osc);
                    }
                }
            for (std::int64_t c = 0; c < p; ++c)
                for (std::int64_t x = 0; x < child; ++x) {
                    auto idx = static_cast<std::size_t>(base + c * child + x);
                    best[idx] = std::max(best[idx], cbest[static_cast<std::size_t>(c)]);
                }
        }
    }
    GridFunction out(radix);
    for (std::int64_t x = 0; x < M; ++x)
        out.values[static_cast<std::size_t>(x)] = best[static_cast<std::size_t>(x)];
    return out;
}

double ap_constant(const Weight& w, double p) {
    if (!(p > 1.0)) throw std::domain_error("ap_constant: p must be > 1");
    const RadixSequence& radix = w.radix;
    const double dual_exp = -1.0 / (p - 1.0);  // 1 - p'
    const std::int64_t M = radix.total();
    std::vector<double> u(static_cast<std::size_t>(M)), v(static_cast<std::size_t>(M));
    for (std::int64_t x = 0; x < M; ++x) {
        u[static_cast<std::size_t>(x)] = w.values[static_cast<std::size_t>(x)];
        v[static_cast<std::size_t>(x)] = std::pow(w.values[static_cast<std::size_t>(x)], dual_exp);
    }
    double sup = 0.0;
    for (int k = 0; k < radix.levels(); ++k) {
        const std::int64_t pk = radix.p(k);
        const std::int64_t child = radix.atom_stride(k);
        std::vector<double> usum(static_cast<std::size_t>(pk)), vsum(static_cast<std::size_t>(pk));
        for (std::int64_t parent = 0; parent < radix.m(k); ++parent) {
            const std::int64_t base = parent * radix.block(k);
            for (std::int64_t c = 0; c < pk; ++c) {
                double ua = 0.0, va = 0.0;
                for (std::int64_t x = 0; x < child; ++x) {
                    ua += u[static_cast<std::size_t>(base + c * child + x)];
                    va += v[static_cast<std::size_t>(base + c * child + x)];
                }
                usum[static_cast<std::size_t>(c)] = ua;
                vsum[static_cast<std::size_t>(c)] = va;
            }
            for (std::int64_t start = 0; start < pk; ++start) {
                double urun = 0.0, vrun = 0.0;
                for (std::int64_t len = 1; len < pk; ++len) {
                    auto c = static_cast<std::size_t>((start + len - 1) % pk);
                    urun += usum[c];
                    vrun += vsum[c];
                    const auto count = static_cast<double>(len * child);
                    sup = std::max(sup, (urun / count) * std::pow(vrun / count, p - 1.0));
                }
            }
        }
    }
    return sup;
}

CZResult cz_decompose(const VectorGridFunction& h, double lambda,
                      const std::vector<std::vector<std::int64_t>>& gamma) {
    const RadixSequence& radix = h.radix;
    const std::int64_t M = radix.total();
    const std::size_t S = h.size();
    if (lambda <= 0.0) throw std::domain_error("cz_decompose: lambda must be positive");
    if (lp_norm(h, 1.0) > lambda * (1.0 + 1e-12))
        throw std::domain_error("cz_decompose: requires ||h||_{L1(l2)} <= lambda");
    if (gamma.size() != static_cast<std::size_t>(radix.levels()))
        throw std::invalid_argument("cz_decompose: gamma needs one row per level");
    for (int k = 0; k < radix.levels(); ++k) {
        if (gamma[static_cast<std::size_t>(k)].size() != S)
            throw std::invalid_argument("cz_decompose: gamma row size != component count");
        for (std::int64_t gks : gamma[static_cast<std::size_t>(k)])
            if (gks < 0 || gks >= radix.p(k))
                throw std::domain_error("cz_decompose: gamma out of [0, p_k)");
    }

    std::vector<double> norm(static_cast<std::size_t>(M));
    for (std::int64_t x = 0; x < M; ++x) norm[static_cast<std::size_t>(x)] = h.pointwise_norm(x);

    CZResult out{VectorGridFunction(radix), VectorGridFunction(radix), {}, lambda, gamma, 0};
    out.good.components = h.components;
    out.bad.components.assign(S, std::vector<cd>(static_cast<std::size_t>(M)));

    std::vector<bool> covered(static_cast<std::size_t>(M), false);
    // stopping time: scan levels top down, select maximal circular runs of
    // children whose average exceeds lambda
    for (int k = 0; k < radix.levels(); ++k) {
        const std::int64_t p = radix.p(k);
        const std::int64_t child = radix.atom_stride(k);
        std::vector<bool> marked(static_cast<std::size_t>(p));
        for (std::int64_t parent = 0; parent < radix.m(k); ++parent) {
            const std::int64_t base = parent * radix.block(k);
            if (covered[static_cast<std::size_t>(base)]) continue;  // parents are all or nothing
            bool any = false, all = true;
            for (std::int64_t c = 0; c < p; ++c) {
                double acc = 0.0;
                for (std::int64_t x = 0; x < child; ++x)
                    acc += norm[static_cast<std::size_t>(base + c * child + x)];
                bool over = acc / static_cast<double>(child) > lambda;
                marked[static_cast<std::size_t>(c)] = over;
                any = any || over;
                all = all && over;
            }
            if (!any) continue;
            if (all) throw std::logic_error("cz_decompose: parent average exceeds lambda");
            // maximal circular runs of marked children
            std::int64_t c0 = 0;
            while (marked[static_cast<std::size_t>(c0)]) ++c0;  // some child unmarked
            for (std::int64_t i = 0; i < p;) {
                std::int64_t c = (c0 + i) % p;
                if (!marked[static_cast<std::size_t>(c)]) {
                    ++i;
                    continue;
                }
                std::int64_t len = 0;
                while (len < p && marked[static_cast<std::size_t>((c + len) % p)]) ++len;
                out.selection.push_back({k, parent, c, len});
                for (std::int64_t j = 0; j < len; ++j) {
                    std::int64_t cc = (c + j) % p;
                    for (std::int64_t x = 0; x < child; ++x)
                        covered[static_cast<std::size_t>(base + cc * child + x)] = true;
                }
                i += len;
            }
        }
    }

    // bad part on each omega: residual of the projection onto
    // span{1, conj(r_k^gamma)} (constants only when the two conditions
    // coincide or the Gram system is ill-conditioned)
    for (const GeneralizedInterval& omega : out.selection) {
        const std::int64_t p = radix.p(omega.k);
        auto ranges = atom_ranges(omega, radix);
        std::int64_t count = 0;
        for (auto [b, e] : ranges) count += e - b;
        for (std::size_t s = 0; s < S; ++s) {
            std::int64_t gks = gamma[static_cast<std::size_t>(omega.k)][s] % p;
            cd phi_sum = 0.0, b1 = 0.0, b2 = 0.0;
            auto basis = [&](std::int64_t x) {
                double ang = -2.0 * std::numbers::pi * static_cast<double>(gks) *
                             static_cast<double>(radix.atom_digit(x, omega.k)) /
                             static_cast<double>(p);
                return cd(std::cos(ang), std::sin(ang));
            };
            for (auto [bgn, end] : ranges)
                for (std::int64_t x = bgn; x < end; ++x) {
                    cd f2 = basis(x);
                    cd hv = h.components[s][static_cast<std::size_t>(x)];
                    phi_sum += f2;
                    b1 += hv;
                    b2 += hv * std::conj(f2);
                }
            const auto n = static_cast<double>(count);
            cd c1, c2;
            double off = std::abs(phi_sum);
            bool fallback = gks == 0 || n - off <= 0.0 || (n + off) / (n - off) > 1e8;
            if (fallback) {
                c1 = b1 / n;
                c2 = 0.0;
                if (gks != 0) ++out.gram_fallbacks;
            } else {
                double det = n * n - off * off;
                c1 = (n * b1 - phi_sum * b2) / det;
                c2 = (n * b2 - std::conj(phi_sum) * b1) / det;
            }
            for (auto [bgn, end] : ranges)
                for (std::int64_t x = bgn; x < end; ++x) {
                    cd proj = c1 + c2 * basis(x);
                    out.good.components[s][static_cast<std::size_t>(x)] = proj;
                    out.bad.components[s][static_cast<std::size_t>(x)] =
                        h.components[s][static_cast<std::size_t>(x)] - proj;
                }
        }
    }
    return out;
}

CZCheck cz_verify(const VectorGridFunction& h, const CZResult& result) {
    const RadixSequence& radix = h.radix;
    const std::int64_t M = radix.total();
    const std::size_t S = h.size();
    CZCheck check;
    check.measure_bound = lp_norm(h, 1.0) / result.lambda;

    std::vector<bool> covered(static_cast<std::size_t>(M), false);
    for (const GeneralizedInterval& omega : result.selection) {
        if (omega.len < 1 || omega.len >= radix.p(omega.k)) check.structure_ok = false;
        check.measure_sum +=
            static_cast<double>(omega.len) / static_cast<double>(radix.m(omega.k + 1));
        for (auto [b, e] : atom_ranges(omega, radix))
            for (std::int64_t x = b; x < e; ++x) {
                if (covered[static_cast<std::size_t>(x)]) check.structure_ok = false;
                covered[static_cast<std::size_t>(x)] = true;
            }
    }

    for (std::int64_t x = 0; x < M; ++x) {
        double split = 0.0, off = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            split += std::norm(h.components[s][static_cast<std::size_t>(x)] -
                               result.good.components[s][static_cast<std::size_t>(x)] -
                               result.bad.components[s][static_cast<std::size_t>(x)]);
            if (!covered[static_cast<std::size_t>(x)])
                off += std::norm(result.bad.components[s][static_cast<std::size_t>(x)]);
        }
        check.split_error = std::max(check.split_error, std::sqrt(split));
        check.off_support_error = std::max(check.off_support_error, std::sqrt(off));
    }

    for (const GeneralizedInterval& omega : result.selection) {
        const std::int64_t p = radix.p(omega.k);
        auto ranges = atom_ranges(omega, radix);
        double bad_l1 = 0.0, h_l1 = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            std::int64_t gks = result.gamma[static_cast<std::size_t>(omega.k)][s] % p;
            cd moment = 0.0, rad_moment = 0.0;
            for (auto [b, e] : ranges)
                for (std::int64_t x = b; x < e; ++x) {
                    cd bad = result.bad.components[s][static_cast<std::size_t>(x)];
                    double ang = 2.0 * std::numbers::pi * static_cast<double>(gks) *
                                 static_cast<double>(radix.atom_digit(x, omega.k)) /
                                 static_cast<double>(p);
                    moment += bad;
                    rad_moment += bad * cd(std::cos(ang), std::sin(ang));
                }
            check.cancel_moment = std::max(check.cancel_moment, std::abs(moment) / static_cast<double>(M));
            check.cancel_rademacher =
                std::max(check.cancel_rademacher, std::abs(rad_moment) / static_cast<double>(M));
        }
        for (auto [b, e] : ranges)
            for (std::int64_t x = b; x < e; ++x) {
                double bn = 0.0, hn = 0.0;
                for (std::size_t s = 0; s < S; ++s) {
                    bn += std::norm(result.bad.components[s][static_cast<std::size_t>(x)]);
                    hn += std::norm(h.components[s][static_cast<std::size_t>(x)]);
                }
                bad_l1 += std::sqrt(bn);
                h_l1 += std::sqrt(hn);
            }
        if (h_l1 > 0.0) check.c_bad_l1 = std::max(check.c_bad_l1, bad_l1 / h_l1);
    }

    check.c_good_sup = sup_norm(result.good) / result.lambda;
    double h1 = lp_norm(h, 1.0);
    check.c_good_l1 = h1 > 0.0 ? lp_norm(result.good, 1.0) / h1 : 0.0;
    return check;
}

SharpMaximalReport sharp_vs_maximal_experiment(const VectorGridFunction& g, double p) {
    if (!(p > 1.0)) throw std::domain_error("sharp_vs_maximal_experiment: p must be > 1");
    const RadixSequence& radix = g.radix;
    GridFunction mod(radix);
    for (std::int64_t x = 0; x < radix.total(); ++x)
        mod.values[static_cast<std::size_t>(x)] = g.pointwise_norm(x);
    double lhs = std::pow(lp_norm(maximal(mod, 1.0), p), p);
    double sharp_term = std::pow(lp_norm(sharp_maximal(g), p), p);
    double l1_term = std::pow(lp_norm(mod, 1.0), p);
    double rhs = sharp_term + l1_term;
    return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

}  // namespace vlp
