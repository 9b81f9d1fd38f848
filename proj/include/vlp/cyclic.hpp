#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace vlp {

using cd = std::complex<double>;

/// Function on Z_p with the counting measure.
struct CyclicFunction {
    std::int64_t p = 2;
    std::vector<cd> values;

    explicit CyclicFunction(std::int64_t p_) : p(p_), values(static_cast<std::size_t>(p_)) {
        if (p_ < 2) throw std::domain_error("CyclicFunction: p must be >= 2");
    }
    CyclicFunction(std::int64_t p_, std::vector<cd> v) : p(p_), values(std::move(v)) {
        if (p_ < 2 || values.size() != static_cast<std::size_t>(p_))
            throw std::invalid_argument("CyclicFunction: bad shape");
    }
};

/// Circular run in Z_p; len == p is the whole group.
struct Arc {
    std::int64_t start = 0;
    std::int64_t len = 1;
};

/// Circular distance: |c| for the representative c of a - b in (-p/2, p/2].
std::int64_t dist_p(std::int64_t a, std::int64_t b, std::int64_t p);

/// I_k(x, z) = { y : 2^k dist(x,z) < dist(y,z) <= 2^{k+1} dist(x,z) }.
std::vector<std::int64_t> annulus(std::int64_t x, std::int64_t z, int k, std::int64_t p);

/// Closed form of sum_{l=p-alpha}^{p-1} e^{2 pi i l t / p}:
///   (1/2) e^{-2 pi i alpha t/p} - 1/2
///   + (i/2) e^{-2 pi i alpha t/p} cot(pi t/p) - (i/2) cot(pi t/p).
cd cot_partial_sum(std::int64_t p, std::int64_t alpha, std::int64_t t);

/// (H_omega g)|_{e_t} = scale * sum_{j=m}^{n} (int_{e_j} g) cot(pi (t-j)/p)
/// for the arc omega = [m..n], n = m + atom_integrals.size() - 1, and a
/// target t outside omega.
cd hilbert_cot(const std::vector<cd>& atom_integrals, std::int64_t m, std::int64_t t,
               std::int64_t p, double scale);

/// Kernel family parameters on Z_p.
struct KernelSpec {
    std::int64_t p = 2;
    int r = 0;
    std::int64_t n_ref = 1;
};
void validate(const KernelSpec& spec);

/// psi_r(t) = sum_l phi(l / 2^r) e^{2 pi i l t / p}; p-periodic in t.
cd psi_r(double t, const KernelSpec& spec);

/// psi_r at an integer argument, served from a per-(p, r) table cache.
cd psi_periodic(std::int64_t p, int r, std::int64_t t);

/// K(n, m) = (1/p) e^{-2 pi i 2^r n_ref m / p} psi_r(n - m).
cd kernel(const KernelSpec& spec, std::int64_t n, std::int64_t m);

/// T[g](n) = sum_m K(n, m) g(m).
CyclicFunction kernel_apply(const KernelSpec& spec, const CyclicFunction& g);

/// lhs of the kernel decay bound over the annulus I_k(x, z), together
/// with the bound at unit constant: scale = 2^{-5k/3} sum|lambda|^2 / dist.
struct Lemma4Result {
    double lhs = 0.0;
    double scale = 0.0;
};
Lemma4Result lemma4_check(std::int64_t x, std::int64_t z, int k, const std::vector<cd>& lambda,
                          const std::vector<KernelSpec>& specs);

/// |sum_{y=0}^{floor(p/2^r)-1} e^{2 pi i 2^r q y / p}|; the window sum in
/// the exponential-sum lemma (its modulus does not depend on the window
/// position).
double geometric_window_modulus(std::int64_t p, int r, std::int64_t q);

/// lhs = sum_{y=a}^{b} |sum_i lambda_i e^{-2 pi i 2^r j_i y / p}|^2 over a
/// window of exactly floor(p/2^r) integers, with scale = (p/2^{1+r}) sum|lambda|^2.
/// The frequencies js must sit in one band: all in (0, p/2^{1+r}] or all
/// in (p/2^{1+r}, p/2^r).
struct ExpSumResult {
    double lhs = 0.0;
    double scale = 0.0;
};
ExpSumResult expsum_bound_check(std::int64_t p, int r, std::int64_t a, std::int64_t b,
                                const std::vector<std::int64_t>& js,
                                const std::vector<cd>& lambda);

/// DFT pair on Z_p: forward carries 1/p, inverse carries none
/// (mirrors the Vilenkin convention).
CyclicFunction cyclic_forward(const CyclicFunction& h);
/// P_I h for an arc of frequencies.
CyclicFunction arc_projector(const CyclicFunction& h, const Arc& I);

/// sup over arcs of (avg v)(avg v^{-1}).
double a2_constant_zp(const std::vector<double>& v);

/// Both sides of the weighted Littlewood-Paley inequality on Z_p for the
/// lacunary family I_s = { j : j/p in (2^{-(s+1)}, 2^{-s}(1+rho)) }.
struct WeightedLpResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    int arc_count = 0;
};
WeightedLpResult weighted_lp_experiment(std::int64_t p, double rho,
                                        const std::vector<double>& v, const CyclicFunction& h);

/// Poisson kernel Q_delta(theta) = (1 - e^{-2 delta}) /
/// (1 - 2 e^{-delta} cos 2 pi theta + e^{-2 delta}).
double poisson_kernel(double theta, double delta);

}  // namespace vlp
