#include "vlp/intervals.hpp"

#include <algorithm>
#include <cmath>

namespace vlp {

namespace {

constexpr double kLatticeEps = 1e-9;

// Digits of b in a frame extended by one virtual level, so that b == M is
// representable (digit 1 at level N+1).  Emitted pieces never touch the
// virtual level.
std::vector<std::int64_t> extended_digits(std::int64_t v, const RadixSequence& radix) {
    std::vector<std::int64_t> d(static_cast<std::size_t>(radix.levels()) + 1, 0);
    if (v == radix.total()) {
        d.back() = 1;
        return d;
    }
    for (int k = 0; k < radix.levels(); ++k) {
        d[static_cast<std::size_t>(k)] = v % radix.p(k);
        v /= radix.p(k);
    }
    return d;
}

}  // namespace

std::vector<IntervalZ> DecompositionPieces::all_intervals() const {
    std::vector<IntervalZ> out;
    out.push_back(IntervalZ(a, a + 1));
    for (const PieceTemplate& piece : J) out.push_back(piece.iv);
    for (const PieceTemplate& piece : Jt) out.push_back(piece.iv);
    if (Jtail) out.push_back(Jtail->iv);
    return out;
}

DecompositionPieces decompose(std::int64_t a, std::int64_t b, const RadixSequence& radix) {
    if (a < 0 || a >= b || b > radix.total())
        throw std::domain_error("decompose: need 0 <= a < b <= M");
    const int L = radix.levels();
    const auto alpha = extended_digits(a, radix);
    const auto beta = extended_digits(b, radix);

    int t = L;
    while (alpha[static_cast<std::size_t>(t)] == beta[static_cast<std::size_t>(t)]) --t;

    DecompositionPieces out;
    out.a = a;
    out.t = t;

    for (int j = 0; j < t; ++j) {
        std::int64_t bj = beta[static_cast<std::size_t>(j)];
        if (bj == 0) continue;
        std::int64_t hi = b - b % radix.m(j);
        std::int64_t lo = b - b % radix.m(j + 1);
        out.J.push_back({j, 0, bj - 1, lo, IntervalZ(lo, hi)});
    }
    for (int j = 0; j < t; ++j) {
        std::int64_t aj = alpha[static_cast<std::size_t>(j)];
        if (aj == radix.p(j) - 1) continue;
        std::int64_t base = a - a % radix.m(j + 1);
        out.Jt.push_back(
            {j, aj + 1, radix.p(j) - 1, base, IntervalZ(base + (aj + 1) * radix.m(j), base + radix.m(j + 1))});
    }
    if (t < L) {
        std::int64_t at = alpha[static_cast<std::size_t>(t)];
        std::int64_t bt = beta[static_cast<std::size_t>(t)];
        if (at < bt - 1) {
            std::int64_t base = a - a % radix.m(t + 1);
            out.Jtail = PieceTemplate{t, at + 1, bt - 1, base,
                                      IntervalZ(base + (at + 1) * radix.m(t), base + bt * radix.m(t))};
        }
    }
    return out;
}

std::map<TailKey, std::vector<DigitRange>> reindex(
    const std::vector<DecompositionPieces>& family) {
    std::map<TailKey, std::vector<DigitRange>> groups;
    auto add = [&groups](const PieceTemplate& piece) {
        groups[{piece.level, piece.frozen}].push_back({piece.lo_digit, piece.hi_digit, piece.iv});
    };
    for (const DecompositionPieces& pieces : family) {
        for (const PieceTemplate& piece : pieces.Jt) add(piece);
        if (pieces.Jtail) add(*pieces.Jtail);
    }
    for (auto& [key, ranges] : groups) {
        std::sort(ranges.begin(), ranges.end(),
                  [](const DigitRange& u, const DigitRange& v) { return u.alpha < v.alpha; });
        for (std::size_t i = 1; i < ranges.size(); ++i)
            if (ranges[i].alpha <= ranges[i - 1].beta)
                throw std::invalid_argument("reindex: digit ranges overlap within a (t, kappa) group");
    }
    return groups;
}

std::vector<RealInterval> whitney(const RealInterval& iv, double min_len) {
    if (iv.length() <= 0.0) throw std::domain_error("whitney: empty interval");
    if (min_len <= 0.0) throw std::domain_error("whitney: min_len must be positive");
    const double a = iv.lo, b = iv.hi, third = iv.length() / 3.0;
    std::vector<RealInterval> left;
    for (int k = 0;; ++k) {
        double len = third * std::ldexp(1.0, -(k + 1));
        if (len < min_len) break;
        left.push_back({a + len, a + 2.0 * len, true, true});
    }
    std::vector<RealInterval> out(left.rbegin(), left.rend());
    out.push_back({a + third, b - third, true, true});
    for (int k = 0;; ++k) {
        double len = third * std::ldexp(1.0, -(k + 1));
        if (len < min_len) break;
        out.push_back({b - 2.0 * len, b - len, true, true});
    }
    return out;
}

RealInterval widen(std::int64_t p_t, std::int64_t alpha, std::int64_t beta) {
    if (alpha < 0 || alpha > beta || beta >= p_t)
        throw std::domain_error("widen: need 0 <= alpha <= beta < p_t");
    double p = static_cast<double>(p_t);
    return {(static_cast<double>(alpha) - 0.5) / p, (static_cast<double>(beta) + 0.5) / p,
            false, false};
}

std::pair<std::int64_t, std::int64_t> lattice_digits(const RealInterval& iv, std::int64_t p) {
    double lo = iv.lo * static_cast<double>(p);
    double hi = iv.hi * static_cast<double>(p);
    auto jlo = static_cast<std::int64_t>(std::ceil(lo - kLatticeEps));
    auto jhi = static_cast<std::int64_t>(std::floor(hi + kLatticeEps));
    if (!iv.closed_lo && std::fabs(static_cast<double>(jlo) - lo) <= kLatticeEps) ++jlo;
    if (!iv.closed_hi && std::fabs(static_cast<double>(jhi) - hi) <= kLatticeEps) --jhi;
    jlo = std::max<std::int64_t>(jlo, 0);
    jhi = std::min<std::int64_t>(jhi, p - 1);
    return {jlo, jhi};
}

IntervalZ transfer_back(const RealInterval& iv, int t, std::int64_t kappa,
                        const RadixSequence& radix) {
    if (t < 0 || t >= radix.levels()) throw std::domain_error("transfer_back: level out of range");
    radix.check_value(kappa);
    if (kappa % radix.m(t + 1) != 0)
        throw std::domain_error("transfer_back: kappa must have zero digits at levels <= t");
    auto [jlo, jhi] = lattice_digits(iv, radix.p(t));
    if (jlo > jhi) return IntervalZ(kappa, kappa);
    return IntervalZ(kappa + jlo * radix.m(t), kappa + (jhi + 1) * radix.m(t));
}

std::vector<RealInterval> split7(const RealInterval& iv) {
    if (iv.length() <= 0.0) throw std::domain_error("split7: empty interval");
    std::vector<RealInterval> out;
    for (int i = 0; i < 7; ++i) {
        double lo = iv.lo + iv.length() * static_cast<double>(i) / 7.0;
        double hi = iv.lo + iv.length() * static_cast<double>(i + 1) / 7.0;
        out.push_back({lo, hi, i == 0 ? iv.closed_lo : true, i == 6 ? iv.closed_hi : true});
    }
    return out;
}

double phi(double x) {
    x = std::fabs(x);
    if (x <= 2.0) return 1.0;
    if (x >= 2.01) return 0.0;
    auto g = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    double u = (x - 2.0) / 0.01;  // position on the collar, in (0, 1)
    double rise = g(1.0 - u);
    return rise / (rise + g(u));
}

std::vector<RefinedPiece> refine_digit_range(const RadixSequence& radix, int t,
                                             std::int64_t kappa, std::int64_t alpha,
                                             std::int64_t beta) {
    const std::int64_t p = radix.p(t);
    RealInterval widened = widen(p, alpha, beta);
    auto members = whitney(widened, 1.0 / (4.0 * static_cast<double>(p)));
    std::vector<RefinedPiece> out;
    std::int64_t taken = alpha - 1;
    for (const RealInterval& member : members) {
        auto [jlo, jhi] = lattice_digits(member, p);
        jlo = std::max(jlo, taken + 1);
        jhi = std::min(jhi, beta);
        if (jlo > jhi) continue;
        out.push_back({jlo, jhi,
                       IntervalZ(kappa + jlo * radix.m(t), kappa + (jhi + 1) * radix.m(t)), member});
        taken = jhi;
    }
    if (taken != beta) throw std::logic_error("refine_digit_range: lattice coverage gap");
    return out;
}

std::vector<CoverPiece> smooth_cover(const RadixSequence& radix, int t, std::int64_t kappa,
                                     std::int64_t alpha, std::int64_t beta) {
    const std::int64_t p = radix.p(t);
    std::vector<CoverPiece> out;
    for (const RefinedPiece& piece : refine_digit_range(radix, t, kappa, alpha, beta)) {
        std::int64_t taken = piece.jlo - 1;
        for (const RealInterval& sub : split7(piece.real)) {
            auto [jlo, jhi] = lattice_digits(sub, p);
            jlo = std::max(jlo, taken + 1);
            jhi = std::min(jhi, piece.jhi);
            if (jlo > jhi) continue;
            taken = jhi;
            CoverPiece cover{jlo, jhi,
                             IntervalZ(kappa + jlo * radix.m(t), kappa + (jhi + 1) * radix.m(t)),
                             sub, jlo == jhi, 0, 0};
            if (!cover.single) {
                double scaled = sub.length() * static_cast<double>(p);
                cover.r = static_cast<int>(std::floor(std::log2(scaled) + 1e-12));
                double step = std::ldexp(1.0, cover.r);
                auto n0 = static_cast<std::int64_t>(
                    std::ceil(sub.lo * static_cast<double>(p) / step - kLatticeEps));
                n0 = std::max<std::int64_t>(n0, 1);
                if (step * static_cast<double>(n0) / static_cast<double>(p) >
                    sub.hi + kLatticeEps)
                    throw std::logic_error("smooth_cover: no admissible n_ref");
                cover.n_ref = n0;
            }
            out.push_back(cover);
        }
    }
    return out;
}

}  // namespace vlp
