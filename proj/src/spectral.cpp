#include "vlp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vlp/intervals.hpp"

namespace vlp {

FrequencySet FrequencySet::range(std::int64_t a, std::int64_t b) {
    FrequencySet out;
    if (a < b) out.parts_.push_back(IntervalZ(a, b));
    return out;
}

FrequencySet FrequencySet::single(std::int64_t n) { return range(n, n + 1); }

FrequencySet FrequencySet::from_intervals(std::vector<IntervalZ> parts) {
    std::erase_if(parts, [](const IntervalZ& iv) { return iv.empty(); });
    std::sort(parts.begin(), parts.end(),
              [](const IntervalZ& u, const IntervalZ& v) { return u.a < v.a; });
    for (std::size_t i = 1; i < parts.size(); ++i)
        if (parts[i].a < parts[i - 1].b)
            throw std::invalid_argument("FrequencySet: intervals overlap");
    FrequencySet out;
    out.parts_ = std::move(parts);
    return out;
}

FrequencySet FrequencySet::digit_arc(const RadixSequence& radix, int k, std::int64_t jlo,
                                     std::int64_t jhi) {
    if (k < 0 || k >= radix.levels()) throw std::domain_error("digit_arc: level out of range");
    if (jlo < 0 || jhi >= radix.p(k) || jlo > jhi)
        throw std::domain_error("digit_arc: digit range out of [0, p_k)");
    std::vector<IntervalZ> parts;
    const std::int64_t lo_stride = radix.m(k);
    const std::int64_t hi_stride = radix.m(k + 1);
    for (std::int64_t base = 0; base < radix.total(); base += hi_stride)
        parts.push_back(IntervalZ(base + jlo * lo_stride, base + (jhi + 1) * lo_stride));
    return from_intervals(std::move(parts));
}

bool FrequencySet::contains(std::int64_t n) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), n,
                               [](std::int64_t v, const IntervalZ& iv) { return v < iv.a; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(n);
}

std::int64_t FrequencySet::cardinality() const {
    std::int64_t c = 0;
    for (const IntervalZ& iv : parts_) c += iv.length();
    return c;
}

bool FrequencySet::intersects(const FrequencySet& other) const {
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
        const IntervalZ& u = parts_[i];
        const IntervalZ& v = other.parts_[j];
        if (u.b <= v.a)
            ++i;
        else if (v.b <= u.a)
            ++j;
        else
            return true;
    }
    return false;
}

Spectrum project(const Spectrum& s, const FrequencySet& A) {
    if (A.max_bound() > s.radix.total()) throw std::domain_error("project: set exceeds [0, M)");
    Spectrum out(s.radix);
    for (const IntervalZ& iv : A.parts())
        for (std::int64_t n = iv.a; n < iv.b; ++n)
            out.coeffs[static_cast<std::size_t>(n)] = s.coeffs[static_cast<std::size_t>(n)];
    return out;
}

GridFunction project(const GridFunction& f, const FrequencySet& A) {
    return inverse_fast(project(forward_fast(f), A));
}

GridFunction expectation(const GridFunction& f, int k) {
    const RadixSequence& radix = f.radix;
    if (k < 0 || k > radix.levels()) throw std::domain_error("expectation: level out of range");
    const std::int64_t block = radix.block(k);
    GridFunction out(radix);
    for (std::int64_t base = 0; base < radix.total(); base += block) {
        cd acc = 0.0;
        for (std::int64_t x = 0; x < block; ++x)
            acc += f.values[static_cast<std::size_t>(base + x)];
        acc /= static_cast<double>(block);
        for (std::int64_t x = 0; x < block; ++x)
            out.values[static_cast<std::size_t>(base + x)] = acc;
    }
    return out;
}

GridFunction expectation_projector(const GridFunction& f, int k) {
    if (k < 0 || k > f.radix.levels())
        throw std::domain_error("expectation_projector: level out of range");
    return project(f, FrequencySet::range(0, f.radix.m(k)));
}

GridFunction delta(const GridFunction& f, int k) {
    if (k < 0 || k >= f.radix.levels()) throw std::domain_error("delta: level out of range");
    return project(f, FrequencySet::range(f.radix.m(k), f.radix.m(k + 1)));
}

GridFunction delta_kl(const GridFunction& f, int k, std::int64_t l) {
    const RadixSequence& radix = f.radix;
    if (k < 0 || k >= radix.levels()) throw std::domain_error("delta_kl: level out of range");
    l %= radix.p(k);
    if (l < 0) l += radix.p(k);
    if (l == 0) return expectation(f, k);
    return project(f, FrequencySet::range(l * radix.m(k), (l + 1) * radix.m(k)));
}

GridFunction q_block(const GridFunction& h, int j, std::int64_t beta) {
    const RadixSequence& radix = h.radix;
    if (j < 0 || j >= radix.levels()) throw std::domain_error("q_block: level out of range");
    if (beta < 1 || beta > radix.p(j) - 1)
        throw std::domain_error("q_block: beta out of [1, p_j - 1]");
    return project(h, FrequencySet::range((radix.p(j) - beta) * radix.m(j), radix.m(j + 1)));
}

GridFunction multiply_char(const GridFunction& f, std::int64_t b) {
    const RadixSequence& radix = f.radix;
    radix.check_value(b);
    GridFunction out(radix);
    for (std::int64_t x = 0; x < radix.total(); ++x)
        out.values[static_cast<std::size_t>(x)] =
            vilenkin_char(radix, b, x) * f.values[static_cast<std::size_t>(x)];
    return out;
}

namespace {

void check_plan(const GPlan& plan, const RadixSequence& radix) {
    for (const GPlanRow& row : plan) {
        radix.check_value(row.b);
        if (row.blocks.empty()) throw std::invalid_argument("G plan: row without blocks");
        for (auto [j, beta] : row.blocks) {
            if (j < 0 || j >= radix.levels())
                throw std::invalid_argument("G plan: level out of range");
            if (beta < 1 || beta > radix.p(j) - 1)
                throw std::invalid_argument("G plan: beta out of [1, p_j - 1]");
        }
    }
}

}  // namespace

VectorGridFunction g_forward(const GridFunction& f, const GPlan& plan) {
    check_plan(plan, f.radix);
    VectorGridFunction out(f.radix);
    for (const GPlanRow& row : plan) {
        GridFunction mod = multiply_char(f, dotminus(row.b, f.radix));
        Spectrum spec = forward_fast(mod);
        Spectrum acc(f.radix);
        for (auto [j, beta] : row.blocks) {
            std::int64_t lo = (f.radix.p(j) - beta) * f.radix.m(j);
            std::int64_t hi = f.radix.m(j + 1);
            for (std::int64_t n = lo; n < hi; ++n)
                acc.coeffs[static_cast<std::size_t>(n)] = spec.coeffs[static_cast<std::size_t>(n)];
        }
        out.components.push_back(std::move(inverse_fast(acc).values));
    }
    return out;
}

GridFunction g_star(const VectorGridFunction& h, const GPlan& plan) {
    check_plan(plan, h.radix);
    if (h.size() != plan.size()) throw std::invalid_argument("g_star: plan/component mismatch");
    GridFunction out(h.radix);
    for (std::size_t s = 0; s < plan.size(); ++s) {
        Spectrum spec = forward_fast(GridFunction(h.radix, h.components[s]));
        Spectrum acc(h.radix);
        for (auto [j, beta] : plan[s].blocks) {
            std::int64_t lo = (h.radix.p(j) - beta) * h.radix.m(j);
            std::int64_t hi = h.radix.m(j + 1);
            for (std::int64_t n = lo; n < hi; ++n)
                acc.coeffs[static_cast<std::size_t>(n)] = spec.coeffs[static_cast<std::size_t>(n)];
        }
        GridFunction part = multiply_char(inverse_fast(acc), plan[s].b);
        for (std::int64_t x = 0; x < h.radix.total(); ++x)
            out.values[static_cast<std::size_t>(x)] += part.values[static_cast<std::size_t>(x)];
    }
    return out;
}

GridFunction square_function(const GridFunction& f, const std::vector<FrequencySet>& family) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (family[i].intersects(family[j]))
                throw std::invalid_argument("square_function: family members overlap");
    const std::int64_t M = f.radix.total();
    std::vector<double> acc(static_cast<std::size_t>(M), 0.0);
    Spectrum spec = forward_fast(f);
    for (const FrequencySet& A : family) {
        GridFunction part = inverse_fast(project(spec, A));
        for (std::int64_t x = 0; x < M; ++x)
            acc[static_cast<std::size_t>(x)] += std::norm(part.values[static_cast<std::size_t>(x)]);
    }
    GridFunction out(f.radix);
    for (std::int64_t x = 0; x < M; ++x)
        out.values[static_cast<std::size_t>(x)] = std::sqrt(acc[static_cast<std::size_t>(x)]);
    return out;
}

namespace {

void check_smooth_spec(const SmoothMultiplierSpec& spec, const RadixSequence& radix) {
    if (spec.level < 0 || spec.level >= radix.levels())
        throw std::domain_error("smooth multiplier: level out of range");
    if (spec.r < 0) throw std::domain_error("smooth multiplier: r must be >= 0");
    radix.check_value(spec.kappa);
    if (spec.kappa % radix.m(spec.level + 1) != 0)
        throw std::domain_error("smooth multiplier: kappa must have zero digits at levels <= t");
}

}  // namespace

GridFunction smooth_multiplier(const GridFunction& f, const SmoothMultiplierSpec& spec) {
    const RadixSequence& radix = f.radix;
    check_smooth_spec(spec, radix);
    const std::int64_t mt1 = radix.m(spec.level + 1);
    const double scale = std::pow(2.0, spec.r);
    Spectrum s = forward_fast(f);
    for (std::int64_t n = 0; n < radix.total(); ++n) {
        std::int64_t tail = n - n % mt1;
        if (tail != spec.kappa) {
            s.coeffs[static_cast<std::size_t>(n)] = 0.0;
            continue;
        }
        double sym = phi(static_cast<double>(radix.digit(n, spec.level)) / scale -
                         static_cast<double>(spec.n_ref));
        s.coeffs[static_cast<std::size_t>(n)] *= sym;
    }
    return inverse_fast(s);
}

GridFunction q_tilde(const GridFunction& f, const SmoothMultiplierSpec& spec) {
    return multiply_char(smooth_multiplier(f, spec), dotminus(spec.kappa, f.radix));
}

GridFunction r_modulate(const GridFunction& g, const SmoothMultiplierSpec& spec) {
    const RadixSequence& radix = g.radix;
    check_smooth_spec(spec, radix);
    const std::int64_t pt = radix.p(spec.level);
    const double scale = std::pow(2.0, spec.r);
    GridFunction out(radix);
    for (std::int64_t x = 0; x < radix.total(); ++x) {
        double ang = -2.0 * std::numbers::pi * scale * static_cast<double>(spec.n_ref) *
                     static_cast<double>(radix.atom_digit(x, spec.level)) /
                     static_cast<double>(pt);
        out.values[static_cast<std::size_t>(x)] =
            cd(std::cos(ang), std::sin(ang)) * g.values[static_cast<std::size_t>(x)];
    }
    return out;
}

}  // namespace vlp
