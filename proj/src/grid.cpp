#include "vlp/grid.hpp"

#include <cmath>

namespace vlp {

double VectorGridFunction::pointwise_norm(std::int64_t x) const {
    double s = 0.0;
    for (const auto& comp : components) s += std::norm(comp[static_cast<std::size_t>(x)]);
    return std::sqrt(s);
}

double lp_norm(const GridFunction& f, double p) {
    if (p < 1.0) throw std::domain_error("lp_norm: p must be >= 1");
    const double M = static_cast<double>(f.radix.total());
    double acc = 0.0;
    for (const cd& v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc / M, 1.0 / p);
}

double sup_norm(const GridFunction& f) {
    double m = 0.0;
    for (const cd& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double lp_norm(const VectorGridFunction& h, double p) {
    if (p < 1.0) throw std::domain_error("lp_norm: p must be >= 1");
    const double M = static_cast<double>(h.radix.total());
    double acc = 0.0;
    for (std::int64_t x = 0; x < h.radix.total(); ++x) acc += std::pow(h.pointwise_norm(x), p);
    return std::pow(acc / M, 1.0 / p);
}

double sup_norm(const VectorGridFunction& h) {
    double m = 0.0;
    for (std::int64_t x = 0; x < h.radix.total(); ++x) m = std::max(m, h.pointwise_norm(x));
    return m;
}

cd inner(const GridFunction& f, const GridFunction& g) {
    if (!(f.radix == g.radix)) throw std::invalid_argument("inner: radix mismatch");
    cd acc = 0.0;
    for (std::size_t x = 0; x < f.values.size(); ++x) acc += f.values[x] * std::conj(g.values[x]);
    return acc / static_cast<double>(f.radix.total());
}

cd inner(const VectorGridFunction& f, const VectorGridFunction& g) {
    if (!(f.radix == g.radix) || f.size() != g.size())
        throw std::invalid_argument("inner: shape mismatch");
    cd acc = 0.0;
    for (std::size_t s = 0; s < f.size(); ++s)
        for (std::size_t x = 0; x < f.components[s].size(); ++x)
            acc += f.components[s][x] * std::conj(g.components[s][x]);
    return acc / static_cast<double>(f.radix.total());
}

double l2_norm(const Spectrum& s) {
    double acc = 0.0;
    for (const cd& c : s.coeffs) acc += std::norm(c);
    return std::sqrt(acc);
}

GridFunction operator+(const GridFunction& f, const GridFunction& g) {
    if (!(f.radix == g.radix)) throw std::invalid_argument("operator+: radix mismatch");
    GridFunction out = f;
    for (std::size_t x = 0; x < out.values.size(); ++x) out.values[x] += g.values[x];
    return out;
}

GridFunction operator-(const GridFunction& f, const GridFunction& g) {
    if (!(f.radix == g.radix)) throw std::invalid_argument("operator-: radix mismatch");
    GridFunction out = f;
    for (std::size_t x = 0; x < out.values.size(); ++x) out.values[x] -= g.values[x];
    return out;
}

GridFunction operator*(cd scale, const GridFunction& f) {
    GridFunction out = f;
    for (cd& v : out.values) v *= scale;
    return out;
}

}  // namespace vlp
