#pragma once

#include <complex>
#include <vector>

#include "vlp/radix.hpp"

namespace vlp {

using cd = std::complex<double>;

/// Step function on [0,1], constant on the M finest atoms.
/// Atom x is the segment [x/M, (x+1)/M); integrals carry the atom
/// measure 1/M.
struct GridFunction {
    RadixSequence radix;
    std::vector<cd> values;

    explicit GridFunction(const RadixSequence& r)
        : radix(r), values(static_cast<std::size_t>(r.total())) {}
    GridFunction(const RadixSequence& r, std::vector<cd> v) : radix(r), values(std::move(v)) {
        if (values.size() != static_cast<std::size_t>(r.total()))
            throw std::invalid_argument("GridFunction: value count != M");
    }
};

/// Vilenkin coefficient vector, indexed by frequencies n in [0, M).
struct Spectrum {
    RadixSequence radix;
    std::vector<cd> coeffs;

    explicit Spectrum(const RadixSequence& r)
        : radix(r), coeffs(static_cast<std::size_t>(r.total())) {}
    Spectrum(const RadixSequence& r, std::vector<cd> c) : radix(r), coeffs(std::move(c)) {
        if (coeffs.size() != static_cast<std::size_t>(r.total()))
            throw std::invalid_argument("Spectrum: coefficient count != M");
    }
};

/// Finite l^2-indexed family (h_s) of grid functions over one shared radix.
struct VectorGridFunction {
    RadixSequence radix;
    std::vector<std::vector<cd>> components;

    explicit VectorGridFunction(const RadixSequence& r) : radix(r) {}
    VectorGridFunction(const RadixSequence& r, std::size_t count)
        : radix(r), components(count, std::vector<cd>(static_cast<std::size_t>(r.total()))) {}

    std::size_t size() const { return components.size(); }
    /// Pointwise l^2 norm at atom x.
    double pointwise_norm(std::int64_t x) const;
};

// L^p norms with the atom measure 1/M; p >= 1, infinity = sup.
double lp_norm(const GridFunction& f, double p);
double sup_norm(const GridFunction& f);
double lp_norm(const VectorGridFunction& h, double p);  // of the pointwise l^2 norm
double sup_norm(const VectorGridFunction& h);

/// (1/M) sum_x f(x) conj(g(x)).
cd inner(const GridFunction& f, const GridFunction& g);
/// sum_s (1/M) sum_x f_s(x) conj(g_s(x)).
cd inner(const VectorGridFunction& f, const VectorGridFunction& g);

double l2_norm(const Spectrum& s);

GridFunction operator+(const GridFunction& f, const GridFunction& g);
GridFunction operator-(const GridFunction& f, const GridFunction& g);
GridFunction operator*(cd scale, const GridFunction& f);

}  // namespace vlp
