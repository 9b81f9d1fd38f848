#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vlp/intervals.hpp"
#include "vlp/rng.hpp"
#include "vlp/spectral.hpp"

using namespace vlp;

namespace {

GridFunction random_grid(const RadixSequence& radix, std::uint64_t seed) {
    Rng rng(seed);
    GridFunction f(radix);
    for (cd& v : f.values) v = rng.cnormal();
    return f;
}

GridFunction sample_char(const RadixSequence& radix, std::int64_t n) {
    GridFunction f(radix);
    for (std::int64_t x = 0; x < radix.total(); ++x)
        f.values[static_cast<std::size_t>(x)] = vilenkin_char(radix, n, x);
    return f;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("projector basics: identity, empty, singleton") {
    RadixSequence radix({2, 3, 2});
    GridFunction f = random_grid(radix, 1);
    CHECK(max_abs_diff(project(f, FrequencySet::range(0, 12)), f) < 1e-12);

    GridFunction zero = project(f, FrequencySet());
    for (const cd& v : zero.values) CHECK(std::abs(v) < 1e-15);

    GridFunction two = sample_char(radix, 3) + sample_char(radix, 5);
    CHECK(max_abs_diff(project(two, FrequencySet::single(5)), sample_char(radix, 5)) < 1e-12);

    CHECK_THROWS_AS(project(f, FrequencySet::range(5, 13)), std::domain_error);
}

TEST_CASE("P_A P_B = P_{A and B}, idempotence, L2 contraction, self-adjointness") {
    RadixSequence radix({3, 2, 4});
    GridFunction f = random_grid(radix, 2);
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::int64_t a1 = rng.uniform_int(0, 22), b1 = rng.uniform_int(a1 + 1, 24);
        std::int64_t a2 = rng.uniform_int(0, 22), b2 = rng.uniform_int(a2 + 1, 24);
        FrequencySet A = FrequencySet::range(a1, b1), B = FrequencySet::range(a2, b2);
        std::int64_t lo = std::max(a1, a2), hi = std::min(b1, b2);
        FrequencySet AB = FrequencySet::range(lo, std::max(lo, hi));
        CHECK(max_abs_diff(project(project(f, A), B), project(f, AB)) < 1e-12);
        CHECK(max_abs_diff(project(project(f, A), A), project(f, A)) < 1e-12);
        CHECK(lp_norm(project(f, A), 2.0) <= lp_norm(f, 2.0) + 1e-12);
    }
    GridFunction g = random_grid(radix, 4);
    FrequencySet A = FrequencySet::range(3, 17);
    CHECK(std::abs(inner(project(f, A), g) - inner(f, project(g, A))) < 1e-12);
}

TEST_CASE("expectation: averaging equals the frequency projector") {
    RadixSequence radix({2, 3, 2, 2});
    GridFunction f = random_grid(radix, 5);
    for (int k = 0; k <= radix.levels(); ++k)
        CHECK(max_abs_diff(expectation(f, k), expectation_projector(f, k)) < 1e-12);

    // basis cases: w_n survives iff n < m_k, exhaustive at M = 24
    for (int k = 0; k <= radix.levels(); ++k)
        for (std::int64_t n = 0; n < radix.total(); ++n) {
            GridFunction w = sample_char(radix, n);
            GridFunction e = expectation(w, k);
            if (n < radix.m(k))
                CHECK(max_abs_diff(e, w) < 1e-12);
            else
                CHECK(sup_norm(e) < 1e-12);
        }
    CHECK_THROWS_AS(expectation(f, 5), std::domain_error);
}

TEST_CASE("martingale differences: telescoping and block splitting") {
    RadixSequence radix({3, 4, 2});
    GridFunction f = random_grid(radix, 6);
    for (int k = 0; k < radix.levels(); ++k) {
        GridFunction d = delta(f, k);
        CHECK(max_abs_diff(d, expectation(f, k + 1) - expectation(f, k)) < 1e-12);
        GridFunction sum(radix);
        for (std::int64_t l = 1; l < radix.p(k); ++l) sum = sum + delta_kl(f, k, l);
        CHECK(max_abs_diff(sum, d) < 1e-12);
    }
    GridFunction constant(radix, std::vector<cd>(static_cast<std::size_t>(radix.total()), cd(2.5)));
    for (int k = 0; k < radix.levels(); ++k) CHECK(sup_norm(delta(constant, k)) < 1e-12);

    // total extension: Delta_{k,0} = E_k, periodic in l
    CHECK(max_abs_diff(delta_kl(f, 1, 0), expectation(f, 1)) < 1e-12);
    CHECK(max_abs_diff(delta_kl(f, 1, 5), delta_kl(f, 1, 1)) < 1e-12);
}

TEST_CASE("support lemma: block differences stay inside F_k-measurable supports") {
    RadixSequence radix({3, 2, 4});
    for (int k = 0; k < radix.levels(); ++k) {
        const std::int64_t block = radix.block(k);
        for (std::int64_t atom = 0; atom < radix.m(k); atom += 2) {
            GridFunction f(radix);
            Rng rng(static_cast<std::uint64_t>(100 + atom + k));
            for (std::int64_t x = atom * block; x < (atom + 1) * block; ++x)
                f.values[static_cast<std::size_t>(x)] = rng.cnormal();
            for (std::int64_t j = 1; j < radix.p(k); ++j) {
                GridFunction d = delta_kl(f, k, j);
                for (std::int64_t x = 0; x < radix.total(); ++x)
                    if (x < atom * block || x >= (atom + 1) * block)
                        CHECK(std::abs(d.values[static_cast<std::size_t>(x)]) < 1e-12);
            }
        }
    }
}

TEST_CASE("q_block: full block and low-spectrum annihilation") {
    RadixSequence radix({3, 4, 2});
    GridFunction f = random_grid(radix, 7);
    for (int j = 0; j < radix.levels(); ++j)
        CHECK(max_abs_diff(q_block(f, j, radix.p(j) - 1), delta(f, j)) < 1e-12);

    GridFunction low = project(f, FrequencySet::range(0, radix.m(1)));
    CHECK(sup_norm(q_block(low, 1, 2)) < 1e-12);
    CHECK_THROWS_AS(q_block(f, 1, 0), std::domain_error);
    CHECK_THROWS_AS(q_block(f, 1, 4), std::domain_error);
}

TEST_CASE("modulation identity P_J f = w_b Q [w_b^{-1} f]") {
    Rng rng(8);
    for (auto pv : {std::vector<std::int64_t>{2, 3, 2, 5}, {4, 3, 3}, {7, 2, 2}}) {
        RadixSequence radix(pv);
        GridFunction f = random_grid(radix, 80 + static_cast<std::uint64_t>(pv[0]));
        for (int trial = 0; trial < 20; ++trial) {
            std::int64_t b = rng.uniform_int(1, radix.total() - 1);
            int j = static_cast<int>(rng.uniform_int(0, radix.levels() - 1));
            std::int64_t beta = radix.digit(b, j);
            if (beta == 0) continue;
            IntervalZ J(b - b % radix.m(j + 1), b - b % radix.m(j));
            GridFunction lhs = project(f, FrequencySet::range(J.a, J.b));
            GridFunction rhs =
                multiply_char(q_block(multiply_char(f, dotminus(b, radix)), j, beta), b);
            CHECK(max_abs_diff(lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("G and G* are adjoint; single-row reduction") {
    RadixSequence radix({3, 4, 5});
    Rng rng(9);
    GPlan plan = {GPlanRow{23, {{0, 2}, {1, 3}}}, GPlanRow{58, {{2, 1}}}};
    GridFunction f = random_grid(radix, 10);
    VectorGridFunction h(radix, plan.size());
    for (auto& comp : h.components)
        for (cd& v : comp) v = rng.cnormal();

    CHECK(std::abs(inner(g_forward(f, plan), h) - inner(f, g_star(h, plan))) < 1e-12);

    GPlan single = {GPlanRow{17, {{1, 2}}}};
    VectorGridFunction h1(radix, 1);
    h1.components[0] = h.components[0];
    GridFunction expect = multiply_char(q_block(GridFunction(radix, h.components[0]), 1, 2), 17);
    CHECK(max_abs_diff(g_star(h1, single), expect) < 1e-12);

    GPlan bad = {GPlanRow{17, {{1, 4}}}};
    CHECK_THROWS_AS(g_star(h1, bad), std::invalid_argument);
}

TEST_CASE("G* is an L2 contraction when the modulated blocks are disjoint") {
    RadixSequence radix({3, 4, 5});
    Rng rng(11);
    // modulating by the right endpoint turns the top blocks into the J
    // pieces of the decompositions of [5,21) and [29,57), which are disjoint
    std::vector<DecompositionPieces> decomps = {decompose(5, 21, radix), decompose(29, 57, radix)};
    const std::int64_t right_end[] = {21, 57};
    GPlan plan;
    for (std::size_t s = 0; s < decomps.size(); ++s) {
        GPlanRow row;
        row.b = right_end[s];
        for (const PieceTemplate& piece : decomps[s].J)
            row.blocks.emplace_back(piece.level, piece.hi_digit + 1);
        REQUIRE(!row.blocks.empty());
        plan.push_back(row);
    }
    for (int trial = 0; trial < 10; ++trial) {
        VectorGridFunction h(radix, plan.size());
        for (auto& comp : h.components)
            for (cd& v : comp) v = rng.cnormal();
        CHECK(lp_norm(g_star(h, plan), 2.0) <= lp_norm(h, 2.0) * (1.0 + 1e-12));
    }
}

TEST_CASE("square function: covering set, p = 2 equality, Bessel, overlap rejection") {
    RadixSequence radix({2, 3, 2, 2});
    GridFunction f = random_grid(radix, 12);
    const std::int64_t M = radix.total();

    GridFunction s1 = square_function(f, {FrequencySet::range(0, M)});
    for (std::int64_t x = 0; x < M; ++x)
        CHECK(std::abs(s1.values[static_cast<std::size_t>(x)]) ==
              doctest::Approx(std::abs(f.values[static_cast<std::size_t>(x)])).epsilon(1e-12));

    std::vector<FrequencySet> partition = {FrequencySet::range(0, 5), FrequencySet::range(5, 11),
                                           FrequencySet::range(11, M)};
    CHECK(lp_norm(square_function(f, partition), 2.0) ==
          doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));

    std::vector<FrequencySet> partial = {FrequencySet::range(2, 5), FrequencySet::range(9, 13)};
    CHECK(lp_norm(square_function(f, partial), 2.0) <= lp_norm(f, 2.0) + 1e-12);

    std::vector<FrequencySet> overlapping = {FrequencySet::range(0, 6), FrequencySet::range(5, 9)};
    CHECK_THROWS_AS(square_function(f, overlapping), std::invalid_argument);
}

TEST_CASE("vector helper bound: square function of P_{[0,m_l]} f_l stays comparable") {
    RadixSequence radix({3, 4, 5});
    Rng rng(13);
    const double p = 4.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t count = 4;
        VectorGridFunction fs(radix, count), pfs(radix, count);
        for (std::size_t l = 0; l < count; ++l) {
            GridFunction f = random_grid(radix, 300 + static_cast<std::uint64_t>(trial) * 7 +
                                                    static_cast<std::uint64_t>(l));
            fs.components[l] = f.values;
            std::int64_t ml = rng.uniform_int(0, radix.total() - 1);
            pfs.components[l] = project(f, FrequencySet::range(0, ml + 1)).values;
        }
        double num = lp_norm(pfs, p);
        double den = lp_norm(fs, p);
        REQUIRE(den > 0.0);
        CHECK(num / den <= 8.0);
    }
}

TEST_CASE("smooth multiplier: plateau reproduces the projector, wrong tail dies") {
    RadixSequence radix({50, 2});
    const int t = 0;
    int multi = 0;
    for (const CoverPiece& piece : smooth_cover(radix, t, 0, 1, 48)) {
        if (piece.single) continue;
        ++multi;
        SmoothMultiplierSpec spec{t, 0, piece.r, piece.n_ref};
        GridFunction f = random_grid(radix, 14);
        FrequencySet I = FrequencySet::range(piece.iv.a, piece.iv.b);
        CHECK(max_abs_diff(project(smooth_multiplier(f, spec), I), project(f, I)) < 1e-12);
    }
    REQUIRE(multi > 0);

    SmoothMultiplierSpec spec{0, 0, 2, 3};
    GridFunction wrong_tail = sample_char(radix, 50 + 7);  // nonzero digit above level 0
    CHECK(sup_norm(smooth_multiplier(wrong_tail, spec)) < 1e-12);

    SmoothMultiplierSpec bad{0, 7, 2, 3};  // kappa with a nonzero digit at level <= t
    CHECK_THROWS_AS(smooth_multiplier(wrong_tail, bad), std::domain_error);
}

TEST_CASE("modulated smooth operator preserves the modulus") {
    RadixSequence radix({2, 50, 3});
    const int t = 1;
    const std::int64_t kappa = radix.m(2);  // digit 1 at the level above t
    auto cover = smooth_cover(radix, t, kappa, 1, 48);
    GridFunction f = random_grid(radix, 15);
    bool found = false;
    for (const CoverPiece& piece : cover) {
        if (piece.single) continue;
        found = true;
        SmoothMultiplierSpec spec{t, kappa, piece.r, piece.n_ref};
        GridFunction q = smooth_multiplier(f, spec);
        GridFunction qt = q_tilde(f, spec);
        GridFunction r = r_modulate(qt, spec);
        for (std::int64_t x = 0; x < radix.total(); ++x) {
            CHECK(std::abs(q.values[static_cast<std::size_t>(x)]) ==
                  doctest::Approx(std::abs(qt.values[static_cast<std::size_t>(x)])).epsilon(1e-12));
            // R is a pointwise unimodular factor, so the moduli agree to rounding
            CHECK(std::abs(std::abs(qt.values[static_cast<std::size_t>(x)]) -
                           std::abs(r.values[static_cast<std::size_t>(x)])) <=
                  1e-15 * (1.0 + std::abs(qt.values[static_cast<std::size_t>(x)])));
        }
        // Q~ outputs are constant on the F_{t+1} atoms
        const std::int64_t stride = radix.atom_stride(t);
        for (std::int64_t base = 0; base < radix.total(); base += stride)
            for (std::int64_t i = 1; i < stride; ++i)
                CHECK(std::abs(qt.values[static_cast<std::size_t>(base + i)] -
                               qt.values[static_cast<std::size_t>(base)]) < 1e-12);
    }
    REQUIRE(found);
}

TEST_CASE("r_modulate: identity at n_ref = 0, inverse at -n_ref") {
    RadixSequence radix({5, 3, 2});
    GridFunction g = random_grid(radix, 16);
    SmoothMultiplierSpec zero{0, 0, 1, 0};
    CHECK(max_abs_diff(r_modulate(g, zero), g) < 1e-15);

    SmoothMultiplierSpec fwd{0, 0, 1, 2};
    SmoothMultiplierSpec bwd{0, 0, 1, -2};
    CHECK(max_abs_diff(r_modulate(r_modulate(g, fwd), bwd), g) < 1e-12);
}
