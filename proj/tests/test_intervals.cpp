#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vlp/intervals.hpp"
#include "vlp/rng.hpp"

using namespace vlp;

namespace {

// independent digit oracle with one virtual level so that b = M is covered
std::vector<std::int64_t> digits_ext(std::int64_t v, const RadixSequence& radix) {
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

void check_template(const PieceTemplate& piece, const RadixSequence& radix) {
    for (std::int64_t n = piece.iv.a; n < piece.iv.b; ++n) {
        CHECK(radix.digit(n, piece.level) >= piece.lo_digit);
        CHECK(radix.digit(n, piece.level) <= piece.hi_digit);
        CHECK(n - n % radix.m(piece.level + 1) == piece.frozen);
    }
    CHECK(piece.iv.length() ==
          (piece.hi_digit - piece.lo_digit + 1) * radix.m(piece.level));
}

void check_decomposition(std::int64_t a, std::int64_t b, const RadixSequence& radix) {
    DecompositionPieces pieces = decompose(a, b, radix);
    auto alpha = digits_ext(a, radix);
    auto beta = digits_ext(b, radix);
    int t = radix.levels();
    while (alpha[static_cast<std::size_t>(t)] == beta[static_cast<std::size_t>(t)]) --t;
    REQUIRE(pieces.t == t);

    // emptiness rules
    std::vector<bool> has_j(static_cast<std::size_t>(radix.levels()), false);
    std::vector<bool> has_jt(static_cast<std::size_t>(radix.levels()), false);
    for (const PieceTemplate& piece : pieces.J) {
        CHECK(piece.level < t);
        has_j[static_cast<std::size_t>(piece.level)] = true;
        CHECK(piece.lo_digit == 0);
        CHECK(piece.hi_digit == beta[static_cast<std::size_t>(piece.level)] - 1);
        check_template(piece, radix);
    }
    for (const PieceTemplate& piece : pieces.Jt) {
        CHECK(piece.level < t);
        has_jt[static_cast<std::size_t>(piece.level)] = true;
        CHECK(piece.lo_digit == alpha[static_cast<std::size_t>(piece.level)] + 1);
        CHECK(piece.hi_digit == radix.p(piece.level) - 1);
        check_template(piece, radix);
    }
    for (int j = 0; j < t && j < radix.levels(); ++j) {
        CHECK(has_j[static_cast<std::size_t>(j)] == (beta[static_cast<std::size_t>(j)] != 0));
        CHECK(has_jt[static_cast<std::size_t>(j)] ==
              (alpha[static_cast<std::size_t>(j)] != radix.p(j) - 1));
    }
    if (t < radix.levels()) {
        bool tail_expected =
            alpha[static_cast<std::size_t>(t)] < beta[static_cast<std::size_t>(t)] - 1;
        CHECK(pieces.Jtail.has_value() == tail_expected);
        if (pieces.Jtail) {
            CHECK(pieces.Jtail->level == t);
            CHECK(pieces.Jtail->lo_digit == alpha[static_cast<std::size_t>(t)] + 1);
            CHECK(pieces.Jtail->hi_digit == beta[static_cast<std::size_t>(t)] - 1);
            check_template(*pieces.Jtail, radix);
        }
    } else {
        CHECK(!pieces.Jtail.has_value());
    }

    // integer-exact disjoint union
    std::vector<int> hits(static_cast<std::size_t>(radix.total()), 0);
    for (const IntervalZ& iv : pieces.all_intervals())
        for (std::int64_t n = iv.a; n < iv.b; ++n) ++hits[static_cast<std::size_t>(n)];
    for (std::int64_t n = 0; n < radix.total(); ++n)
        CHECK(hits[static_cast<std::size_t>(n)] == (n >= a && n < b ? 1 : 0));
}

}  // namespace

TEST_CASE("decompose worked examples") {
    RadixSequence walsh({2, 2, 2});
    DecompositionPieces d1 = decompose(3, 7, walsh);
    CHECK(d1.a == 3);
    CHECK(d1.Jt.empty());
    CHECK(!d1.Jtail.has_value());
    REQUIRE(d1.J.size() == 2);
    CHECK(d1.J[0].iv == IntervalZ(6, 7));
    CHECK(d1.J[1].iv == IntervalZ(4, 6));

    DecompositionPieces d2 = decompose(0, 4, walsh);
    CHECK(d2.a == 0);
    CHECK(d2.J.empty());
    REQUIRE(d2.Jt.size() == 2);
    CHECK(d2.Jt[0].iv == IntervalZ(1, 2));
    CHECK(d2.Jt[1].iv == IntervalZ(2, 4));
    CHECK(!d2.Jtail.has_value());

    DecompositionPieces d3 = decompose(5, 6, walsh);
    CHECK(d3.J.empty());
    CHECK(d3.Jt.empty());
    CHECK(!d3.Jtail.has_value());
    CHECK(d3.all_intervals().size() == 1);

    CHECK_THROWS_AS(decompose(4, 4, walsh), std::domain_error);
    CHECK_THROWS_AS(decompose(5, 3, walsh), std::domain_error);
}

TEST_CASE("decompose exhaustively over all pairs, several radixes") {
    for (auto pv : {std::vector<std::int64_t>{2, 3, 2}, {3, 3}, {5, 2, 2}, {2, 2, 2, 2}}) {
        RadixSequence radix(pv);
        for (std::int64_t a = 0; a < radix.total(); ++a)
            for (std::int64_t b = a + 1; b <= radix.total(); ++b)
                check_decomposition(a, b, radix);
    }
}

TEST_CASE("decompose at a larger mixed radix, sampled pairs") {
    RadixSequence radix({13, 7, 11, 3});  // M = 3003
    Rng rng(26);
    for (int trial = 0; trial < 300; ++trial) {
        std::int64_t a = rng.uniform_int(0, radix.total() - 1);
        std::int64_t b = rng.uniform_int(a + 1, radix.total());
        // the sorted pieces must tile [a, b) with no gap and no overlap
        auto all = decompose(a, b, radix).all_intervals();
        std::sort(all.begin(), all.end(),
                  [](const IntervalZ& u, const IntervalZ& v) { return u.a < v.a; });
        std::int64_t cursor = a;
        for (const IntervalZ& iv : all) {
            CHECK(iv.a == cursor);
            cursor = iv.b;
        }
        CHECK(cursor == b);
    }
}

TEST_CASE("pieces of a disjoint family stay pairwise disjoint") {
    RadixSequence radix({3, 4, 5});
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        std::int64_t a1 = rng.uniform_int(0, 20), b1 = rng.uniform_int(a1 + 1, 25);
        std::int64_t a2 = rng.uniform_int(b1, 55), b2 = rng.uniform_int(a2 + 1, 60);
        std::vector<int> hits(static_cast<std::size_t>(radix.total()), 0);
        for (const auto& d : {decompose(a1, b1, radix), decompose(a2, b2, radix)})
            for (const IntervalZ& iv : d.all_intervals())
                for (std::int64_t n = iv.a; n < iv.b; ++n) ++hits[static_cast<std::size_t>(n)];
        for (int h : hits) CHECK(h <= 1);
    }
}

TEST_CASE("reindex groups tail pieces by level and frozen tail") {
    RadixSequence radix({3, 5, 4});
    // digits chosen so the tail piece at level 1 is the only emitted piece
    // (alpha_0 = p_0 - 1 kills J~_0, beta_0 = 0 kills J_0)
    auto d1 = decompose(from_digits({{2, 1, 1}}, radix), from_digits({{0, 4, 1}}, radix), radix);
    auto d2 = decompose(from_digits({{2, 0, 2}}, radix), from_digits({{0, 3, 2}}, radix), radix);
    REQUIRE(d1.Jtail.has_value());
    REQUIRE(d2.Jtail.has_value());

    auto single = reindex({d1});
    CHECK(single.size() == 1);

    auto both = reindex({d1, d2});
    CHECK(both.size() == 2);  // same level, different kappa
    for (const auto& [key, ranges] : both) {
        CHECK(key.level == 1);
        for (std::size_t i = 1; i < ranges.size(); ++i)
            CHECK(ranges[i].alpha > ranges[i - 1].beta);
    }

    // randomized: group members keep disjoint digit ranges
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<DecompositionPieces> family;
        std::int64_t cursor = 0;
        while (cursor + 2 < radix.total()) {
            std::int64_t a = cursor + rng.uniform_int(0, 3);
            std::int64_t b = a + rng.uniform_int(1, 8);
            if (b > radix.total()) break;
            family.push_back(decompose(a, b, radix));
            cursor = b + rng.uniform_int(0, 2);
        }
        for (const auto& [key, ranges] : reindex(family))
            for (std::size_t i = 1; i < ranges.size(); ++i)
                CHECK(ranges[i].alpha > ranges[i - 1].beta);
    }
}

TEST_CASE("whitney members of [0,1]") {
    RealInterval unit{0.0, 1.0, true, true};
    auto members = whitney(unit, 1e-4);
    bool has_middle = false, has_left0 = false;
    for (const RealInterval& member : members) {
        if (std::fabs(member.lo - 1.0 / 3.0) < 1e-12 && std::fabs(member.hi - 2.0 / 3.0) < 1e-12)
            has_middle = true;
        if (std::fabs(member.lo - 1.0 / 6.0) < 1e-12 && std::fabs(member.hi - 1.0 / 3.0) < 1e-12)
            has_left0 = true;
        RealInterval tripled = member.dilate(3.0);
        CHECK(tripled.lo >= unit.lo - 1e-12);
        CHECK(tripled.hi <= unit.hi + 1e-12);
    }
    CHECK(has_middle);
    CHECK(has_left0);

    // dyadic members halve towards the edges
    CHECK(std::fabs(members[1].length() / members[0].length() - 2.0) < 1e-9);

    // overlap of the doubled members is at most 5
    Rng rng(23);
    for (int i = 0; i < 10000; ++i) {
        double x = rng.uniform();
        int count = 0;
        for (const RealInterval& member : members)
            if (member.dilate(2.0).contains(x)) ++count;
        CHECK(count <= 5);
    }
    CHECK_THROWS_AS(whitney(unit, 0.0), std::domain_error);
}

TEST_CASE("widen worked examples") {
    RealInterval iv = widen(10, 3, 5);
    CHECK(iv.lo == doctest::Approx(0.25));
    CHECK(iv.hi == doctest::Approx(0.55));
    CHECK(!iv.closed_lo);

    RealInterval full = widen(10, 0, 9);
    CHECK(full.lo == doctest::Approx(-0.05));
    CHECK(full.hi == doctest::Approx(0.95));

    // widened intervals of adjacent disjoint ranges stay disjoint
    RealInterval left = widen(10, 0, 1), right = widen(10, 2, 3);
    CHECK(left.hi <= right.lo + 1e-12);

    CHECK_THROWS_AS(widen(10, 5, 3), std::domain_error);
    CHECK_THROWS_AS(widen(10, 0, 10), std::domain_error);
}

TEST_CASE("lattice transfer: examples and round trip") {
    RealInterval iv{-0.05, 0.15, false, false};
    auto [jlo, jhi] = lattice_digits(iv, 10);
    CHECK(jlo == 0);
    CHECK(jhi == 1);

    RealInterval gap{0.11, 0.19, true, true};
    auto [glo, ghi] = lattice_digits(gap, 10);
    CHECK(glo > ghi);  // empty

    RadixSequence radix({4, 10, 3});
    IntervalZ transferred = transfer_back(iv, 1, 2 * radix.m(2), radix);
    CHECK(transferred == IntervalZ(2 * radix.m(2), 2 * radix.m(2) + 2 * radix.m(1)));
    CHECK(transfer_back(gap, 1, 0, radix).empty());

    // widen then transfer recovers at least the original digit range
    for (std::int64_t alpha = 0; alpha < 10; ++alpha)
        for (std::int64_t beta = alpha; beta < 10; ++beta) {
            auto [lo, hi] = lattice_digits(widen(10, alpha, beta), 10);
            CHECK(lo <= alpha);
            CHECK(hi >= beta);
        }
}

TEST_CASE("split7: equal pieces, union, dilation containment") {
    RealInterval iv{0.0, 7.0, true, true};
    auto pieces = split7(iv);
    REQUIRE(pieces.size() == 7);
    for (int i = 0; i < 7; ++i) {
        CHECK(pieces[static_cast<std::size_t>(i)].length() == doctest::Approx(1.0));
        CHECK(pieces[static_cast<std::size_t>(i)].lo == doctest::Approx(static_cast<double>(i)));
        RealInterval eight = pieces[static_cast<std::size_t>(i)].dilate(8.0);
        RealInterval two = iv.dilate(2.0);
        CHECK(eight.lo >= two.lo - 1e-12);
        CHECK(eight.hi <= two.hi + 1e-12);
    }
    CHECK(pieces.front().lo == doctest::Approx(iv.lo));
    CHECK(pieces.back().hi == doctest::Approx(iv.hi));
}

TEST_CASE("phi: plateau, support, monotone collar") {
    CHECK(phi(0.0) == 1.0);
    CHECK(phi(2.0) == 1.0);
    CHECK(phi(-2.0) == 1.0);
    CHECK(phi(2.02) == 0.0);
    CHECK(phi(-2.02) == 0.0);
    CHECK(phi(2.01) == 0.0);
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
        double v = phi(2.0 + 0.0001 * i);
        CHECK(v <= prev + 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v == phi(-2.0 - 0.0001 * i));  // even
        prev = v;
    }
}

TEST_CASE("refinement tiles the digit range exactly") {
    RadixSequence radix({2, 50, 3});
    Rng rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        std::int64_t alpha = rng.uniform_int(0, 48);
        std::int64_t beta = rng.uniform_int(alpha, 49);
        auto pieces = refine_digit_range(radix, 1, 0, alpha, beta);
        std::int64_t expect = alpha;
        for (const RefinedPiece& piece : pieces) {
            CHECK(piece.jlo == expect);
            CHECK(piece.jhi >= piece.jlo);
            expect = piece.jhi + 1;
        }
        CHECK(expect == beta + 1);
    }
}

TEST_CASE("smooth cover: classification, n_ref validity, bounded overlap") {
    RadixSequence radix({2, 50, 3});
    const std::int64_t p = 50;
    // several disjoint ranges within one (t, kappa) family
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges = {{0, 13}, {15, 30}, {33, 49}};
    std::vector<CoverPiece> all;
    for (auto [alpha, beta] : ranges) {
        auto cover = smooth_cover(radix, 1, 0, alpha, beta);
        std::int64_t expect = alpha;
        for (const CoverPiece& piece : cover) {
            CHECK(piece.jlo == expect);
            expect = piece.jhi + 1;
            if (!piece.single) {
                double step = std::ldexp(1.0, piece.r);
                CHECK(piece.r >= 0);
                CHECK(piece.real.length() * static_cast<double>(p) >= step - 1e-9);
                CHECK(piece.real.length() * static_cast<double>(p) < 2.0 * step + 1e-9);
                CHECK(piece.n_ref >= 1);
                double ref_point = step * static_cast<double>(piece.n_ref) / static_cast<double>(p);
                CHECK(ref_point >= piece.real.lo - 1e-12);
                CHECK(ref_point <= piece.real.hi + 1e-12);
                CHECK(static_cast<double>(piece.n_ref) < static_cast<double>(p) / step);
            }
            all.push_back(piece);
        }
        CHECK(expect == beta + 1);
    }
    // bounded overlap of the 8-fold dilations across the family
    Rng rng(25);
    for (int i = 0; i < 10000; ++i) {
        double x = rng.uniform(-0.1, 1.1);
        int count = 0;
        for (const CoverPiece& piece : all)
            if (!piece.single && piece.real.dilate(8.0).contains(x)) ++count;
        CHECK(count <= 40);
    }
}
