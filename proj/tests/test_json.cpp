#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "vlp/json_io.hpp"
#include "vlp/rng.hpp"

using namespace vlp;

TEST_CASE("radix sequence parses from a plain integer array") {
    RadixSequence radix = radix_from_json(json::parse("[2,3,5]"));
    CHECK(radix.levels() == 3);
    CHECK(radix.total() == 30);
    CHECK(to_json(radix).dump() == "[2,3,5]");
    CHECK_THROWS(radix_from_json(json::parse("[2,1]")));
}

TEST_CASE("grid function and spectrum round trip as [re, im] pairs") {
    RadixSequence radix({2, 3, 2});
    Rng rng(61);
    GridFunction f(radix);
    for (cd& v : f.values) v = rng.cnormal();
    GridFunction back = grid_from_json(to_json(f));
    CHECK(back.radix == f.radix);
    for (std::size_t x = 0; x < f.values.size(); ++x) CHECK(back.values[x] == f.values[x]);

    Spectrum s(radix);
    for (cd& c : s.coeffs) c = rng.cnormal();
    Spectrum sback = spectrum_from_json(to_json(s));
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) CHECK(sback.coeffs[n] == s.coeffs[n]);

    json j = to_json(f);
    CHECK(j["values"][0].is_array());
    CHECK(j["values"][0].size() == 2);
}

TEST_CASE("operator plans and smooth specs round trip") {
    GPlan plan = {GPlanRow{23, {{0, 2}, {1, 3}}}, GPlanRow{58, {{2, 1}}}};
    GPlan back = gplan_from_json(to_json(plan));
    REQUIRE(back.size() == 2);
    CHECK(back[0].b == 23);
    CHECK(back[0].blocks == plan[0].blocks);
    CHECK(back[1].blocks == plan[1].blocks);

    SmoothMultiplierSpec spec{1, 100, 3, 7};
    SmoothMultiplierSpec sback = smooth_spec_from_json(to_json(spec));
    CHECK(sback.level == spec.level);
    CHECK(sback.kappa == spec.kappa);
    CHECK(sback.r == spec.r);
    CHECK(sback.n_ref == spec.n_ref);
}

TEST_CASE("decomposition pieces serialize with template metadata") {
    RadixSequence radix({2, 3, 2});
    json j = to_json(decompose(3, 11, radix));
    CHECK(j["a"] == 3);
    CHECK(j.contains("J"));
    CHECK(j.contains("Jt"));
    for (const auto& piece : j["J"]) {
        CHECK(piece.contains("level"));
        CHECK(piece.contains("frozen"));
        CHECK(piece["interval"].size() == 2);
    }
}

TEST_CASE("decomposition serialization matches the committed golden file") {
    RadixSequence radix({2, 3, 2});
    json j = json::array();
    j.push_back(to_json(decompose(3, 11, radix)));
    j.push_back(to_json(decompose(0, 12, radix)));
    j.push_back(to_json(decompose(5, 6, radix)));

    std::ifstream in(TEST_DATA_DIR "/decomposition_golden.json");
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(j.dump(2) + "\n" == buf.str());
}

TEST_CASE("CZ result serializes selection and achieved constants") {
    RadixSequence radix({3, 4, 5});
    Rng rng(62);
    VectorGridFunction h(radix, 2);
    for (auto& comp : h.components) {
        for (cd& v : comp) v = rng.cnormal();
        comp[5] *= 30.0;
    }
    double h1 = lp_norm(h, 1.0);
    for (auto& comp : h.components)
        for (cd& v : comp) v /= h1;
    std::vector<std::vector<std::int64_t>> gamma(3, std::vector<std::int64_t>(2, 1));
    CZResult result = cz_decompose(h, 2.0, gamma);
    json j = to_json(result, cz_verify(h, result));
    CHECK(j["lambda"] == 2.0);
    CHECK(j["selection"].is_array());
    CHECK(j["constants"].contains("c_good_sup"));
    CHECK(j["constants"].contains("measure_bound"));
    for (const auto& omega : j["selection"]) {
        CHECK(omega.contains("k"));
        CHECK(omega.contains("parent"));
        CHECK(omega.contains("start"));
        CHECK(omega.contains("len"));
    }
}
