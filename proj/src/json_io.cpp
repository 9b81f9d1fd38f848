#include "vlp/json_io.hpp"

namespace vlp {

namespace {

json complex_vector_to_json(const std::vector<cd>& v) {
    json arr = json::array();
    for (const cd& c : v) arr.push_back({c.real(), c.imag()});
    return arr;
}

std::vector<cd> complex_vector_from_json(const json& j) {
    std::vector<cd> out;
    out.reserve(j.size());
    for (const auto& pair : j) out.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    return out;
}

json piece_to_json(const PieceTemplate& piece) {
    return {{"level", piece.level},
            {"lo_digit", piece.lo_digit},
            {"hi_digit", piece.hi_digit},
            {"frozen", piece.frozen},
            {"interval", {piece.iv.a, piece.iv.b}}};
}

}  // namespace

json to_json(const RadixSequence& radix) {
    json arr = json::array();
    for (int k = 0; k < radix.levels(); ++k) arr.push_back(radix.p(k));
    return arr;
}

RadixSequence radix_from_json(const json& j) {
    std::vector<std::int64_t> p;
    for (const auto& v : j) p.push_back(v.get<std::int64_t>());
    return RadixSequence(p);
}

json to_json(const GridFunction& f) {
    return {{"radix", to_json(f.radix)}, {"values", complex_vector_to_json(f.values)}};
}

GridFunction grid_from_json(const json& j) {
    return GridFunction(radix_from_json(j.at("radix")),
                        complex_vector_from_json(j.at("values")));
}

json to_json(const Spectrum& s) {
    return {{"radix", to_json(s.radix)}, {"coeffs", complex_vector_to_json(s.coeffs)}};
}

Spectrum spectrum_from_json(const json& j) {
    return Spectrum(radix_from_json(j.at("radix")), complex_vector_from_json(j.at("coeffs")));
}

json to_json(const GPlan& plan) {
    json arr = json::array();
    for (const GPlanRow& row : plan) {
        json blocks = json::array();
        for (auto [j, beta] : row.blocks) blocks.push_back({j, beta});
        arr.push_back({{"b", row.b}, {"blocks", blocks}});
    }
    return arr;
}

GPlan gplan_from_json(const json& j) {
    GPlan plan;
    for (const auto& row : j) {
        GPlanRow out;
        out.b = row.at("b").get<std::int64_t>();
        for (const auto& block : row.at("blocks"))
            out.blocks.emplace_back(block.at(0).get<int>(), block.at(1).get<std::int64_t>());
        plan.push_back(std::move(out));
    }
    return plan;
}

json to_json(const SmoothMultiplierSpec& spec) {
    return {{"t", spec.level}, {"kappa", spec.kappa}, {"r", spec.r}, {"n_ref", spec.n_ref}};
}

SmoothMultiplierSpec smooth_spec_from_json(const json& j) {
    return {j.at("t").get<int>(), j.at("kappa").get<std::int64_t>(), j.at("r").get<int>(),
            j.at("n_ref").get<std::int64_t>()};
}

json to_json(const DecompositionPieces& pieces) {
    json j{{"a", pieces.a}, {"t", pieces.t}};
    j["J"] = json::array();
    for (const PieceTemplate& piece : pieces.J) j["J"].push_back(piece_to_json(piece));
    j["Jt"] = json::array();
    for (const PieceTemplate& piece : pieces.Jt) j["Jt"].push_back(piece_to_json(piece));
    j["Jtail"] = pieces.Jtail ? piece_to_json(*pieces.Jtail) : json();
    return j;
}

json to_json(const CZResult& result, const CZCheck& check) {
    json selection = json::array();
    for (const GeneralizedInterval& omega : result.selection)
        selection.push_back(
            {{"k", omega.k}, {"parent", omega.parent}, {"start", omega.start}, {"len", omega.len}});
    return {{"lambda", result.lambda},
            {"selection", selection},
            {"gram_fallbacks", result.gram_fallbacks},
            {"constants",
             {{"split_error", check.split_error},
              {"off_support_error", check.off_support_error},
              {"cancel_moment", check.cancel_moment},
              {"cancel_rademacher", check.cancel_rademacher},
              {"measure_sum", check.measure_sum},
              {"measure_bound", check.measure_bound},
              {"c_good_sup", check.c_good_sup},
              {"c_good_l1", check.c_good_l1},
              {"c_bad_l1", check.c_bad_l1},
              {"structure_ok", check.structure_ok}}}};
}

}  // namespace vlp
