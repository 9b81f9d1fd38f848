#pragma once

#include <json.hpp>

#include "vlp/czmax.hpp"
#include "vlp/grid.hpp"
#include "vlp/intervals.hpp"
#include "vlp/spectral.hpp"

namespace vlp {

using json = nlohmann::json;

// RadixSequence <-> plain JSON array of integers, e.g. [2,3,5]; the
// format shared with the CLI.
json to_json(const RadixSequence& radix);
RadixSequence radix_from_json(const json& j);

// Complex vectors as arrays of [re, im] pairs.
json to_json(const GridFunction& f);
GridFunction grid_from_json(const json& j);
json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const json& j);

json to_json(const GPlan& plan);
GPlan gplan_from_json(const json& j);

json to_json(const SmoothMultiplierSpec& spec);
SmoothMultiplierSpec smooth_spec_from_json(const json& j);

json to_json(const DecompositionPieces& pieces);

json to_json(const CZResult& result, const CZCheck& check);

}  // namespace vlp
