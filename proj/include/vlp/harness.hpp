#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "vlp/czmax.hpp"
#include "vlp/cyclic.hpp"
#include "vlp/intervals.hpp"
#include "vlp/spectral.hpp"

namespace vlp {

struct ExperimentConfig {
    std::vector<std::int64_t> radix = {2, 3, 5, 2};
    // explicit [a, b) list; when empty, random_count disjoint intervals are
    // drawn from the seed
    std::vector<std::array<std::int64_t, 2>> intervals;
    int random_count = 4;
    int trials = 0;  // 0 = experiment default
    std::vector<double> p_exponents = {2.0, 4.0, 8.0};
    int restarts = 8;
    int iterations = 40;
    std::map<std::string, double> budgets;
    std::uint64_t seed = 20260808;
    std::string out;

    double budget(const std::string& name, double fallback) const {
        auto it = budgets.find(name);
        return it == budgets.end() ? fallback : it->second;
    }
};

std::string config_to_json_text(const ExperimentConfig& cfg);
ExperimentConfig config_from_json_text(const std::string& text);

/// Lower bound on the L^p -> L^p norm of the square-function operator of
/// a disjoint family, by multi-start dual-norm alignment ascent.  The
/// value is recomputed from the returned certificate, so
/// value == ||S argmax||_p / ||argmax||_p holds by construction.
struct NormEstimate {
    double value = 0.0;
    GridFunction argmax;
    std::vector<double> trace;  // per-iteration values of the winning start
};
NormEstimate estimate_norm(const std::vector<FrequencySet>& family, const RadixSequence& radix,
                           double p, int restarts, int iterations, std::uint64_t seed);

/// Disjoint half-open intervals inside [0, M), drawn by rejection.
std::vector<IntervalZ> random_disjoint_intervals(std::int64_t M, int count, std::uint64_t seed,
                                                 std::uint64_t stream);

struct CaseRow {
    std::string label;
    double p = 0.0;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = true;
    std::vector<std::pair<std::string, double>> extras;
};

struct Report {
    std::string experiment;
    std::vector<CaseRow> rows;
    std::vector<std::pair<std::string, double>> summary;
    bool pass = true;
    std::string config_echo;  // serialized config
};

Report run_theorem1(const ExperimentConfig& cfg);
Report run_subinequalities(const ExperimentConfig& cfg);
Report run_refinement(const ExperimentConfig& cfg);
Report run_cz(const ExperimentConfig& cfg);
Report run_cyclic(const ExperimentConfig& cfg);
Report run_theorem2(const ExperimentConfig& cfg);

/// CSV (one row per case) and JSON summary; byte-stable for a fixed
/// config and seed.
void emit(const Report& report, std::ostream& csv, std::ostream& summary);
/// Writes <base>.csv and <base>.json.
void emit(const Report& report, const std::string& base_path);

}  // namespace vlp
