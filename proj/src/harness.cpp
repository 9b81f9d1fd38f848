#include "vlp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vlp/json_io.hpp"
#include "vlp/rng.hpp"
#include "vlp/transform.hpp"

namespace vlp {

namespace {

std::string radix_label(const std::vector<std::int64_t>& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(p[i]);
    }
    return out;
}

GridFunction random_grid(const RadixSequence& radix, Rng& rng) {
    GridFunction f(radix);
    for (cd& v : f.values) v = rng.cnormal();
    return f;
}

}  // namespace

std::string config_to_json_text(const ExperimentConfig& cfg) {
    json j;
    j["radix"] = cfg.radix;
    json ivs = json::array();
    for (const auto& iv : cfg.intervals) ivs.push_back({iv[0], iv[1]});
    j["intervals"] = ivs;
    j["random_count"] = cfg.random_count;
    j["trials"] = cfg.trials;
    j["p_exponents"] = cfg.p_exponents;
    j["restarts"] = cfg.restarts;
    j["iterations"] = cfg.iterations;
    j["budgets"] = cfg.budgets;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    return j.dump();
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    if (j.contains("radix")) cfg.radix = j["radix"].get<std::vector<std::int64_t>>();
    if (j.contains("intervals"))
        for (const auto& iv : j["intervals"])
            cfg.intervals.push_back({iv.at(0).get<std::int64_t>(), iv.at(1).get<std::int64_t>()});
    if (j.contains("random_count")) cfg.random_count = j["random_count"].get<int>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("p_exponents")) cfg.p_exponents = j["p_exponents"].get<std::vector<double>>();
    if (j.contains("restarts")) cfg.restarts = j["restarts"].get<int>();
    if (j.contains("iterations")) cfg.iterations = j["iterations"].get<int>();
    if (j.contains("budgets"))
        cfg.budgets = j["budgets"].get<std::map<std::string, double>>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    return cfg;
}

std::vector<IntervalZ> random_disjoint_intervals(std::int64_t M, int count, std::uint64_t seed,
                                                 std::uint64_t stream) {
    Rng rng = Rng::stream(seed, 0x9d1f0000ULL + stream);
    std::vector<IntervalZ> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < 400 * count) {
        ++attempts;
        std::int64_t a = rng.uniform_int(0, M - 2);
        std::int64_t b = rng.uniform_int(a + 1, M);
        bool clash = false;
        for (const IntervalZ& iv : out)
            if (a < iv.b && iv.a < b) {
                clash = true;
                break;
            }
        if (!clash) out.push_back(IntervalZ(a, b));
    }
    std::sort(out.begin(), out.end(), [](const IntervalZ& u, const IntervalZ& v) { return u.a < v.a; });
    return out;
}

NormEstimate estimate_norm(const std::vector<FrequencySet>& family, const RadixSequence& radix,
                           double p, int restarts, int iterations, std::uint64_t seed) {
    if (p < 2.0) throw std::domain_error("estimate_norm: p must be >= 2");
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (family[i].intersects(family[j]))
                throw std::invalid_argument("estimate_norm: family members overlap");
    const std::int64_t M = radix.total();
    const double pprime = p / (p - 1.0);

    std::vector<FrequencySet> live;
    for (const FrequencySet& A : family)
        if (!A.empty()) live.push_back(A);

    NormEstimate best{0.0, GridFunction(radix), {}};
    for (cd& v : best.argmax.values) v = 1.0;
    if (live.empty()) return best;

    double best_val = -1.0;
    for (int rs = 0; rs < restarts; ++rs) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rs));
        GridFunction f = random_grid(radix, rng);
        std::vector<double> trace;
        double prev = -1.0;
        for (int it = 0; it < iterations; ++it) {
            double nrm = lp_norm(f, p);
            if (nrm <= 0.0) break;
            for (cd& v : f.values) v /= nrm;

            Spectrum spec = forward_fast(f);
            std::vector<GridFunction> comps;
            comps.reserve(live.size());
            std::vector<double> sq(static_cast<std::size_t>(M), 0.0);
            for (const FrequencySet& A : live) {
                comps.push_back(inverse_fast(project(spec, A)));
                const GridFunction& g = comps.back();
                for (std::int64_t x = 0; x < M; ++x)
                    sq[static_cast<std::size_t>(x)] += std::norm(g.values[static_cast<std::size_t>(x)]);
            }
            double acc = 0.0;
            for (std::int64_t x = 0; x < M; ++x)
                acc += std::pow(std::sqrt(sq[static_cast<std::size_t>(x)]), p);
            double val = std::pow(acc / static_cast<double>(M), 1.0 / p);
            trace.push_back(val);
            if (val > best_val) {
                best_val = val;
                best.argmax = f;
                best.trace = trace;
            }

            // dual alignment: u = g |g|_{l2}^{p-2}, pull back, re-align in L^{p'}
            Spectrum vspec(radix);
            for (std::size_t s = 0; s < live.size(); ++s) {
                GridFunction u(radix);
                for (std::int64_t x = 0; x < M; ++x) {
                    double G = std::sqrt(sq[static_cast<std::size_t>(x)]);
                    u.values[static_cast<std::size_t>(x)] =
                        G > 0.0 ? comps[s].values[static_cast<std::size_t>(x)] * std::pow(G, p - 2.0)
                                : cd(0.0);
                }
                Spectrum us = project(forward_fast(u), live[s]);
                for (std::int64_t n = 0; n < M; ++n)
                    vspec.coeffs[static_cast<std::size_t>(n)] += us.coeffs[static_cast<std::size_t>(n)];
            }
            GridFunction v = inverse_fast(vspec);
            for (std::int64_t x = 0; x < M; ++x) {
                double a = std::abs(v.values[static_cast<std::size_t>(x)]);
                v.values[static_cast<std::size_t>(x)] =
                    a > 0.0 ? v.values[static_cast<std::size_t>(x)] * std::pow(a, pprime - 2.0)
                            : cd(0.0);
            }
            f = v;
            if (prev >= 0.0 && std::fabs(val - prev) <= 1e-13 * std::max(1.0, val)) break;
            prev = val;
        }
    }
    if (best_val <= 0.0) return best;

    // certificate: the reported value is recomputed from the stored argmax
    GridFunction sf = square_function(best.argmax, live);
    double denom = lp_norm(best.argmax, p);
    best.value = denom > 0.0 ? lp_norm(sf, p) / denom : 0.0;
    return best;
}

// ---------------------------------------------------------------------------
// experiment: theorem1
// ---------------------------------------------------------------------------

namespace {

std::vector<FrequencySet> dyadic_family(std::int64_t M) {
    std::vector<FrequencySet> fam;
    fam.push_back(FrequencySet::range(0, 1));
    for (std::int64_t lo = 1; lo < M; lo *= 2)
        fam.push_back(FrequencySet::range(lo, std::min(lo * 2, M)));
    return fam;
}

std::vector<FrequencySet> template_family(const RadixSequence& radix, std::uint64_t seed,
                                          std::uint64_t stream) {
    auto bases = random_disjoint_intervals(radix.total(), 2, seed, stream);
    std::vector<FrequencySet> fam;
    for (const IntervalZ& base : bases)
        for (const IntervalZ& piece : decompose(base.a, base.b, radix).all_intervals())
            if (!piece.empty()) fam.push_back(FrequencySet::range(piece.a, piece.b));
    return fam;
}

std::vector<FrequencySet> random_family(const RadixSequence& radix, int count, std::uint64_t seed,
                                        std::uint64_t stream) {
    std::vector<FrequencySet> fam;
    for (const IntervalZ& iv : random_disjoint_intervals(radix.total(), count, seed, stream))
        fam.push_back(FrequencySet::range(iv.a, iv.b));
    return fam;
}

}  // namespace

Report run_theorem1(const ExperimentConfig& cfg) {
    Report report;
    report.experiment = "theorem1";
    report.config_echo = config_to_json_text(cfg);
    const double budget = cfg.budget("theorem1", 10.0);
    const double slope_budget = cfg.budget("theorem1_slope", 0.05);

    // M is held near 100 across the sweep so that the regression against
    // log(max p_j) is not confounded by grid size or family count
    const std::vector<std::vector<std::int64_t>> sweep = {
        {2, 2, 2, 2, 2, 2, 2}, {3, 3, 3, 2, 2}, {4, 4, 3, 2}, {5, 5, 4},  {7, 7, 2},
        {11, 3, 3},            {13, 2, 2, 2},   {17, 3, 2},   {19, 5},    {23, 2, 2},
        {29, 2, 2},            {31, 3},         {37, 3},      {41, 2},    {43, 2},
        {47, 2},               {50, 2}};

    std::vector<std::pair<double, double>> points;  // (log maxp, estimate)
    double max_value = 0.0;
    std::uint64_t stream = 0;
    for (const auto& pvec : sweep) {
        RadixSequence radix(pvec);
        std::int64_t maxp = *std::max_element(pvec.begin(), pvec.end());
        struct Fam {
            const char* name;
            std::vector<FrequencySet> sets;
        };
        std::vector<Fam> fams;
        fams.push_back({"dyadic", dyadic_family(radix.total())});
        fams.push_back({"template", template_family(radix, cfg.seed, 1)});
        fams.push_back({"random", random_family(radix, 5, cfg.seed, 2)});
        fams.push_back({"random2", random_family(radix, 8, cfg.seed, 3)});
        stream += 1;
        for (const Fam& fam : fams)
            for (double p : cfg.p_exponents) {
                NormEstimate est = estimate_norm(fam.sets, radix, p, cfg.restarts,
                                                 cfg.iterations, cfg.seed + stream);
                ++stream;
                CaseRow row;
                row.label = "radix " + radix_label(pvec) + " " + fam.name;
                row.p = p;
                row.value = est.value;
                row.threshold = budget;
                row.pass = est.value <= budget;
                row.extras = {{"maxp", static_cast<double>(maxp)}};
                report.rows.push_back(row);
                points.emplace_back(std::log(static_cast<double>(maxp)), est.value);
                max_value = std::max(max_value, est.value);
            }
    }

    double xb = 0.0, yb = 0.0;
    for (auto [x, y] : points) {
        xb += x;
        yb += y;
    }
    xb /= static_cast<double>(points.size());
    yb /= static_cast<double>(points.size());
    double num = 0.0, den = 0.0;
    for (auto [x, y] : points) {
        num += (x - xb) * (y - yb);
        den += (x - xb) * (x - xb);
    }
    double slope = den > 0.0 ? num / den : 0.0;

    report.pass = max_value <= budget && std::fabs(slope) <= slope_budget;
    report.summary = {{"max_value", max_value},
                      {"max_ratio", max_value / budget},
                      {"slope", slope},
                      {"cases", static_cast<double>(report.rows.size())}};
    return report;
}

// ---------------------------------------------------------------------------
// experiment: subineq
// ---------------------------------------------------------------------------

namespace {

std::vector<IntervalZ> configured_intervals(const ExperimentConfig& cfg,
                                            const RadixSequence& radix) {
    std::vector<IntervalZ> out;
    if (!cfg.intervals.empty()) {
        for (const auto& iv : cfg.intervals) out.push_back(IntervalZ(iv[0], iv[1]));
        std::sort(out.begin(), out.end(),
                  [](const IntervalZ& u, const IntervalZ& v) { return u.a < v.a; });
        for (std::size_t i = 1; i < out.size(); ++i)
            if (out[i].a < out[i - 1].b)
                throw std::invalid_argument("config: intervals must be pairwise disjoint");
        if (!out.empty() && out.back().b > radix.total())
            throw std::invalid_argument("config: interval exceeds [0, M)");
        return out;
    }
    return random_disjoint_intervals(radix.total(), cfg.random_count, cfg.seed, 7);
}

}  // namespace

Report run_subinequalities(const ExperimentConfig& cfg) {
    Report report;
    report.experiment = "subineq";
    report.config_echo = config_to_json_text(cfg);
    const double budget = cfg.budget("subineq", 10.0);

    RadixSequence radix(cfg.radix);
    auto intervals = configured_intervals(cfg, radix);

    std::vector<FrequencySet> singletons, jgroups, jtgroups, tails;
    for (const IntervalZ& iv : intervals) {
        DecompositionPieces pieces = decompose(iv.a, iv.b, radix);
        singletons.push_back(FrequencySet::single(pieces.a));
        std::vector<IntervalZ> jl, jtl;
        for (const PieceTemplate& piece : pieces.J) jl.push_back(piece.iv);
        for (const PieceTemplate& piece : pieces.Jt) jtl.push_back(piece.iv);
        if (!jl.empty()) jgroups.push_back(FrequencySet::from_intervals(jl));
        if (!jtl.empty()) jtgroups.push_back(FrequencySet::from_intervals(jtl));
        if (pieces.Jtail) tails.push_back(FrequencySet::range(pieces.Jtail->iv.a, pieces.Jtail->iv.b));
    }

    struct Exp {
        const char* name;
        const std::vector<FrequencySet>* fam;
        bool parseval_cap;
    };
    const std::vector<Exp> exps = {{"singletons", &singletons, true},
                                   {"J-groups", &jgroups, false},
                                   {"Jt-groups", &jtgroups, false},
                                   {"Jt-tail", &tails, false}};

    double max_value = 0.0;
    std::uint64_t stream = 100;
    for (const Exp& e : exps)
        for (double p : cfg.p_exponents) {
            NormEstimate est =
                estimate_norm(*e.fam, radix, p, cfg.restarts, cfg.iterations, cfg.seed + stream);
            ++stream;
            CaseRow row;
            row.label = e.name;
            row.p = p;
            row.value = est.value;
            row.threshold = e.parseval_cap ? std::min(budget, 1.0 + 1e-6) : budget;
            row.pass = est.value <= row.threshold;
            row.extras = {{"sets", static_cast<double>(e.fam->size())}};
            report.rows.push_back(row);
            max_value = std::max(max_value, est.value);
        }

    report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                              [](const CaseRow& r) { return r.pass; });
    report.summary = {{"max_value", max_value},
                      {"max_ratio", max_value / budget},
                      {"cases", static_cast<double>(report.rows.size())}};
    return report;
}

// ---------------------------------------------------------------------------
// experiment: refine
// ---------------------------------------------------------------------------

Report run_refinement(const ExperimentConfig& cfg) {
    Report report;
    report.experiment = "refine";
    report.config_echo = config_to_json_text(cfg);
    const double budget = cfg.budget("refine", 8.0);

    RadixSequence radix(cfg.radix);
    auto intervals = configured_intervals(cfg, radix);
    std::vector<DecompositionPieces> decomps;
    for (const IntervalZ& iv : intervals) decomps.push_back(decompose(iv.a, iv.b, radix));
    auto groups = reindex(decomps);

    std::vector<FrequencySet> coarse, refined;
    for (const auto& [key, ranges] : groups)
        for (const DigitRange& range : ranges) {
            coarse.push_back(FrequencySet::range(range.iv.a, range.iv.b));
            for (const RefinedPiece& piece :
                 refine_digit_range(radix, key.level, key.kappa, range.alpha, range.beta))
                refined.push_back(FrequencySet::range(piece.iv.a, piece.iv.b));
        }
    if (coarse.empty()) {
        // no J~ pieces (e.g. Walsh radix); synthesize one digit-range group
        int t = 0;
        for (int k = 1; k < radix.levels(); ++k)
            if (radix.p(k) > radix.p(t)) t = k;
        std::int64_t pt = radix.p(t);
        std::int64_t alpha = pt >= 4 ? 1 : 0;
        std::int64_t beta = pt - 1;
        coarse.push_back(
            FrequencySet::range(alpha * radix.m(t), (beta + 1) * radix.m(t)));
        for (const RefinedPiece& piece : refine_digit_range(radix, t, 0, alpha, beta))
            refined.push_back(FrequencySet::range(piece.iv.a, piece.iv.b));
    }

    const int draws = cfg.trials > 0 ? cfg.trials : 20;
    double worst = 1.0;
    for (double p : cfg.p_exponents) {
        double lo = 1e300, hi = 0.0;
        int valid = 0;
        for (int i = 0; i < draws; ++i) {
            Rng rng = Rng::stream(cfg.seed, 0xaef0 + static_cast<std::uint64_t>(i) * 31 +
                                                static_cast<std::uint64_t>(p * 8.0));
            GridFunction f = random_grid(radix, rng);
            double denom = lp_norm(square_function(f, coarse), p);
            if (denom <= 0.0) continue;
            ++valid;
            double ratio = lp_norm(square_function(f, refined), p) / denom;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        double deviation =
            valid == 0 ? 1e300 : std::max(hi, lo > 0.0 ? 1.0 / lo : 1e300);
        CaseRow row;
        row.label = "two-sided";
        row.p = p;
        row.value = deviation;
        row.threshold = budget;
        row.pass = deviation <= budget;
        row.extras = {{"min_ratio", lo}, {"max_ratio", hi}};
        report.rows.push_back(row);
        worst = std::max(worst, deviation);
    }

    // single-subinterval case: the refinement of a one-digit range is the
    // range itself, so the two square functions coincide
    {
        int t = radix.levels() - 1;
        std::vector<FrequencySet> one = {FrequencySet::range(0, radix.m(t))};
        auto pieces = refine_digit_range(radix, t, 0, 0, 0);
        std::vector<FrequencySet> oneref;
        for (const RefinedPiece& piece : pieces)
            oneref.push_back(FrequencySet::range(piece.iv.a, piece.iv.b));
        Rng rng = Rng::stream(cfg.seed, 0x51e);
        GridFunction f = random_grid(radix, rng);
        double a = lp_norm(square_function(f, one), 2.5);
        double b = lp_norm(square_function(f, oneref), 2.5);
        CaseRow row;
        row.label = "single-subinterval";
        row.p = 2.5;
        row.value = std::fabs(b / a - 1.0);
        row.threshold = 1e-9;
        row.pass = row.value <= row.threshold;
        report.rows.push_back(row);
    }

    report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                              [](const CaseRow& r) { return r.pass; });
    report.summary = {{"max_deviation", worst},
                      {"max_ratio", worst / budget},
                      {"cases", static_cast<double>(report.rows.size())}};
    return report;
}

// ---------------------------------------------------------------------------
// experiment: cz
// ---------------------------------------------------------------------------

Report run_cz(const ExperimentConfig& cfg) {
    Report report;
    report.experiment = "cz";
    report.config_echo = config_to_json_text(cfg);
    const double budget = cfg.budget("cz", 64.0);
    const int trials = cfg.trials > 0 ? cfg.trials : 200;

    const std::vector<std::vector<std::int64_t>> pool = {
        {2, 3, 5, 2}, {3, 4, 5}, {2, 2, 2, 2, 2, 2}, {5, 5, 3}, {4, 3, 2, 2}};

    double max_constant = 0.0, max_cancel = 0.0;
    bool all_exact = true;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::stream(cfg.seed, 0xc2000 + static_cast<std::uint64_t>(trial));
        RadixSequence radix(pool[static_cast<std::size_t>(trial) % pool.size()]);
        const std::int64_t M = radix.total();
        const std::size_t S = 1 + static_cast<std::size_t>(trial % 3);

        VectorGridFunction h(radix, S);
        for (std::size_t s = 0; s < S; ++s) {
            for (cd& v : h.components[s]) v = rng.cnormal();
            std::int64_t spikes = rng.uniform_int(0, M / 10);
            for (std::int64_t i = 0; i < spikes; ++i)
                h.components[s][static_cast<std::size_t>(rng.uniform_int(0, M - 1))] *=
                    rng.uniform(5.0, 50.0);
        }
        double h1 = lp_norm(h, 1.0);
        for (std::size_t s = 0; s < S; ++s)
            for (cd& v : h.components[s]) v /= h1;

        double lambda = trial % 10 == 0 ? 1.0 : std::pow(10.0, rng.uniform(0.0, 1.3));
        std::vector<std::vector<std::int64_t>> gamma(static_cast<std::size_t>(radix.levels()));
        for (int k = 0; k < radix.levels(); ++k) {
            gamma[static_cast<std::size_t>(k)].resize(S);
            for (std::size_t s = 0; s < S; ++s)
                gamma[static_cast<std::size_t>(k)][s] = rng.uniform_int(0, radix.p(k) - 1);
        }

        CZResult result = cz_decompose(h, lambda, gamma);
        CZCheck check = cz_verify(h, result);

        double cancel = std::max(check.cancel_moment, check.cancel_rademacher);
        bool exact = check.split_error <= 1e-10 && check.off_support_error <= 1e-10 &&
                     cancel <= 1e-10 && check.structure_ok &&
                     check.measure_sum <= check.measure_bound * (1.0 + 1e-12);
        double constant = std::max({check.c_good_sup, check.c_good_l1, check.c_bad_l1});

        CaseRow row;
        row.label = "trial " + std::to_string(trial) + " radix " +
                    radix_label(pool[static_cast<std::size_t>(trial) % pool.size()]);
        row.p = 1.0;
        row.value = constant;
        row.threshold = budget;
        row.pass = exact && constant <= budget;
        row.extras = {{"lambda", lambda},
                      {"selected", static_cast<double>(result.selection.size())},
                      {"cancel", cancel},
                      {"measure_slack", check.measure_bound - check.measure_sum},
                      {"fallbacks", static_cast<double>(result.gram_fallbacks)}};
        report.rows.push_back(row);
        max_constant = std::max(max_constant, constant);
        max_cancel = std::max(max_cancel, cancel);
        all_exact = all_exact && exact;
    }

    // companion sweep: the maximal-function lower bound through the sharp
    // function
    const double sharp_budget = cfg.budget("sharp", 64.0);
    double max_sharp = 0.0;
    for (int trial = 0; trial < std::min(trials, 20); ++trial) {
        Rng rng = Rng::stream(cfg.seed, 0xc9000 + static_cast<std::uint64_t>(trial));
        RadixSequence radix(pool[static_cast<std::size_t>(trial) % pool.size()]);
        VectorGridFunction g(radix, 2);
        for (auto& comp : g.components)
            for (cd& v : comp) v = rng.cnormal();
        SharpMaximalReport rep = sharp_vs_maximal_experiment(g, 4.0);
        max_sharp = std::max(max_sharp, rep.ratio);
        CaseRow row;
        row.label = "sharp vs maximal";
        row.p = 4.0;
        row.value = rep.ratio;
        row.threshold = sharp_budget;
        row.pass = rep.ratio <= sharp_budget;
        row.extras = {{"lhs", rep.lhs}, {"rhs", rep.rhs}};
        report.rows.push_back(row);
        all_exact = all_exact && row.pass;
    }

    report.pass = all_exact && max_constant <= budget;
    report.summary = {{"max_constant", max_constant},
                      {"max_ratio", max_constant / budget},
                      {"max_cancel", max_cancel},
                      {"max_sharp_ratio", max_sharp},
                      {"trials", static_cast<double>(trials)}};
    return report;
}

// ---------------------------------------------------------------------------
// experiment: cyclic (lemma 4, exponential sum, cotangent machinery)
// ---------------------------------------------------------------------------

namespace {

int max_scale(std::int64_t p) {
    int r = 0;
    while (std::ldexp(1.0, r + 1) < static_cast<double>(p)) ++r;
    return r;  // largest r with 2^r < p, so some n_ref exists
}

// fixed fractional grid of kernel references, the same relative positions
// at every modulus
std::vector<KernelSpec> matched_spec_grid(std::int64_t p) {
    std::vector<KernelSpec> specs;
    for (int r = 0; r <= max_scale(p); ++r) {
        double band = static_cast<double>(p) / std::ldexp(1.0, r);
        for (double f : {0.01, 0.26, 0.49, 0.51, 0.74, 0.99}) {
            auto n_ref = static_cast<std::int64_t>(std::ceil(f * band));
            if (n_ref < 1 || static_cast<double>(n_ref) >= band) continue;
            bool dup = false;
            for (const KernelSpec& other : specs)
                dup = dup || (other.r == r && other.n_ref == n_ref);
            if (!dup) specs.push_back({p, r, n_ref});
        }
    }
    return specs;
}

// lhs maximized over the mixture: top eigenvalue of the Gram matrix of the
// kernel differences over the annulus, by power iteration
double optimal_mixture_ratio(std::int64_t p, std::int64_t d, int k,
                             const std::vector<KernelSpec>& specs) {
    auto band = annulus(0, d, k, p);
    if (band.empty() || specs.empty()) return 0.0;
    const std::size_t n = specs.size();
    std::vector<std::vector<cd>> diff(n, std::vector<cd>(band.size()));
    for (std::size_t i = 0; i < n; ++i) {
        const KernelSpec& spec = specs[i];
        double step = std::ldexp(1.0, spec.r);
        for (std::size_t yi = 0; yi < band.size(); ++yi) {
            std::int64_t y = band[yi];
            double ang = -2.0 * std::numbers::pi * step * static_cast<double>(spec.n_ref) *
                         static_cast<double>(y) / static_cast<double>(p);
            diff[i][yi] = cd(std::cos(ang), std::sin(ang)) *
                          (psi_periodic(p, spec.r, d - y) - psi_periodic(p, spec.r, -y)) /
                          static_cast<double>(p);
        }
    }
    std::vector<std::vector<cd>> gram(n, std::vector<cd>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cd acc = 0.0;
            for (std::size_t yi = 0; yi < band.size(); ++yi)
                acc += diff[i][yi] * std::conj(diff[j][yi]);
            gram[i][j] = acc;
        }
    std::vector<cd> v(n, cd(1.0, 0.3));
    double lam = 0.0;
    for (int it = 0; it < 150; ++it) {
        std::vector<cd> w(n, 0.0);
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) w[i] += gram[i][j] * v[j];
            nrm += std::norm(w[i]);
        }
        nrm = std::sqrt(nrm);
        if (nrm <= 0.0) return 0.0;
        lam = nrm;
        for (cd& x : w) x /= nrm;
        v = w;
    }
    return lam * std::pow(2.0, 5.0 * static_cast<double>(k) / 3.0) * static_cast<double>(d);
}

}  // namespace

Report run_cyclic(const ExperimentConfig& cfg) {
    Report report;
    report.experiment = "cyclic";
    report.config_echo = config_to_json_text(cfg);

    const double a_budget = cfg.budget("lemma4_A", 32.0);
    const double stability_budget = cfg.budget("lemma4_stability", 2.0);
    const double expsum_budget = cfg.budget("expsum", 16.0);
    const double hilbert_budget = cfg.budget("hilbert", 16.0);
    const double tnorm_budget = cfg.budget("tnorm", 40.0);
    const double gfsharp_budget = cfg.budget("gfsharp", 64.0);

    // --- lemma 4 decay sweep ---------------------------------------------
    const std::vector<std::int64_t> ps = {16, 64, 256, 1024, 4096};
    const int random_trials = cfg.trials > 0 ? cfg.trials : 100;
    std::vector<double> fitted;        // per p, over the matched probe set
    std::vector<double> fitted_all;    // per p, over every trial
    for (std::int64_t p : ps) {
        const int rmax = max_scale(p);
        double max_ratio = 0.0, probe_ratio = 0.0;
        int counted = 0;
        auto run_trial = [&](std::int64_t x, std::int64_t z, int k,
                             const std::vector<cd>& lambda, const std::vector<KernelSpec>& specs,
                             bool probe) {
            Lemma4Result res = lemma4_check(x, z, k, lambda, specs);
            double ratio = res.scale > 0.0 ? res.lhs / res.scale : 0.0;
            max_ratio = std::max(max_ratio, ratio);
            if (probe) probe_ratio = std::max(probe_ratio, ratio);
            ++counted;
            CaseRow row;
            row.label = "lemma4";
            row.p = static_cast<double>(p);
            row.value = ratio;
            row.threshold = a_budget * a_budget;
            row.pass = ratio <= row.threshold;
            row.extras = {{"k", static_cast<double>(k)},
                          {"r", static_cast<double>(specs.front().r)},
                          {"dist", static_cast<double>(dist_p(x, z, p))},
                          {"lhs", res.lhs},
                          {"bound", res.scale},
                          {"probe", probe ? 1.0 : 0.0}};
            report.rows.push_back(row);
        };

        // matched probes: the shells k in {1,2} and the fractional spec grid
        // exist at every p in the sweep, and the mixture is optimized, so
        // the per-p fit over these probes is a like-for-like quantity
        auto grid = matched_spec_grid(p);
        for (std::int64_t d : {1, 2})
            for (int k : {1, 2}) {
                if (std::ldexp(1.0, k) * static_cast<double>(d) >=
                    static_cast<double>(p) / 2.0)
                    continue;
                double ratio = optimal_mixture_ratio(p, d, k, grid);
                probe_ratio = std::max(probe_ratio, ratio);
                max_ratio = std::max(max_ratio, ratio);
                ++counted;
                CaseRow row;
                row.label = "lemma4";
                row.p = static_cast<double>(p);
                row.value = ratio;
                row.threshold = a_budget * a_budget;
                row.pass = ratio <= row.threshold;
                row.extras = {{"k", static_cast<double>(k)},
                              {"dist", static_cast<double>(d)},
                              {"probe", 1.0}};
                report.rows.push_back(row);
            }

        for (int trial = 0; trial < random_trials; ++trial) {
            Rng rng = Rng::stream(cfg.seed, 0x4000 + static_cast<std::uint64_t>(p) * 131 +
                                                static_cast<std::uint64_t>(trial));
            std::int64_t d = rng.uniform_int(1, 4);
            auto kmax = static_cast<int>(
                std::floor(std::log2(static_cast<double>(p) / (2.0 * static_cast<double>(d)))));
            if (kmax < 1) continue;
            int k = static_cast<int>(rng.uniform_int(1, kmax));
            std::int64_t x = rng.uniform_int(0, p - 1);
            std::int64_t z = (x + d) % p;
            bool low_band = trial % 2 == 0;
            std::vector<KernelSpec> specs;
            std::vector<cd> lambda;
            int want = static_cast<int>(rng.uniform_int(1, 6));
            for (int i = 0; i < want && static_cast<int>(specs.size()) < want;) {
                int r = static_cast<int>(rng.uniform_int(0, rmax));
                double band = static_cast<double>(p) / std::ldexp(1.0, r);
                std::int64_t lo = low_band ? 1 : static_cast<std::int64_t>(band / 2.0) + 1;
                auto hi = low_band ? static_cast<std::int64_t>(band / 2.0)
                                   : static_cast<std::int64_t>(std::ceil(band)) - 1;
                if (lo > hi) {
                    ++i;
                    continue;
                }
                KernelSpec spec{p, r, rng.uniform_int(lo, hi)};
                bool dup = false;
                for (const KernelSpec& other : specs)
                    dup = dup || (other.r == spec.r && other.n_ref == spec.n_ref);
                if (!dup) {
                    specs.push_back(spec);
                    lambda.push_back(rng.cnormal());
                }
                ++i;
            }
            if (specs.empty()) continue;
            run_trial(x, z, k, lambda, specs, false);
        }
        fitted.push_back(std::sqrt(probe_ratio));
        fitted_all.push_back(std::sqrt(max_ratio));
        CaseRow row;
        row.label = "lemma4 fitted A";
        row.p = static_cast<double>(p);
        row.value = std::sqrt(max_ratio);
        row.threshold = a_budget;
        row.pass = row.value <= a_budget;
        row.extras = {{"trials", static_cast<double>(counted)},
                      {"A_probe", std::sqrt(probe_ratio)}};
        report.rows.push_back(row);
    }
    {
        // stability is judged on the matched probes; the all-trial fit is
        // reported alongside (its k-range grows with p, so it is not a
        // like-for-like comparison)
        double amax = *std::max_element(fitted.begin(), fitted.end());
        double amin = *std::min_element(fitted.begin(), fitted.end());
        CaseRow row;
        row.label = "lemma4 A stability";
        row.value = amin > 0.0 ? amax / amin : 1e300;
        row.threshold = stability_budget;
        row.pass = row.value <= stability_budget;
        row.extras = {{"A_max", amax},
                      {"A_min", amin},
                      {"A_all_max", *std::max_element(fitted_all.begin(), fitted_all.end())}};
        report.rows.push_back(row);
    }

    // --- exponential-sum lemma --------------------------------------------
    {
        const std::vector<std::int64_t> eps = {32, 128, 512, 1024, 4096};
        double max_c = 0.0, max_mod = 0.0;
        const int trials = cfg.trials > 0 ? cfg.trials : 100;
        for (int trial = 0; trial < trials; ++trial) {
            Rng rng = Rng::stream(cfg.seed, 0x5000 + static_cast<std::uint64_t>(trial));
            std::int64_t p = eps[static_cast<std::size_t>(trial) % eps.size()];
            int r = static_cast<int>(rng.uniform_int(0, std::max(0, max_scale(p) - 1)));
            double band = static_cast<double>(p) / std::ldexp(1.0, r);
            bool low_band = trial % 2 == 0;
            std::int64_t lo = low_band ? 1 : static_cast<std::int64_t>(band / 2.0) + 1;
            auto hi = low_band ? static_cast<std::int64_t>(band / 2.0)
                               : static_cast<std::int64_t>(std::ceil(band)) - 1;
            if (lo > hi) continue;
            std::vector<std::int64_t> js;
            std::vector<cd> lambda;
            int want = static_cast<int>(rng.uniform_int(1, std::min<std::int64_t>(8, hi - lo + 1)));
            while (static_cast<int>(js.size()) < want) {
                std::int64_t j = rng.uniform_int(lo, hi);
                if (std::find(js.begin(), js.end(), j) == js.end()) {
                    js.push_back(j);
                    lambda.push_back(rng.cnormal());
                }
            }
            auto window = static_cast<std::int64_t>(band);
            std::int64_t a = rng.uniform_int(0, p - 1);
            ExpSumResult res = expsum_bound_check(p, r, a, a + window - 1, js, lambda);
            double c = res.scale > 0.0 ? res.lhs / res.scale : 0.0;
            max_c = std::max(max_c, c);
            CaseRow row;
            row.label = "expsum";
            row.p = static_cast<double>(p);
            row.value = c;
            row.threshold = expsum_budget;
            row.pass = c <= expsum_budget;
            row.extras = {{"r", static_cast<double>(r)},
                          {"lhs", res.lhs},
                          {"bound", res.scale},
                          {"terms", static_cast<double>(js.size())}};
            report.rows.push_back(row);
            // the inner geometric sum stays below 1 inside the band
            if (js.size() >= 2)
                max_mod = std::max(max_mod, geometric_window_modulus(p, r, js[0] - js[1]));
        }
        CaseRow row;
        row.label = "expsum geometric modulus";
        row.value = max_mod;
        row.threshold = 1.0 + 1e-9;
        row.pass = max_mod <= row.threshold;
        report.rows.push_back(row);
    }

    // --- cotangent tail decay ----------------------------------------------
    {
        double max_c = 0.0;
        const std::vector<std::int64_t> hps = {16, 50, 100, 251};
        for (int trial = 0; trial < 50; ++trial) {
            Rng rng = Rng::stream(cfg.seed, 0x6000 + static_cast<std::uint64_t>(trial));
            std::int64_t p = hps[static_cast<std::size_t>(trial) % hps.size()];
            std::int64_t len = rng.uniform_int(2, std::max<std::int64_t>(2, p / 4));
            std::int64_t m = rng.uniform_int(0, p - len);
            std::vector<cd> g(static_cast<std::size_t>(len));
            cd mean = 0.0;
            for (cd& v : g) {
                v = rng.cnormal();
                mean += v;
            }
            mean /= static_cast<double>(len);
            double l1 = 0.0;
            for (cd& v : g) {
                v -= mean;
                l1 += std::abs(v);
            }
            if (l1 <= 0.0) continue;
            std::int64_t n = m + len - 1;
            for (std::int64_t t = 0; t < p; ++t) {
                std::int64_t dist = dist_p(t, m, p);
                if (t >= m - len && t <= n + len) continue;  // stay outside 3 omega
                if (dist_p(t, n, p) < 2 * len || dist < 2 * len) continue;
                double val = std::abs(hilbert_cot(g, m, t, p, 1.0));
                double bound = static_cast<double>(p) * static_cast<double>(len - 1) * l1 /
                               (static_cast<double>(dist) * static_cast<double>(dist));
                if (bound > 0.0) max_c = std::max(max_c, val / bound);
            }
        }
        CaseRow row;
        row.label = "hilbert cot decay";
        row.value = max_c;
        row.threshold = hilbert_budget;
        row.pass = max_c <= hilbert_budget;
        report.rows.push_back(row);
    }

    // --- L2 bound of the kernel operator family ----------------------------
    {
        double max_c = 0.0;
        for (std::int64_t p : {63, 128}) {
            RadixSequence radix({p, 2});
            std::int64_t alpha = 1, beta = p - 2;
            std::vector<KernelSpec> specs;
            for (const CoverPiece& piece : smooth_cover(radix, 0, 0, alpha, beta))
                if (!piece.single) specs.push_back({p, piece.r, piece.n_ref});
            for (int i = 0; i < 10; ++i) {
                Rng rng = Rng::stream(cfg.seed, 0x7000 + static_cast<std::uint64_t>(p) +
                                                    static_cast<std::uint64_t>(i));
                CyclicFunction g(p);
                double g2 = 0.0;
                for (cd& v : g.values) {
                    v = rng.cnormal();
                    g2 += std::norm(v);
                }
                double t2 = 0.0;
                for (const KernelSpec& spec : specs) {
                    CyclicFunction tg = kernel_apply(spec, g);
                    for (const cd& v : tg.values) t2 += std::norm(v);
                }
                if (g2 > 0.0) max_c = std::max(max_c, t2 / g2);
            }
        }
        CaseRow row;
        row.label = "kernel family L2 bound";
        row.value = max_c;
        row.threshold = tnorm_budget;
        row.pass = max_c <= tnorm_budget;
        report.rows.push_back(row);
    }

    // --- sharp function of the smooth operator vs M_2 ----------------------
    {
        RadixSequence radix({3, 4, 5});
        auto groups = reindex({decompose(7, 49, radix)});
        std::vector<SmoothMultiplierSpec> specs;
        for (const auto& [key, ranges] : groups)
            for (const DigitRange& range : ranges)
                for (const CoverPiece& piece :
                     smooth_cover(radix, key.level, key.kappa, range.alpha, range.beta))
                    if (!piece.single)
                        specs.push_back({key.level, key.kappa, piece.r, piece.n_ref});
        double max_ratio = 0.0;
        for (int i = 0; i < 5; ++i) {
            Rng rng = Rng::stream(cfg.seed, 0x8000 + static_cast<std::uint64_t>(i));
            GridFunction f = random_grid(radix, rng);
            VectorGridFunction gf(radix);
            for (const SmoothMultiplierSpec& spec : specs)
                gf.components.push_back(r_modulate(q_tilde(f, spec), spec).values);
            if (gf.components.empty()) break;
            GridFunction sharp = sharp_maximal(gf);
            GridFunction m2 = maximal(f, 2.0);
            for (std::int64_t x = 0; x < radix.total(); ++x) {
                double denom = std::abs(m2.values[static_cast<std::size_t>(x)]);
                if (denom > 0.0)
                    max_ratio = std::max(
                        max_ratio, std::abs(sharp.values[static_cast<std::size_t>(x)]) / denom);
            }
        }
        CaseRow row;
        row.label = "smooth operator sharp vs M_2";
        row.value = max_ratio;
        row.threshold = gfsharp_budget;
        row.pass = max_ratio <= gfsharp_budget;
        report.rows.push_back(row);
    }

    report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                              [](const CaseRow& r) { return r.pass; });
    double worst = 0.0;
    for (const CaseRow& r : report.rows)
        if (r.threshold > 0.0) worst = std::max(worst, r.value / r.threshold);
    report.summary = {{"max_ratio", worst}, {"cases", static_cast<double>(report.rows.size())}};
    return report;
}

// ---------------------------------------------------------------------------
// experiment: theorem2
// ---------------------------------------------------------------------------

Report run_theorem2(const ExperimentConfig& cfg) {
    Report report;
    report.experiment = "theorem2";
    report.config_echo = config_to_json_text(cfg);
    const double budget = cfg.budget("theorem2", 32.0);
    const std::vector<std::int64_t> ps = {16, 64, 256, 1024};
    const int trials = cfg.trials > 0 ? cfg.trials : 100;

    double max_norm = 0.0, max_unweighted = 0.0;
    for (std::int64_t p : ps) {
        Rng rng = Rng::stream(cfg.seed, 0x9100 + static_cast<std::uint64_t>(p));
        CyclicFunction h(p);
        for (cd& v : h.values) v = rng.cnormal();
        WeightedLpResult res = weighted_lp_experiment(p, 0.0, std::vector<double>(p, 1.0), h);
        max_unweighted = std::max(max_unweighted, res.ratio);
        CaseRow row;
        row.label = "unweighted";
        row.p = static_cast<double>(p);
        row.value = res.ratio;
        row.threshold = 1.0 + 1e-9;
        row.pass = res.ratio <= row.threshold;
        row.extras = {{"arcs", static_cast<double>(res.arc_count)}};
        report.rows.push_back(row);
    }
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::stream(cfg.seed, 0x9200 + static_cast<std::uint64_t>(trial));
        std::int64_t p = ps[static_cast<std::size_t>(trial) % ps.size()];
        double a = rng.uniform(-0.9, 0.9);
        std::vector<double> v(static_cast<std::size_t>(p));
        for (std::int64_t l = 0; l < p; ++l)
            v[static_cast<std::size_t>(l)] =
                std::pow(1.0 + static_cast<double>(dist_p(l, 0, p)), a);
        CyclicFunction h(p);
        for (cd& val : h.values) val = rng.cnormal();
        WeightedLpResult res = weighted_lp_experiment(p, 0.0, v, h);
        double a2 = a2_constant_zp(v);
        double normalized = res.ratio / (a2 * a2);
        max_norm = std::max(max_norm, normalized);
        CaseRow row;
        row.label = "power weight";
        row.p = static_cast<double>(p);
        row.value = normalized;
        row.threshold = budget;
        row.pass = normalized <= budget;
        row.extras = {{"exponent", a},
                      {"ratio", res.ratio},
                      {"a2", a2},
                      {"ratio_over_a2", res.ratio / a2}};
        report.rows.push_back(row);
    }

    report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                              [](const CaseRow& r) { return r.pass; });
    report.summary = {{"max_normalized", max_norm},
                      {"max_ratio", max_norm / budget},
                      {"max_unweighted", max_unweighted},
                      {"trials", static_cast<double>(trials)}};
    return report;
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void emit(const Report& report, std::ostream& csv, std::ostream& summary) {
    std::vector<std::string> extra_keys;
    for (const CaseRow& row : report.rows)
        for (const auto& [key, value] : row.extras)
            if (std::find(extra_keys.begin(), extra_keys.end(), key) == extra_keys.end())
                extra_keys.push_back(key);

    csv << "experiment,case,label,p,value,threshold,pass";
    for (const std::string& key : extra_keys) csv << ',' << key;
    csv << '\n';
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const CaseRow& row = report.rows[i];
        csv << report.experiment << ',' << i << ',' << row.label << ',' << fmt(row.p) << ','
            << fmt(row.value) << ',' << fmt(row.threshold) << ',' << (row.pass ? 1 : 0);
        for (const std::string& key : extra_keys) {
            csv << ',';
            auto it = std::find_if(row.extras.begin(), row.extras.end(),
                                   [&key](const auto& kv) { return kv.first == key; });
            if (it != row.extras.end()) csv << fmt(it->second);
        }
        csv << '\n';
    }

    json j;
    j["experiment"] = report.experiment;
    j["pass"] = report.pass;
    j["rows"] = report.rows.size();
    json s;
    for (const auto& [key, value] : report.summary) s[key] = value;
    j["summary"] = s;
    j["config"] = json::parse(report.config_echo);
    summary << j.dump(2) << '\n';
}

void emit(const Report& report, const std::string& base_path) {
    std::filesystem::path base(base_path);
    if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
    std::ofstream csv(base_path + ".csv");
    std::ofstream summary(base_path + ".json");
    if (!csv || !summary) throw std::runtime_error("emit: cannot open output files");
    emit(report, csv, summary);
    if (!csv.good() || !summary.good()) throw std::runtime_error("emit: write failure");
}

}  // namespace vlp
