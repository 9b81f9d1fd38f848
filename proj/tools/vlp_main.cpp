#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vlp/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> budget_overrides;
};

vlp::ExperimentConfig load_config(const CommonOpts& opts) {
    vlp::ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw std::runtime_error("cannot open config: " + opts.config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = vlp::config_from_json_text(buf.str());
    }
    if (opts.seed_set) cfg.seed = opts.seed;
    if (!opts.out.empty()) cfg.out = opts.out;
    for (const std::string& override_text : opts.budget_overrides) {
        auto eq = override_text.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--budget expects name=value, got: " + override_text);
        cfg.budgets[override_text.substr(0, eq)] = std::stod(override_text.substr(eq + 1));
    }
    return cfg;
}

int finish(const vlp::Report& report, const vlp::ExperimentConfig& cfg) {
    if (!cfg.out.empty()) {
        vlp::emit(report, cfg.out);
        std::cout << report.experiment << ": wrote " << cfg.out << ".csv and " << cfg.out
                  << ".json\n";
    } else {
        std::ostringstream csv, summary;
        vlp::emit(report, csv, summary);
        std::cout << summary.str();
    }
    for (const auto& [key, value] : report.summary)
        std::cout << report.experiment << "  " << key << " = " << value << '\n';
    std::cout << report.experiment << (report.pass ? "  PASS" : "  FAIL") << '\n';
    return report.pass ? 0 : 2;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON experiment configuration");
    cmd->add_option("--out", opts.out, "output base path (writes <out>.csv, <out>.json)");
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--budget", opts.budget_overrides, "override a budget, name=value");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vilenkin Littlewood-Paley numerical laboratory"};
    app.require_subcommand(1);

    CommonOpts opts;
    using Runner = vlp::Report (*)(const vlp::ExperimentConfig&);
    struct Command {
        const char* name;
        const char* help;
        Runner runner;
    };
    const std::vector<Command> commands = {
        {"theorem1", "square-function norm sweep across radix sequences", &vlp::run_theorem1},
        {"subineq", "norms of the four decomposition square functions", &vlp::run_subinequalities},
        {"refine", "two-sided comparison against the Whitney refinement", &vlp::run_refinement},
        {"cz", "randomized Calderon-Zygmund decomposition conditions", &vlp::run_cz},
        {"cyclic", "kernel decay, exponential sums, cyclic-group bounds", &vlp::run_cyclic},
        {"theorem2", "weighted Littlewood-Paley inequality on Z_p", &vlp::run_theorem2}};

    std::map<std::string, Runner> dispatch;
    for (const Command& command : commands) {
        CLI::App* cmd = app.add_subcommand(command.name, command.help);
        add_common(cmd, opts);
        dispatch[command.name] = command.runner;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        vlp::ExperimentConfig cfg = load_config(opts);
        return finish(dispatch[name](cfg), cfg);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
