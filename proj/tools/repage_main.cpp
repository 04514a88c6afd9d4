// Command-line front end: single runs, L1/L2 comparisons, cheater-fraction
// sweeps, and gnuplot script generation for the resulting CSVs.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repage/config.hpp"
#include "repage/engine.hpp"
#include "repage/metrics.hpp"
#include "repage/rng.hpp"

namespace {

using namespace repage;

// Raw flag values; only flags the user actually passed override the
// config file, so the holder keeps strings for the enum-ish ones.
struct SimFlags {
    std::string config_path;
    int n_sellers = 0, n_buyers = 0, turns = 0, stock = 0;
    std::string level, quality_dist;
    double cheater_fraction = 0, epsilon = 0, idk_threshold = 0, question_split = 0,
           good_seller_threshold = 0;
    std::uint64_t seed = 0;
};

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
    cmd->add_option("--config", f.config_path, "Config file (flat key = value)");
    cmd->add_option("--n-sellers", f.n_sellers, "Number of live sellers (default 100)");
    cmd->add_option("--n-buyers", f.n_buyers, "Number of buyers (default 15)");
    cmd->add_option("--turns", f.turns, "Number of turns (default 100)");
    cmd->add_option("--level", f.level, "Scenario level: L1 (image only) or L2 (default)");
    cmd->add_option("--cheater-fraction", f.cheater_fraction,
                    "Fraction of buyers answering deceitfully (default 0)");
    cmd->add_option("--stock", f.stock, "Stock per seller (default 25)");
    cmd->add_option("--epsilon", f.epsilon, "Exploration rate of seller choice (default 0.1)");
    cmd->add_option("--idk-threshold", f.idk_threshold,
                    "Minimum evaluation strength below which answers are I-don't-know "
                    "(default 0.3)");
    cmd->add_option("--question-split", f.question_split,
                    "Probability a question is about a seller (default 0.8)");
    cmd->add_option("--good-seller-threshold", f.good_seller_threshold,
                    "Quality at or above which a seller counts as good (default 75)");
    cmd->add_option("--quality-dist", f.quality_dist,
                    "Seller quality distribution: uniform[:LO,HI] | point:Q | normal:MU,SD");
    cmd->add_option("--seed", f.seed, "Master seed (default 0)");
}

SimConfig build_config(const CLI::App* cmd, const SimFlags& f) {
    SimConfig config;
    if (cmd->count("--config")) config = load_config_file(f.config_path);
    if (cmd->count("--n-sellers")) config.n_sellers = f.n_sellers;
    if (cmd->count("--n-buyers")) config.n_buyers = f.n_buyers;
    if (cmd->count("--turns")) config.turns = f.turns;
    if (cmd->count("--level")) config.level = parse_level(f.level);
    if (cmd->count("--cheater-fraction")) config.cheater_fraction = f.cheater_fraction;
    if (cmd->count("--stock")) config.stock = f.stock;
    if (cmd->count("--epsilon")) config.epsilon = f.epsilon;
    if (cmd->count("--idk-threshold")) config.idk_threshold = f.idk_threshold;
    if (cmd->count("--question-split")) config.question_split = f.question_split;
    if (cmd->count("--good-seller-threshold"))
        config.good_seller_threshold = f.good_seller_threshold;
    if (cmd->count("--quality-dist")) config.quality_dist = parse_quality_dist(f.quality_dist);
    if (cmd->count("--seed")) config.seed = f.seed;
    config.validate();
    return config;
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master, int n) {
    RngStream stream(master, StreamKind::SeedDerivation);
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) seeds.push_back(stream.next_u64());
    return seeds;
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

std::vector<double> parse_fractions(const std::string& text) {
    std::vector<double> fractions;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!item.empty()) fractions.push_back(std::stod(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (fractions.empty()) throw std::invalid_argument("--fractions: empty list");
    return fractions;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repage: image/reputation gossip market simulator"};
    app.require_subcommand(1);

    SimFlags run_flags, compare_flags, sweep_flags;
    std::string run_out = ".", compare_out = ".", sweep_out = ".", plot_out = ".";
    int compare_seeds = 1, sweep_seeds = 30, sweep_jobs = 1, compare_jobs = 1;
    std::string fractions_text = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
    std::string plot_kind, plot_csv;

    CLI::App* run_cmd = app.add_subcommand("run", "Single scenario, per-turn CSV");
    add_sim_flags(run_cmd, run_flags);
    run_cmd->add_option("--out", run_out, "Output directory (default .)");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "L1 vs L2 over a shared seed set, merged CSV");
    add_sim_flags(compare_cmd, compare_flags);
    compare_cmd->add_option("--seeds", compare_seeds, "Number of seeds derived from --seed");
    compare_cmd->add_option("--jobs", compare_jobs, "Worker threads (default 1)");
    compare_cmd->add_option("--out", compare_out, "Output directory (default .)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Cheater-fraction sweep, one row per run");
    add_sim_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--fractions", fractions_text, "Comma-separated cheater fractions");
    sweep_cmd->add_option("--seeds", sweep_seeds, "Number of seeds derived from --seed");
    sweep_cmd->add_option("--jobs", sweep_jobs, "Worker threads (default 1)");
    sweep_cmd->add_option("--out", sweep_out, "Output directory (default .)");

    CLI::App* plot_cmd = app.add_subcommand("plot", "Emit a gnuplot script for a CSV");
    plot_cmd->add_option("--kind", plot_kind, "fig2 | fig3 | fig4 | fig5")->required();
    plot_cmd->add_option("--csv", plot_csv, "CSV file the script reads")->required();
    plot_cmd->add_option("--out", plot_out, "Output directory (default .)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            SimConfig config = build_config(run_cmd, run_flags);
            std::string path = out_path(run_out, "run.csv");
            emit_csv(run(config), path);
            std::cout << "wrote " << path << "\n";
        } else if (compare_cmd->parsed()) {
            SimConfig config = build_config(compare_cmd, compare_flags);
            auto seeds = derive_seeds(config.seed, compare_seeds);
            std::string path = out_path(compare_out, "compare.csv");
            emit_csv(compare_levels(config, seeds, compare_jobs), path);
            std::cout << "wrote " << path << "\n";
        } else if (sweep_cmd->parsed()) {
            SimConfig config = build_config(sweep_cmd, sweep_flags);
            auto seeds = derive_seeds(config.seed, sweep_seeds);
            std::string path = out_path(sweep_out, "sweep.csv");
            emit_csv(sweep_cheaters(config, parse_fractions(fractions_text), seeds, sweep_jobs),
                     path);
            std::cout << "wrote " << path << "\n";
        } else if (plot_cmd->parsed()) {
            std::string path = out_path(plot_out, plot_kind + ".gp");
            emit_plot_script(plot_csv, plot_kind, path);
            std::cout << "wrote " << path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
