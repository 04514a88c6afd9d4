// Per-turn observables, the level-comparison and cheater-sweep harnesses,
// CSV emission and gnuplot script generation.
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "repage/agents.hpp"

namespace repage {

struct SimConfig;
struct TurnEvents;

struct MetricsRecord {
    Turn turn = 0;
    double avg_quality = 0.0;          // mean contract quality this turn
    int idk_count = 0;                 // I-don't-know answers this turn
    int good_sellers_discovered = 0;   // good sellers first contracted this turn
    int contracts = 0;
};

struct SweepRow {
    double cheater_fraction = 0.0;
    ScenarioLevel level = ScenarioLevel::L1;
    std::uint64_t seed = 0;
    double steady_quality = 0.0;  // mean avg_quality over the final quarter of turns
};

struct CompareRow {
    ScenarioLevel level = ScenarioLevel::L1;
    std::uint64_t seed = 0;
    MetricsRecord record;
};

int metric_idk_count(const TurnEvents& events);

// Sellers with quality >= threshold receiving their first-ever contract
// this turn (distinct ids). `contracted_before` holds every seller id
// contracted on earlier turns and is updated with this turn's ids, so
// replaying turn events in order reproduces the per-turn series exactly.
int metric_good_sellers_discovered(const TurnEvents& events, std::set<AgentId>& contracted_before,
                                   double good_seller_threshold);

MetricsRecord compute_metrics(const TurnEvents& events, std::set<AgentId>& contracted_before,
                              double good_seller_threshold);

// Mean avg_quality over the final ceil(n/4) records (the stabilised regime).
double steady_quality(const std::vector<MetricsRecord>& records);

// Runs both levels for every (fraction, seed) pair; rows come back sorted
// by (fraction, level, seed) regardless of how many workers executed them.
std::vector<SweepRow> sweep_cheaters(const SimConfig& base, const std::vector<double>& fractions,
                                     const std::vector<std::uint64_t>& seeds, int workers = 1);

// Runs both levels over a shared seed set; rows sorted by (level, seed, turn).
std::vector<CompareRow> compare_levels(const SimConfig& base,
                                       const std::vector<std::uint64_t>& seeds, int workers = 1);

// CSV: fixed headers, reals with 6 decimals, '\n'-terminated lines;
// byte-stable for fixed input.
std::string to_csv(const std::vector<MetricsRecord>& records);
std::string to_csv(const std::vector<CompareRow>& rows);
std::string to_csv(const std::vector<SweepRow>& rows);

// Writes content to path; I/O failures raise std::runtime_error naming the path.
void write_file(const std::string& path, const std::string& content);

void emit_csv(const std::vector<MetricsRecord>& records, const std::string& path);
void emit_csv(const std::vector<CompareRow>& rows, const std::string& path);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

// Experiment kinds accepted by the plot-script generator.
//   fig2: average contract quality per turn, one series per level
//   fig3: good sellers discovered per turn, one series per level
//   fig4: I-don't-know answers per turn, one series per level
//   fig5: steady-state quality vs cheater fraction, one series per level
std::vector<std::string> plot_kinds();

// Gnuplot script rendering `kind` from `csv_path`. Unknown kinds raise
// std::invalid_argument listing the valid ones.
std::string plot_script(std::string_view kind, const std::string& csv_path);
void emit_plot_script(const std::string& csv_path, std::string_view kind,
                      const std::string& script_path);

}  // namespace repage
