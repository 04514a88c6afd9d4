// Deterministic discrete-turn scheduler: wires buyers, market and
// memories together and owns the seeded random streams. A run is a pure
// function of its config (seed included).
#pragma once

#include <cstdint>
#include <vector>

#include "repage/agents.hpp"
#include "repage/market.hpp"
#include "repage/metrics.hpp"

namespace repage {

struct SimConfig {
    int n_sellers = 100;
    int n_buyers = 15;
    int turns = 100;
    ScenarioLevel level = ScenarioLevel::L2;
    double cheater_fraction = 0.0;
    int stock = 25;
    double epsilon = 0.1;
    double idk_threshold = RepageMemory::kDefaultIdkThreshold;
    double question_split = 0.8;
    double optimism_prior = 60.0;
    double good_seller_threshold = 75.0;
    QualityDistSpec quality_dist;
    std::uint64_t seed = 0;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct AnswerEvent {
    AgentId asker = 0;
    AgentId informer = 0;
    Question question;
    Answer answer;
};

// Everything observable about one turn.
struct TurnEvents {
    Turn turn = 0;
    std::vector<AnswerEvent> answers;    // exactly n_buyers
    std::vector<Contract> contracts;     // exactly n_buyers
    int retirements = 0;
};

class World {
public:
    explicit World(const SimConfig& config);

    // One turn: (1) every buyer asks one question, all answers computed
    // against pre-phase memories and then ingested, so iteration order
    // cannot leak same-turn gossip; (2) every buyer makes one purchase in
    // a fresh shuffled order, re-choosing when a stock race killed its
    // target, then records the outcome and verifies pending reports;
    // (3) retirement bookkeeping (replacement itself is immediate).
    TurnEvents tick();

    const SimConfig& config() const { return config_; }
    Turn turn() const { return turn_; }
    Market& market() { return market_; }
    const Market& market() const { return market_; }
    std::vector<BuyerState>& buyers() { return buyers_; }
    const std::vector<BuyerState>& buyers() const { return buyers_; }

private:
    SimConfig config_;
    AgentPolicy policy_;
    Market market_;
    std::vector<BuyerState> buyers_;
    std::vector<AgentId> buyer_ids_;
    RngStream shuffle_rng_;
    Turn turn_ = 0;
};

struct RunResult {
    std::vector<MetricsRecord> records;  // one per turn
    std::vector<TurnEvents> events;      // one per turn
};

// init + `turns` ticks, collecting per-turn metrics.
std::vector<MetricsRecord> run(const SimConfig& config);
RunResult run_detailed(const SimConfig& config);

}  // namespace repage
