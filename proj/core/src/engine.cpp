#include "repage/engine.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace repage {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void SimConfig::validate() const {
    require(n_sellers >= 1, "n_sellers: must be >= 1");
    require(n_buyers >= 2, "n_buyers: must be >= 2");
    require(turns >= 0, "turns: must be >= 0");
    require(cheater_fraction >= 0.0 && cheater_fraction <= 1.0,
            "cheater_fraction: must lie in [0,1]");
    require(stock >= 1, "stock: must be >= 1");
    require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon: must lie in [0,1]");
    require(idk_threshold >= 0.0 && idk_threshold <= 1.0, "idk_threshold: must lie in [0,1]");
    require(question_split >= 0.0 && question_split <= 1.0, "question_split: must lie in [0,1]");
    require(optimism_prior >= kQualityMin && optimism_prior <= kQualityMax,
            "optimism_prior: must lie in [1,100]");
    require(good_seller_threshold >= kQualityMin && good_seller_threshold <= kQualityMax,
            "good_seller_threshold: must lie in [1,100]");
    switch (quality_dist.kind) {
        case QualityDistSpec::Kind::UniformInt:
            require(quality_dist.lo >= kQualityMin && quality_dist.hi <= kQualityMax &&
                        quality_dist.lo <= quality_dist.hi,
                    "quality_distribution: uniform bounds must satisfy 1 <= lo <= hi <= 100");
            break;
        case QualityDistSpec::Kind::Point:
            require(quality_dist.value >= kQualityMin && quality_dist.value <= kQualityMax,
                    "quality_distribution: point value must lie in [1,100]");
            break;
        case QualityDistSpec::Kind::NormalTruncated:
            require(quality_dist.mean >= kQualityMin && quality_dist.mean <= kQualityMax,
                    "quality_distribution: normal mean must lie in [1,100]");
            require(quality_dist.stddev > 0.0, "quality_distribution: normal stddev must be > 0");
            break;
    }
}

World::World(const SimConfig& config)
    : config_(config),
      policy_{config.question_split, config.optimism_prior},
      market_(config.n_sellers, config.stock, config.quality_dist,
              static_cast<AgentId>(config.n_buyers) + 1,
              RngStream(config.seed, StreamKind::MarketDraws)),
      shuffle_rng_(config.seed, StreamKind::PhaseShuffle) {
    config_.validate();

    buyers_.reserve(static_cast<std::size_t>(config_.n_buyers));
    for (int i = 0; i < config_.n_buyers; ++i) {
        AgentId id = static_cast<AgentId>(i) + 1;
        buyers_.emplace_back(id, config_.idk_threshold, config_.epsilon,
                             RngStream(config_.seed, StreamKind::Buyer, id));
        buyer_ids_.push_back(id);
    }

    // The first round(fraction * n) buyers of a seeded shuffle cheat.
    auto n_cheaters =
        static_cast<std::size_t>(std::lround(config_.cheater_fraction * config_.n_buyers));
    std::vector<std::size_t> order(buyers_.size());
    std::iota(order.begin(), order.end(), 0);
    RngStream cheater_rng(config_.seed, StreamKind::CheaterAssignment);
    cheater_rng.shuffle(order);
    for (std::size_t i = 0; i < n_cheaters && i < order.size(); ++i)
        buyers_[order[i]].is_cheater = true;
}

TurnEvents World::tick() {
    TurnEvents events;
    events.turn = ++turn_;
    int retired_before = market_.retired_count();

    // Phase 1: one communication request per buyer. All answers are
    // computed before any is ingested, so they reflect pre-phase memories.
    std::vector<std::size_t> order(buyers_.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle_rng_.shuffle(order);

    struct Ask {
        std::size_t asker_index;
        QueryChoice choice;
    };
    std::vector<Ask> asks;
    asks.reserve(order.size());
    for (std::size_t idx : order)
        asks.push_back({idx, choose_query(buyers_[idx], buyer_ids_, market_.sellers(), policy_)});

    std::vector<Answer> answers;
    answers.reserve(asks.size());
    for (const Ask& ask : asks) {
        const BuyerState& informer = buyers_[ask.choice.informer - 1];
        answers.push_back(answer_request(informer, ask.choice.question, config_.level));
    }
    for (std::size_t i = 0; i < asks.size(); ++i) {
        BuyerState& asker = buyers_[asks[i].asker_index];
        ingest_answer(asker, asks[i].choice.informer, asks[i].choice.question, answers[i],
                      config_.level, turn_);
        events.answers.push_back(
            {asker.id, asks[i].choice.informer, asks[i].choice.question, answers[i]});
    }

    // Phase 2: one purchase per buyer, targets picked against the
    // phase-start market, executed sequentially in a fresh order. A buyer
    // whose target was exhausted mid-phase re-chooses from the live set.
    shuffle_rng_.shuffle(order);
    std::vector<AgentId> targets(buyers_.size(), 0);
    for (std::size_t idx : order)
        targets[idx] = choose_seller(buyers_[idx], market_.sellers(), config_.level, policy_);

    for (std::size_t idx : order) {
        BuyerState& buyer = buyers_[idx];
        AgentId target = targets[idx];
        std::optional<Contract> contract = market_.purchase(buyer.id, target, turn_);
        while (!contract) {
            target = choose_seller(buyer, market_.sellers(), config_.level, policy_);
            contract = market_.purchase(buyer.id, target, turn_);
        }
        buyer.memory.record_outcome(contract->seller, Role::SellerQuality, contract->quality,
                                    turn_);
        verify_informers(buyer, *contract, turn_);
        events.contracts.push_back(*contract);
    }

    // Phase 3: replacement happens inside purchase; verify the invariant
    // and account for this turn's turnover.
    for (const Seller& s : market_.sellers())
        if (s.stock < 1) throw std::logic_error("exhausted seller survived the turn");
    events.retirements = market_.retired_count() - retired_before;
    return events;
}

std::vector<MetricsRecord> run(const SimConfig& config) {
    return run_detailed(config).records;
}

RunResult run_detailed(const SimConfig& config) {
    config.validate();
    World world(config);
    RunResult result;
    result.records.reserve(static_cast<std::size_t>(config.turns));
    std::set<AgentId> contracted;
    for (int t = 0; t < config.turns; ++t) {
        TurnEvents events = world.tick();
        result.records.push_back(
            compute_metrics(events, contracted, config.good_seller_threshold));
        result.events.push_back(std::move(events));
    }
    return result;
}

}  // namespace repage
