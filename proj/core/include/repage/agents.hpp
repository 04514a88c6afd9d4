// Buyer behavior: whom to ask, how to answer (honestly or deceitfully),
// how to ingest answers, which seller to buy from, and how to score
// informers once a purchase reveals the truth.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "repage/market.hpp"
#include "repage/memory.hpp"
#include "repage/rng.hpp"

namespace repage {

// L1: only images circulate. L2: images and reputations.
enum class ScenarioLevel : std::uint8_t { L1 = 1, L2 = 2 };

const char* to_string(ScenarioLevel level);

struct Question {
    AgentId about = 0;  // never the asker
    Role role = Role::SellerQuality;
};

struct BuyerState {
    AgentId id = 0;
    RepageMemory memory;
    bool is_cheater = false;
    double epsilon = 0.1;  // exploration rate of seller choice
    // seller -> informer -> what that informer claimed; awaiting verification.
    std::map<AgentId, std::map<AgentId, EvaluationDistribution>> pending_reports;
    RngStream rng;

    BuyerState(AgentId id_, double idk_threshold, double epsilon_, RngStream rng_)
        : id(id_), memory(id_, idk_threshold), epsilon(epsilon_), rng(rng_) {}
};

struct QueryChoice {
    AgentId informer = 0;
    Question question;
};

// Behavior knobs shared by all buyers in a run.
struct AgentPolicy {
    double question_split = 0.8;   // P(question is about a seller)
    double optimism_prior = 60.0;  // score for sellers nothing is known about
};

// One communication request: a uniformly random other buyer as informer;
// the question targets a random live seller with probability
// `question_split`, otherwise a random other buyer as informer.
QueryChoice choose_query(BuyerState& buyer, const std::vector<AgentId>& buyer_ids,
                         const std::vector<Seller>& live_sellers, const AgentPolicy& policy);

// Query the answerer's memory, filter by scenario level (L1 strips the
// reputation part), then apply the cheater lie: every distribution in the
// honest answer reversed. I-don't-know passes through unchanged.
Answer answer_request(const BuyerState& answerer, const Question& question, ScenarioLevel level);

// Feed an answer into the asker's memory. Image parts are recorded as
// told images; in L2 they are also registered as a heard voice (a stated
// evaluation is itself evidence that an evaluation circulates), and
// reputation parts as told reputations. Non-IDK seller answers are queued
// for verification. Receiving a reputation part in L1 is a protocol
// violation.
void ingest_answer(BuyerState& buyer, AgentId informer, const Question& question,
                   const Answer& answer, ScenarioLevel level, Turn turn);

// Epsilon-greedy partner selection: with probability epsilon a uniform
// live seller, otherwise the argmax of expected quality from the buyer's
// image (or reputation, in L2) with an optimism prior for unknowns; ties
// go to the smallest seller id.
AgentId choose_seller(BuyerState& buyer, const std::vector<Seller>& live_sellers,
                      ScenarioLevel level, const AgentPolicy& policy);

// Score of one seller as used by choose_seller's greedy arm.
double seller_score(const BuyerState& buyer, AgentId seller, ScenarioLevel level,
                    const AgentPolicy& policy);

// After a purchase: every pending report about the contract's seller is
// compared with the observed quality; each reporter receives an
// informer-accuracy outcome at 10 + 80 * (1 - tv_distance), and the
// pending entries are cleared.
void verify_informers(BuyerState& buyer, const Contract& contract, Turn turn);

}  // namespace repage
