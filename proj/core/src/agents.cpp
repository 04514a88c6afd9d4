#include "repage/agents.hpp"

#include <stdexcept>

namespace repage {

const char* to_string(ScenarioLevel level) { return level == ScenarioLevel::L1 ? "L1" : "L2"; }

namespace {

AgentId pick_other_buyer(RngStream& rng, const std::vector<AgentId>& buyer_ids, AgentId self) {
    // Uniform over the other buyers: draw an index over n-1 slots and skip self.
    std::uint64_t idx = rng.uniform_index(buyer_ids.size() - 1);
    AgentId candidate = buyer_ids[idx];
    if (candidate == self) candidate = buyer_ids.back();
    return candidate;
}

}  // namespace

QueryChoice choose_query(BuyerState& buyer, const std::vector<AgentId>& buyer_ids,
                         const std::vector<Seller>& live_sellers, const AgentPolicy& policy) {
    if (buyer_ids.size() < 2) throw std::invalid_argument("choose_query needs at least two buyers");
    QueryChoice choice;
    choice.informer = pick_other_buyer(buyer.rng, buyer_ids, buyer.id);
    if (buyer.rng.bernoulli(policy.question_split)) {
        const Seller& s = live_sellers[buyer.rng.uniform_index(live_sellers.size())];
        choice.question = {s.id, Role::SellerQuality};
    } else {
        choice.question = {pick_other_buyer(buyer.rng, buyer_ids, buyer.id),
                           Role::InformerAccuracy};
    }
    return choice;
}

Answer answer_request(const BuyerState& answerer, const Question& question, ScenarioLevel level) {
    Answer answer = answerer.memory.query(question.about, question.role);
    if (level == ScenarioLevel::L1) answer.reputation.reset();
    if (answerer.is_cheater) {
        if (answer.image) answer.image->distribution = reverse(answer.image->distribution);
        if (answer.reputation)
            answer.reputation->distribution = reverse(answer.reputation->distribution);
    }
    return answer;
}

void ingest_answer(BuyerState& buyer, AgentId informer, const Question& question,
                   const Answer& answer, ScenarioLevel level, Turn turn) {
    if (answer.reputation && level == ScenarioLevel::L1)
        throw std::logic_error("protocol violation: reputation answer in an L1 run");
    if (answer.is_idk()) return;

    if (answer.image) {
        buyer.memory.record_told_image(informer, question.about, question.role,
                                       answer.image->distribution, turn);
        if (level == ScenarioLevel::L2)
            buyer.memory.record_told_reputation(informer, question.about, question.role,
                                                answer.image->distribution, turn);
    }
    if (answer.reputation)
        buyer.memory.record_told_reputation(informer, question.about, question.role,
                                            answer.reputation->distribution, turn);

    if (question.role == Role::SellerQuality) {
        const EvaluationDistribution& told =
            answer.image ? answer.image->distribution : answer.reputation->distribution;
        buyer.pending_reports[question.about].insert_or_assign(informer, told);
    }
}

double seller_score(const BuyerState& buyer, AgentId seller, ScenarioLevel level,
                    const AgentPolicy& policy) {
    Answer known = buyer.memory.query(seller, Role::SellerQuality);
    if (known.image) return expected_quality(known.image->distribution);
    if (level == ScenarioLevel::L2 && known.reputation)
        return expected_quality(known.reputation->distribution);
    return policy.optimism_prior;
}

AgentId choose_seller(BuyerState& buyer, const std::vector<Seller>& live_sellers,
                      ScenarioLevel level, const AgentPolicy& policy) {
    if (live_sellers.empty()) throw std::invalid_argument("choose_seller needs a live seller");
    if (buyer.rng.bernoulli(buyer.epsilon))
        return live_sellers[buyer.rng.uniform_index(live_sellers.size())].id;

    AgentId best = 0;
    double best_score = 0.0;
    for (const Seller& s : live_sellers) {
        double score = seller_score(buyer, s.id, level, policy);
        if (best == 0 || score > best_score || (score == best_score && s.id < best)) {
            best = s.id;
            best_score = score;
        }
    }
    return best;
}

void verify_informers(BuyerState& buyer, const Contract& contract, Turn turn) {
    if (contract.buyer != buyer.id)
        throw std::invalid_argument("verify_informers: contract belongs to another buyer");
    auto it = buyer.pending_reports.find(contract.seller);
    if (it == buyer.pending_reports.end()) return;
    EvaluationDistribution observed = quality_to_distribution(contract.quality);
    // Accuracy maps onto [10,90] so informer outcomes ride the same
    // five-level machinery as seller quality.
    constexpr double lo = kLevelCentroids.front();
    constexpr double span = kLevelCentroids.back() - kLevelCentroids.front();
    for (const auto& [informer, told] : it->second) {
        double accuracy = 1.0 - distance(told, observed);
        buyer.memory.record_outcome(informer, Role::InformerAccuracy, lo + span * accuracy, turn);
    }
    buyer.pending_reports.erase(it);
}

}  // namespace repage
