#include "repage/memory.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace repage {

namespace {

constexpr double kTrustQualityLow = kLevelCentroids.front();   // 10
constexpr double kTrustQualitySpan = kLevelCentroids.back() - kLevelCentroids.front();

double trust_from_quality(double expected) {
    double t = (expected - kTrustQualityLow) / kTrustQualitySpan;
    return std::clamp(t, 0.0, 1.0);
}

bool is_leaf(PredicateKind kind) {
    return kind == PredicateKind::Outcome || kind == PredicateKind::ReportedEvaluation;
}

bool is_root(PredicateKind kind) {
    return kind == PredicateKind::Image || kind == PredicateKind::Reputation;
}

// Value of one node from its antecedents' values. `value_of` supplies
// antecedent values (live predicates or an oracle map) and `trust_fn`
// supplies the report weighting; both the incremental path and the
// full-recompute oracle funnel through here so the two can only diverge
// on traversal, which is exactly what the oracle is meant to check.
NodeValue compute_node(const Predicate& p, const std::map<NodeId, Predicate>& nodes,
                       const std::function<NodeValue(NodeId)>& value_of,
                       const std::function<double(Role, AgentId)>& trust_fn) {
    std::vector<WeightedEvaluation> items;
    items.reserve(p.antecedents.size());
    for (NodeId aid : p.antecedents) {
        const Predicate& a = nodes.at(aid);
        NodeValue v = value_of(aid);
        if (!v.distribution || v.weight <= 0.0) continue;
        double w = v.weight;
        // Adopted evaluations are filtered through trust in the
        // valued-information layer. Voices are not: relaying a rumor
        // carries no commitment, so the reputation channel aggregates
        // them at face value (and stays independent of the image side).
        if (a.kind == PredicateKind::ReportedEvaluation &&
            p.kind == PredicateKind::ValuedInformation)
            w *= trust_fn(p.role, *a.informer);
        if (w <= 0.0) continue;
        items.push_back({*v.distribution, w});
    }
    auto agg = aggregate(items);
    if (!agg) return {};
    double strength = is_root(p.kind) ? agg->strength : std::min(1.0, agg->total_weight);
    return {agg->distribution, agg->total_weight, strength};
}

}  // namespace

const char* to_string(Role role) {
    return role == Role::SellerQuality ? "seller-quality" : "informer-accuracy";
}

const char* to_string(PredicateKind kind) {
    switch (kind) {
        case PredicateKind::Outcome: return "outcome";
        case PredicateKind::ReportedEvaluation: return "reported-evaluation";
        case PredicateKind::ValuedInformation: return "valued-information";
        case PredicateKind::SharedEvaluation: return "shared-evaluation";
        case PredicateKind::SharedVoice: return "shared-voice";
        case PredicateKind::Image: return "image";
        case PredicateKind::Reputation: return "reputation";
    }
    return "?";
}

RepageMemory::RepageMemory(AgentId owner, double idk_threshold)
    : owner_(owner), idk_threshold_(idk_threshold) {
    if (idk_threshold < 0.0 || idk_threshold > 1.0)
        throw std::invalid_argument("idk_threshold must lie in [0,1]");
}

Predicate& RepageMemory::node(NodeId id) { return nodes_.at(id); }
const Predicate& RepageMemory::node(NodeId id) const { return nodes_.at(id); }

const Predicate* RepageMemory::find(AgentId target, Role role, PredicateKind kind) const {
    auto it = singletons_.find({target, static_cast<std::uint8_t>(role),
                                static_cast<std::uint8_t>(kind)});
    if (it == singletons_.end()) return nullptr;
    return &node(it->second);
}

NodeId RepageMemory::new_node(PredicateKind kind, AgentId target, Role role, Turn turn,
                              std::vector<NodeId>& created) {
    NodeId id = next_id_++;
    Predicate p;
    p.id = id;
    p.kind = kind;
    p.target = target;
    p.role = role;
    p.turn = turn;
    nodes_.emplace(id, std::move(p));
    graph_.add_node(id);
    created.push_back(id);
    return id;
}

void RepageMemory::link(NodeId antecedent, NodeId consequent) {
    graph_.add_edge(antecedent, consequent);
    node(antecedent).consequents.insert(consequent);
    node(consequent).antecedents.insert(antecedent);
}

void RepageMemory::soft_edge(NodeId from, NodeId to) {
    if (!graph_.has_edge(from, to)) graph_.add_edge(from, to);
}

NodeId RepageMemory::ensure_singleton(PredicateKind kind, AgentId target, Role role, Turn turn,
                                      std::vector<NodeId>& created) {
    auto key = std::make_tuple(target, static_cast<std::uint8_t>(role),
                               static_cast<std::uint8_t>(kind));
    auto it = singletons_.find(key);
    if (it != singletons_.end()) return it->second;
    NodeId id = new_node(kind, target, role, turn, created);
    singletons_.emplace(key, id);
    if (kind == PredicateKind::Image && role == Role::InformerAccuracy)
        add_trust_edges_from_accuracy_image(target, id);
    return id;
}

void RepageMemory::add_trust_edges_for_consumer(AgentId informer, Role role, NodeId consumer) {
    trust_consumers_[{informer, static_cast<std::uint8_t>(role)}].insert(consumer);
    if (role == Role::InformerAccuracy) {
        auto it = outcomes_.find({informer, static_cast<std::uint8_t>(Role::InformerAccuracy)});
        if (it != outcomes_.end())
            for (NodeId leaf : it->second) soft_edge(leaf, consumer);
    } else {
        if (const Predicate* img = find(informer, Role::InformerAccuracy, PredicateKind::Image))
            soft_edge(img->id, consumer);
    }
}

void RepageMemory::add_trust_edges_from_accuracy_outcome(AgentId informer, NodeId leaf) {
    auto it = trust_consumers_.find({informer, static_cast<std::uint8_t>(Role::InformerAccuracy)});
    if (it == trust_consumers_.end()) return;
    for (NodeId consumer : it->second) soft_edge(leaf, consumer);
}

void RepageMemory::add_trust_edges_from_accuracy_image(AgentId informer, NodeId image_node) {
    auto it = trust_consumers_.find({informer, static_cast<std::uint8_t>(Role::SellerQuality)});
    if (it == trust_consumers_.end()) return;
    for (NodeId consumer : it->second) soft_edge(image_node, consumer);
}

ChangeSet RepageMemory::record_outcome(AgentId target, Role role, double quality, Turn turn) {
    EvaluationDistribution dist = quality_to_distribution(quality);

    std::vector<NodeId> created;
    NodeId leaf = new_node(PredicateKind::Outcome, target, role, turn, created);
    Predicate& p = node(leaf);
    p.distribution = dist;
    p.weight = 1.0;
    p.strength = 1.0;
    outcomes_[{target, static_cast<std::uint8_t>(role)}].push_back(leaf);

    NodeId image = ensure_singleton(PredicateKind::Image, target, role, turn, created);
    link(leaf, image);
    if (role == Role::InformerAccuracy) add_trust_edges_from_accuracy_outcome(target, leaf);

    journal_.push_back({MemoryEvent::Type::Outcome, 0, target, role, turn, quality, std::nullopt});
    return propagate({leaf}, std::move(created));
}

ChangeSet RepageMemory::record_told_image(AgentId informer, AgentId target, Role role,
                                          const EvaluationDistribution& told, Turn turn) {
    if (informer == owner_)
        throw std::invalid_argument("record_told_image: informer must differ from owner");

    std::vector<NodeId> created;
    auto leaf_key = std::make_tuple(informer, target, static_cast<std::uint8_t>(role),
                                    static_cast<std::uint8_t>(Channel::Image));
    auto it = report_leaves_.find(leaf_key);
    NodeId leaf;
    if (it != report_leaves_.end()) {
        leaf = it->second;  // newest report replaces this informer's previous one
        Predicate& p = node(leaf);
        p.distribution = told;
        p.turn = turn;
    } else {
        leaf = new_node(PredicateKind::ReportedEvaluation, target, role, turn, created);
        Predicate& p = node(leaf);
        p.informer = informer;
        p.channel = Channel::Image;
        p.distribution = told;
        p.weight = 1.0;
        p.strength = 1.0;
        report_leaves_.emplace(leaf_key, leaf);

        // A fresh leaf implies a fresh valued-information node: they are
        // created and keyed together per (informer, target, role).
        NodeId vi = new_node(PredicateKind::ValuedInformation, target, role, turn, created);
        node(vi).informer = informer;
        valued_info_.emplace(std::make_tuple(informer, target, static_cast<std::uint8_t>(role)), vi);
        add_trust_edges_for_consumer(informer, role, vi);
        NodeId se = ensure_singleton(PredicateKind::SharedEvaluation, target, role, turn, created);
        link(vi, se);
        NodeId image = ensure_singleton(PredicateKind::Image, target, role, turn, created);
        if (!graph_.has_edge(se, image)) link(se, image);
        link(leaf, vi);
    }

    journal_.push_back({MemoryEvent::Type::ToldImage, informer, target, role, turn, 0.0, told});
    return propagate({leaf}, std::move(created));
}

ChangeSet RepageMemory::record_told_reputation(AgentId informer, AgentId target, Role role,
                                               const EvaluationDistribution& told, Turn turn) {
    if (informer == owner_)
        throw std::invalid_argument("record_told_reputation: informer must differ from owner");

    std::vector<NodeId> created;
    auto leaf_key = std::make_tuple(informer, target, static_cast<std::uint8_t>(role),
                                    static_cast<std::uint8_t>(Channel::Reputation));
    auto it = report_leaves_.find(leaf_key);
    NodeId leaf;
    if (it != report_leaves_.end()) {
        leaf = it->second;
        Predicate& p = node(leaf);
        p.distribution = told;
        p.turn = turn;
    } else {
        leaf = new_node(PredicateKind::ReportedEvaluation, target, role, turn, created);
        Predicate& p = node(leaf);
        p.informer = informer;
        p.channel = Channel::Reputation;
        p.distribution = told;
        p.weight = 1.0;
        p.strength = 1.0;
        report_leaves_.emplace(leaf_key, leaf);

        NodeId voice = ensure_singleton(PredicateKind::SharedVoice, target, role, turn, created);
        link(leaf, voice);
        NodeId rep = ensure_singleton(PredicateKind::Reputation, target, role, turn, created);
        if (!graph_.has_edge(voice, rep)) link(voice, rep);
    }

    journal_.push_back({MemoryEvent::Type::ToldReputation, informer, target, role, turn, 0.0, told});
    return propagate({leaf}, std::move(created));
}

ChangeSet RepageMemory::recompute(NodeId changed) {
    if (!nodes_.count(changed)) throw std::invalid_argument("recompute: unknown node id");
    return propagate({changed}, {});
}

double RepageMemory::trust_for(Role role, AgentId informer) const {
    return role == Role::SellerQuality ? informer_trust(informer)
                                       : direct_informer_trust(informer);
}

void RepageMemory::recompute_value(NodeId id) {
    Predicate& p = node(id);
    if (is_leaf(p.kind)) return;  // leaf values are intrinsic
    NodeValue v = compute_node(
        p, nodes_,
        [this](NodeId a) {
            const Predicate& ap = node(a);
            return NodeValue{ap.distribution, ap.weight, ap.strength};
        },
        [this](Role role, AgentId informer) { return trust_for(role, informer); });
    p.distribution = v.distribution;
    p.weight = v.weight;
    p.strength = v.strength;
}

ChangeSet RepageMemory::propagate(const std::set<NodeId>& sources, std::vector<NodeId> created) {
    ChangeSet cs;
    cs.created = std::move(created);
    cs.recomputed = graph_.affected(sources);
    for (NodeId id : cs.recomputed) recompute_value(id);
    return cs;
}

Answer RepageMemory::query(AgentId target, Role role) const {
    Answer answer;
    if (const Predicate* img = find(target, role, PredicateKind::Image))
        if (img->distribution && img->strength >= idk_threshold_)
            answer.image = ChannelEvaluation{*img->distribution, img->strength};
    if (const Predicate* rep = find(target, role, PredicateKind::Reputation))
        if (rep->distribution && rep->strength >= idk_threshold_)
            answer.reputation = ChannelEvaluation{*rep->distribution, rep->strength};
    return answer;
}

double RepageMemory::informer_trust(AgentId informer) const {
    const Predicate* img = find(informer, Role::InformerAccuracy, PredicateKind::Image);
    if (!img || !img->distribution || img->strength < idk_threshold_) return kTrustPrior;
    return trust_from_quality(expected_quality(*img->distribution));
}

double RepageMemory::direct_informer_trust(AgentId informer) const {
    auto it = outcomes_.find({informer, static_cast<std::uint8_t>(Role::InformerAccuracy)});
    if (it == outcomes_.end() || it->second.empty()) return kTrustPrior;
    std::vector<WeightedEvaluation> items;
    items.reserve(it->second.size());
    for (NodeId leaf : it->second) {
        const Predicate& p = node(leaf);
        items.push_back({*p.distribution, p.weight});
    }
    auto agg = aggregate(items);
    if (!agg || agg->strength < idk_threshold_) return kTrustPrior;
    return trust_from_quality(expected_quality(agg->distribution));
}

MemorySnapshot RepageMemory::full_recompute() const {
    MemorySnapshot values;
    for (const auto& [id, p] : nodes_)
        if (is_leaf(p.kind)) values[id] = {p.distribution, p.weight, p.strength};

    auto direct_trust = [&](AgentId informer) -> double {
        auto it = outcomes_.find({informer, static_cast<std::uint8_t>(Role::InformerAccuracy)});
        if (it == outcomes_.end() || it->second.empty()) return kTrustPrior;
        std::vector<WeightedEvaluation> items;
        for (NodeId leaf : it->second) {
            const NodeValue& v = values.at(leaf);
            items.push_back({*v.distribution, v.weight});
        }
        auto agg = aggregate(items);
        if (!agg || agg->strength < idk_threshold_) return kTrustPrior;
        return trust_from_quality(expected_quality(agg->distribution));
    };
    auto full_trust = [&](AgentId informer) -> double {
        const Predicate* img = find(informer, Role::InformerAccuracy, PredicateKind::Image);
        if (!img) return kTrustPrior;
        const NodeValue& v = values.at(img->id);
        if (!v.distribution || v.strength < idk_threshold_) return kTrustPrior;
        return trust_from_quality(expected_quality(*v.distribution));
    };
    auto trust_fn = [&](Role role, AgentId informer) {
        return role == Role::SellerQuality ? full_trust(informer) : direct_trust(informer);
    };
    auto value_of = [&](NodeId id) { return values.at(id); };

    // Informer-accuracy channel first: it defines the trust used to weight
    // seller-quality reports. Within a channel, layers bottom-up.
    constexpr PredicateKind kLayerOrder[] = {
        PredicateKind::ValuedInformation, PredicateKind::SharedEvaluation,
        PredicateKind::SharedVoice, PredicateKind::Image, PredicateKind::Reputation};
    for (Role role : {Role::InformerAccuracy, Role::SellerQuality})
        for (PredicateKind kind : kLayerOrder)
            for (const auto& [id, p] : nodes_)
                if (p.kind == kind && p.role == role)
                    values[id] = compute_node(p, nodes_, value_of, trust_fn);
    return values;
}

MemorySnapshot RepageMemory::snapshot() const {
    MemorySnapshot values;
    for (const auto& [id, p] : nodes_) values[id] = {p.distribution, p.weight, p.strength};
    return values;
}

std::string RepageMemory::dump() const {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", idk_threshold_);
    out << "memory owner=" << owner_ << " idk_threshold=" << buf << " nodes=" << nodes_.size()
        << "\n";
    auto join = [](const std::set<NodeId>& ids) {
        std::string s = "[";
        bool first = true;
        for (NodeId id : ids) {
            if (!first) s += ",";
            s += std::to_string(id);
            first = false;
        }
        return s + "]";
    };
    for (const auto& [id, p] : nodes_) {
        std::snprintf(buf, sizeof buf, "weight=%.6f strength=%.6f", p.weight, p.strength);
        out << "node id=" << id << " kind=" << to_string(p.kind) << " target=" << p.target
            << " role=" << to_string(p.role) << " informer="
            << (p.informer ? std::to_string(*p.informer) : "-") << " channel="
            << (p.channel ? (*p.channel == Channel::Image ? "image" : "reputation") : "-")
            << " turn=" << p.turn << " " << buf << " dist="
            << (p.distribution ? to_string(*p.distribution) : "-") << " ante=" << join(p.antecedents)
            << " cons=" << join(p.consequents) << "\n";
    }
    return out.str();
}

void RepageMemory::check_invariants() const {
    for (const auto& [id, p] : nodes_) {
        if (is_leaf(p.kind) && !p.antecedents.empty())
            throw std::logic_error("leaf predicate has antecedents");
        for (NodeId a : p.antecedents) {
            if (!node(a).consequents.count(id))
                throw std::logic_error("antecedent/consequent links inconsistent");
            if (!graph_.has_edge(a, id))
                throw std::logic_error("predicate link missing from dependency graph");
        }
        for (NodeId c : p.consequents)
            if (!node(c).antecedents.count(id))
                throw std::logic_error("antecedent/consequent links inconsistent");
        if (p.weight < 0.0 || p.strength < 0.0 || p.strength > 1.0)
            throw std::logic_error("predicate weight/strength out of range");
        if (!is_leaf(p.kind) && p.distribution.has_value() != (p.weight > 0.0))
            throw std::logic_error("distribution presence must match positive weight");
    }
    for (const auto& [key, id] : singletons_) {
        const Predicate& p = node(id);
        if (static_cast<std::uint8_t>(p.kind) != std::get<2>(key) || p.target != std::get<0>(key))
            throw std::logic_error("singleton index corrupt");
    }
    graph_.topological_order();  // throws on cycle
}

}  // namespace repage
