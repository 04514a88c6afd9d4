// Per-agent Repage memory: a DAG of typed evaluation predicates with
// incremental recomputation and the image / reputation / I-don't-know
// query surface.
//
// Layering (leaves up):
//   outcome ----------------------------------------+
//   reported-evaluation (image channel) -> valued-information -> shared-evaluation -> image
//   reported-evaluation (reputation channel) -> shared-voice -> reputation
//
// The two channels never mix: nothing on the reputation side is ever an
// antecedent of an image node. Reported evaluations are weighted by how
// much the owner trusts the reporting agent, read at recompute time, so
// a trust revision retroactively reweights everything that agent ever
// said. Trust itself comes from the informer-accuracy images: the
// seller-quality channel weights by the full informer-accuracy image,
// while the informer-accuracy channel weights only by the owner's own
// verification outcomes (otherwise trust would be defined circularly).
// These trust dependencies are tracked as extra ordering edges so the
// whole structure stays a DAG and incremental updates match a full
// recompute exactly.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "repage/evaluation.hpp"
#include "repage/graph.hpp"

namespace repage {

using AgentId = std::uint64_t;
using Turn = std::int32_t;

enum class Role : std::uint8_t { SellerQuality, InformerAccuracy };

enum class PredicateKind : std::uint8_t {
    Outcome,
    ReportedEvaluation,
    ValuedInformation,
    SharedEvaluation,
    SharedVoice,
    Image,
    Reputation,
};

// Which side of the image/reputation split a reported evaluation feeds.
enum class Channel : std::uint8_t { Image, Reputation };

const char* to_string(Role role);
const char* to_string(PredicateKind kind);

struct Predicate {
    NodeId id = 0;
    PredicateKind kind = PredicateKind::Outcome;
    AgentId target = 0;
    Role role = Role::SellerQuality;
    // Reporting agent for reported leaves and valued-information nodes.
    std::optional<AgentId> informer;
    // Channel tag for reported leaves.
    std::optional<Channel> channel;
    // nullopt while the node carries no effective evaluation (zero weight).
    std::optional<EvaluationDistribution> distribution;
    double weight = 0.0;    // raw aggregation mass
    double strength = 0.0;  // saturated confidence in [0,1]
    std::set<NodeId> antecedents;
    std::set<NodeId> consequents;
    Turn turn = 0;
};

struct ChannelEvaluation {
    EvaluationDistribution distribution;
    double strength = 0.0;
};

// Query result: image and/or reputation above the confidence threshold,
// or I-don't-know (neither present).
struct Answer {
    std::optional<ChannelEvaluation> image;
    std::optional<ChannelEvaluation> reputation;
    bool is_idk() const { return !image && !reputation; }
};

struct ChangeSet {
    std::vector<NodeId> created;
    std::vector<NodeId> recomputed;  // topological processing order
};

struct NodeValue {
    std::optional<EvaluationDistribution> distribution;
    double weight = 0.0;
    double strength = 0.0;
};

using MemorySnapshot = std::map<NodeId, NodeValue>;

// Everything ever fed into a memory, in order; enough to rebuild it.
struct MemoryEvent {
    enum class Type : std::uint8_t { Outcome, ToldImage, ToldReputation };
    Type type = Type::Outcome;
    AgentId informer = 0;  // 0 for outcomes
    AgentId target = 0;
    Role role = Role::SellerQuality;
    Turn turn = 0;
    double quality = 0.0;                          // outcomes only
    std::optional<EvaluationDistribution> told;    // reports only
};

class RepageMemory {
public:
    static constexpr double kDefaultIdkThreshold = 0.3;
    static constexpr double kTrustPrior = 0.5;

    explicit RepageMemory(AgentId owner, double idk_threshold = kDefaultIdkThreshold);

    AgentId owner() const { return owner_; }
    double idk_threshold() const { return idk_threshold_; }

    // Direct experience: a new outcome leaf under the (target, role) image.
    ChangeSet record_outcome(AgentId target, Role role, double quality, Turn turn);

    // A third party transmitted its own adopted evaluation of target.
    // The newest report from one informer about one (target, role)
    // replaces that informer's previous one.
    ChangeSet record_told_image(AgentId informer, AgentId target, Role role,
                                const EvaluationDistribution& told, Turn turn);

    // A third party relayed a circulating evaluation without adopting it.
    // Feeds the reputation channel only; never touches any image node.
    ChangeSet record_told_reputation(AgentId informer, AgentId target, Role role,
                                     const EvaluationDistribution& told, Turn turn);

    // Recomputes every transitive consequent of `changed`, each exactly
    // once, in topological order.
    ChangeSet recompute(NodeId changed);

    Answer query(AgentId target, Role role) const;

    // Expected quality of the (informer, informer-accuracy) image mapped
    // from [10,90] onto [0,1]; the 0.5 prior when there is no image of
    // sufficient strength.
    double informer_trust(AgentId informer) const;

    // Trust backed only by the owner's own verification outcomes; used to
    // weight reports inside the informer-accuracy channel itself.
    double direct_informer_trust(AgentId informer) const;

    // From-scratch recomputation of every node, ignoring cached values.
    // Reference oracle for the incremental path; used by tests.
    MemorySnapshot full_recompute() const;

    // Current (incrementally maintained) values.
    MemorySnapshot snapshot() const;

    const std::map<NodeId, Predicate>& nodes() const { return nodes_; }
    const Predicate* find(AgentId target, Role role, PredicateKind kind) const;
    std::size_t node_count() const { return nodes_.size(); }

    const std::vector<MemoryEvent>& journal() const { return journal_; }

    // Deterministic textual serialization: nodes sorted by id, links sorted.
    std::string dump() const;

    // Structural self-checks (link consistency, acyclicity, singletons,
    // leaf shape). Throws std::logic_error on violation.
    void check_invariants() const;

private:
    Predicate& node(NodeId id);
    const Predicate& node(NodeId id) const;
    NodeId new_node(PredicateKind kind, AgentId target, Role role, Turn turn,
                    std::vector<NodeId>& created);
    void link(NodeId antecedent, NodeId consequent);
    void soft_edge(NodeId from, NodeId to);

    NodeId ensure_singleton(PredicateKind kind, AgentId target, Role role, Turn turn,
                            std::vector<NodeId>& created);
    // Ordering edges for a trust consumer (valued-information or
    // shared-voice node) that weights reports from `informer` in `role`.
    void add_trust_edges_for_consumer(AgentId informer, Role role, NodeId consumer);
    // Ordering edges from a new trust source (informer-accuracy outcome
    // leaf or newly created informer-accuracy image) to existing consumers.
    void add_trust_edges_from_accuracy_outcome(AgentId informer, NodeId leaf);
    void add_trust_edges_from_accuracy_image(AgentId informer, NodeId image_node);

    double trust_for(Role role, AgentId informer) const;
    void recompute_value(NodeId id);
    ChangeSet propagate(const std::set<NodeId>& sources, std::vector<NodeId> created);

    AgentId owner_;
    double idk_threshold_;
    NodeId next_id_ = 1;

    std::map<NodeId, Predicate> nodes_;
    DependencyGraph graph_;  // link edges plus trust ordering edges

    // (target, role, kind) -> node, for the one-per-key kinds.
    std::map<std::tuple<AgentId, std::uint8_t, std::uint8_t>, NodeId> singletons_;
    // (informer, target, role) -> valued-information node.
    std::map<std::tuple<AgentId, AgentId, std::uint8_t>, NodeId> valued_info_;
    // (informer, target, role, channel) -> reported leaf.
    std::map<std::tuple<AgentId, AgentId, std::uint8_t, std::uint8_t>, NodeId> report_leaves_;
    // (target, role) -> outcome leaves, in arrival order.
    std::map<std::pair<AgentId, std::uint8_t>, std::vector<NodeId>> outcomes_;
    // (informer, role) -> trust consumers of that informer's reports.
    std::map<std::pair<AgentId, std::uint8_t>, std::set<NodeId>> trust_consumers_;

    std::vector<MemoryEvent> journal_;
};

}  // namespace repage
