// Directed acyclic dependency graph used by the Repage memory: tracks
// which nodes depend on which and, given a set of changed sources,
// yields every transitive dependent exactly once in topological order.
// Value semantics live in the memory layer; this layer only orders.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace repage {

using NodeId = std::uint64_t;

class DependencyGraph {
public:
    // Nodes are externally numbered; adding an existing id is an error.
    void add_node(NodeId id);
    bool contains(NodeId id) const { return edges_.count(id) != 0; }
    std::size_t size() const { return edges_.size(); }

    // Edge from -> to means "to depends on from". Throws std::logic_error
    // if the edge would close a cycle.
    void add_edge(NodeId from, NodeId to);
    bool has_edge(NodeId from, NodeId to) const;

    const std::set<NodeId>& dependents(NodeId id) const;
    const std::set<NodeId>& dependencies(NodeId id) const;

    // All transitive dependents of `sources` (sources excluded), each
    // exactly once, in topological order; ties broken by ascending id so
    // the order is deterministic. Throws std::logic_error if a cycle is
    // detected, which indicates internal corruption.
    std::vector<NodeId> affected(const std::set<NodeId>& sources) const;

    // Every node, topologically ordered, id-ascending among peers.
    std::vector<NodeId> topological_order() const;

private:
    bool reachable(NodeId from, NodeId to) const;
    std::vector<NodeId> order_subset(const std::set<NodeId>& subset) const;

    std::map<NodeId, std::set<NodeId>> edges_;    // id -> dependents
    std::map<NodeId, std::set<NodeId>> redges_;   // id -> dependencies
};

}  // namespace repage
