#include "repage/graph.hpp"

#include <queue>
#include <stdexcept>

namespace repage {

namespace {
const std::set<NodeId> kEmptySet;
}

void DependencyGraph::add_node(NodeId id) {
    if (contains(id)) throw std::logic_error("dependency graph: duplicate node id");
    edges_[id];
    redges_[id];
}

void DependencyGraph::add_edge(NodeId from, NodeId to) {
    if (!contains(from) || !contains(to))
        throw std::logic_error("dependency graph: edge endpoint missing");
    if (from == to || reachable(to, from))
        throw std::logic_error("dependency graph: edge would create a cycle");
    edges_[from].insert(to);
    redges_[to].insert(from);
}

bool DependencyGraph::has_edge(NodeId from, NodeId to) const {
    auto it = edges_.find(from);
    return it != edges_.end() && it->second.count(to) != 0;
}

const std::set<NodeId>& DependencyGraph::dependents(NodeId id) const {
    auto it = edges_.find(id);
    return it == edges_.end() ? kEmptySet : it->second;
}

const std::set<NodeId>& DependencyGraph::dependencies(NodeId id) const {
    auto it = redges_.find(id);
    return it == redges_.end() ? kEmptySet : it->second;
}

bool DependencyGraph::reachable(NodeId from, NodeId to) const {
    if (!contains(from) || !contains(to)) return false;
    std::set<NodeId> seen{from};
    std::queue<NodeId> frontier;
    frontier.push(from);
    while (!frontier.empty()) {
        NodeId cur = frontier.front();
        frontier.pop();
        if (cur == to) return true;
        for (NodeId next : dependents(cur))
            if (seen.insert(next).second) frontier.push(next);
    }
    return false;
}

std::vector<NodeId> DependencyGraph::affected(const std::set<NodeId>& sources) const {
    std::set<NodeId> reached;
    std::queue<NodeId> frontier;
    for (NodeId id : sources) {
        if (!contains(id)) throw std::logic_error("dependency graph: unknown source node");
        frontier.push(id);
    }
    while (!frontier.empty()) {
        NodeId cur = frontier.front();
        frontier.pop();
        for (NodeId next : dependents(cur))
            if (sources.count(next) == 0 && reached.insert(next).second) frontier.push(next);
    }
    return order_subset(reached);
}

std::vector<NodeId> DependencyGraph::topological_order() const {
    std::set<NodeId> all;
    for (const auto& [id, _] : edges_) all.insert(id);
    return order_subset(all);
}

// Kahn's algorithm restricted to `subset`, popping the smallest ready id.
std::vector<NodeId> DependencyGraph::order_subset(const std::set<NodeId>& subset) const {
    std::map<NodeId, std::size_t> indegree;
    for (NodeId id : subset) {
        std::size_t n = 0;
        for (NodeId dep : dependencies(id))
            if (subset.count(dep)) ++n;
        indegree[id] = n;
    }
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
    for (const auto& [id, n] : indegree)
        if (n == 0) ready.push(id);

    std::vector<NodeId> order;
    order.reserve(subset.size());
    while (!ready.empty()) {
        NodeId cur = ready.top();
        ready.pop();
        order.push_back(cur);
        for (NodeId next : dependents(cur)) {
            auto it = indegree.find(next);
            if (it != indegree.end() && --it->second == 0) ready.push(next);
        }
    }
    if (order.size() != subset.size())
        throw std::logic_error("dependency graph: cycle detected");
    return order;
}

}  // namespace repage
