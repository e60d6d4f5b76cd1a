#include "treevrpsd/tree.hpp"

#include "treevrpsd/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace treevrpsd {

TreeInstance TreeInstance::build(std::span<const Edge> edges, int capacity)
{
    if (capacity < 1) {
        throw Error(ErrorCode::BadCapacity, "capacity must be at least 1, got " + std::to_string(capacity));
    }
    const std::size_t n = edges.size();
    TreeInstance tree;
    tree.capacity_ = capacity;
    tree.parent_.assign(n + 1, kDepot);
    tree.edge_length_.assign(n + 1, 0.0);
    std::vector<bool> seen(n + 1, false);

    for (const auto& e : edges) {
        if (e.child == kDepot || e.child > n || e.parent > n) {
            throw Error(ErrorCode::CycleOrForest,
                        "edge (" + std::to_string(e.parent) + ", " + std::to_string(e.child)
                            + ") does not name vertices 1.." + std::to_string(n) + " as child");
        }
        if (seen[e.child]) {
            throw Error(ErrorCode::CycleOrForest, "vertex " + std::to_string(e.child) + " has two parents");
        }
        if (!(e.length > 0.0) || !std::isfinite(e.length)) {
            throw Error(ErrorCode::NonpositiveLength,
                        "edge to vertex " + std::to_string(e.child) + " has length " + std::to_string(e.length));
        }
        seen[e.child] = true;
        tree.parent_[e.child] = e.parent;
        tree.edge_length_[e.child] = e.length;
    }

    // Every vertex must reach the depot; a cycle never does.
    tree.depth_.assign(n + 1, 0);
    std::vector<int> state(n + 1, 0); // 0 unvisited, 1 on stack, 2 done
    state[kDepot] = 2;
    std::vector<Vertex> stack;
    for (Vertex v = 1; v <= n; ++v) {
        Vertex u = v;
        while (state[u] == 0) {
            state[u] = 1;
            stack.push_back(u);
            u = tree.parent_[u];
        }
        if (state[u] == 1) {
            throw Error(ErrorCode::CycleOrForest, "cycle through vertex " + std::to_string(u));
        }
        while (!stack.empty()) {
            const Vertex w = stack.back();
            stack.pop_back();
            tree.depth_[w] = tree.depth_[tree.parent_[w]] + 1;
            state[w] = 2;
        }
    }

    tree.children_.assign(n + 1, {});
    for (Vertex v = 1; v <= n; ++v) {
        tree.children_[tree.parent_[v]].push_back(v);
    }

    // Ascending children and a preorder let distances accumulate top-down.
    tree.depot_distance_.assign(n + 1, 0.0);
    std::vector<Vertex> todo{kDepot};
    while (!todo.empty()) {
        const Vertex u = todo.back();
        todo.pop_back();
        for (const Vertex c : tree.children_[u]) {
            tree.depot_distance_[c] = tree.depot_distance_[u] + tree.edge_length_[c];
            todo.push_back(c);
        }
    }

    for (Vertex v = 1; v <= n; ++v) {
        tree.total_length_ += tree.edge_length_[v];
    }
    return tree;
}

void TreeInstance::check_vertex(Vertex v) const
{
    if (v >= parent_.size()) {
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " is not in the tree");
    }
}

Vertex TreeInstance::parent(Vertex v) const
{
    check_vertex(v);
    return parent_[v];
}

double TreeInstance::edge_length(Vertex v) const
{
    check_vertex(v);
    return edge_length_[v];
}

const std::vector<Vertex>& TreeInstance::children(Vertex v) const
{
    check_vertex(v);
    return children_[v];
}

double TreeInstance::depot_distance(Vertex v) const
{
    check_vertex(v);
    return depot_distance_[v];
}

Vertex TreeInstance::lowest_common_ancestor(Vertex a, Vertex b) const
{
    check_vertex(a);
    check_vertex(b);
    while (depth_[a] > depth_[b]) {
        a = parent_[a];
    }
    while (depth_[b] > depth_[a]) {
        b = parent_[b];
    }
    while (a != b) {
        a = parent_[a];
        b = parent_[b];
    }
    return a;
}

double TreeInstance::path_distance(Vertex a, Vertex b) const
{
    if (a == b) {
        check_vertex(a);
        return 0.0;
    }
    const Vertex lca = lowest_common_ancestor(a, b);
    return depot_distance_[a] + depot_distance_[b] - 2.0 * depot_distance_[lca];
}

std::vector<Edge> TreeInstance::edges() const
{
    std::vector<Edge> out;
    out.reserve(customer_count());
    for (Vertex v = 1; v < parent_.size(); ++v) {
        out.push_back({parent_[v], v, edge_length_[v]});
    }
    return out;
}

VisitOrder dfs_order(const TreeInstance& tree)
{
    VisitOrder order;
    order.sequence.reserve(tree.customer_count());
    std::vector<Vertex> stack;
    const auto& root_children = tree.children(kDepot);
    stack.assign(root_children.rbegin(), root_children.rend());
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        order.sequence.push_back(v);
        const auto& kids = tree.children(v);
        stack.insert(stack.end(), kids.rbegin(), kids.rend());
    }
    return order;
}

void validate_order(const TreeInstance& tree, const VisitOrder& order)
{
    const std::size_t n = tree.customer_count();
    if (order.size() != n) {
        throw Error(ErrorCode::InvalidOrder,
                    "order has " + std::to_string(order.size()) + " stops for " + std::to_string(n) + " customers");
    }
    std::vector<bool> placed(n + 1, false);
    placed[kDepot] = true;
    for (const Vertex v : order.sequence) {
        if (v == kDepot || v > n || placed[v]) {
            throw Error(ErrorCode::InvalidOrder, "vertex " + std::to_string(v) + " is not a fresh customer");
        }
        if (!placed[tree.parent(v)]) {
            throw Error(ErrorCode::InvalidOrder, "vertex " + std::to_string(v) + " precedes its parent");
        }
        placed[v] = true;
    }
}

double closed_walk_length(const TreeInstance& tree, const VisitOrder& order)
{
    validate_order(tree, order);
    double length = 0.0;
    Vertex at = kDepot;
    for (const Vertex v : order.sequence) {
        length += tree.path_distance(at, v);
        at = v;
    }
    return length + tree.path_distance(at, kDepot);
}

} // namespace treevrpsd
