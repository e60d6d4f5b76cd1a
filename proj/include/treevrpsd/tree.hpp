#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace treevrpsd {

using Vertex = std::size_t;

inline constexpr Vertex kDepot = 0;

struct Edge {
    Vertex parent;
    Vertex child;
    double length;
};

/// Rooted edge-weighted tree with the depot at vertex 0 and a vehicle capacity.
///
/// Immutable once built. Depot distances, the total edge length S and sorted
/// child lists are computed up front so every query is read-only.
class TreeInstance {
public:
    /// Validates the edge list and capacity. Vertices must be 0..n where n is
    /// the number of edges; each of 1..n must appear exactly once as a child.
    static TreeInstance build(std::span<const Edge> edges, int capacity);

    std::size_t vertex_count() const noexcept { return parent_.size(); }
    std::size_t customer_count() const noexcept { return parent_.size() - 1; }
    int capacity() const noexcept { return capacity_; }

    /// Parent of a non-depot vertex.
    Vertex parent(Vertex v) const;
    /// Length of the edge from v up to its parent.
    double edge_length(Vertex v) const;
    const std::vector<Vertex>& children(Vertex v) const;

    /// Sum of all edge lengths.
    double total_length() const noexcept { return total_length_; }

    double depot_distance(Vertex v) const;
    double path_distance(Vertex a, Vertex b) const;
    Vertex lowest_common_ancestor(Vertex a, Vertex b) const;

    /// Edges sorted by child index.
    std::vector<Edge> edges() const;

private:
    TreeInstance() = default;
    void check_vertex(Vertex v) const;

    int capacity_ = 1;
    std::vector<Vertex> parent_;
    std::vector<double> edge_length_;
    std::vector<double> depot_distance_;
    std::vector<std::size_t> depth_;
    std::vector<std::vector<Vertex>> children_;
    double total_length_ = 0.0;
};

/// The a priori visiting sequence of customers; the depot is implicit at both ends.
struct VisitOrder {
    std::vector<Vertex> sequence;

    std::size_t size() const noexcept { return sequence.size(); }
    bool operator==(const VisitOrder&) const = default;
};

/// Depth-first preorder from the depot, children explored in ascending index.
VisitOrder dfs_order(const TreeInstance& tree);

/// Throws InvalidOrder unless `order` is a permutation of the customers in
/// which every vertex comes after its parent.
void validate_order(const TreeInstance& tree, const VisitOrder& order);

/// Length of the closed walk 0, order..., 0 using tree path distances.
double closed_walk_length(const TreeInstance& tree, const VisitOrder& order);

} // namespace treevrpsd
