#include "treevrpsd/bounds.hpp"

#include "treevrpsd/error.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

namespace treevrpsd {

double bertsimas_lb(const TreeInstance& tree, const DemandModel& model)
{
    if (model.customer_count() != tree.customer_count()) {
        throw Error(ErrorCode::InconsistentRealization, "demand model does not match the tree");
    }
    double sum = 0.0;
    for (Vertex v = 1; v <= tree.customer_count(); ++v) {
        sum += tree.depot_distance(v) * model.expected_demand(v);
    }
    return 2.0 * sum / tree.capacity();
}

double tour_floor(const TreeInstance& tree)
{
    return 2.0 * tree.total_length();
}

BoundSet bound_set(const TreeInstance& tree, const DemandModel& model)
{
    BoundSet b;
    b.tour_floor = tour_floor(tree);
    b.bertsimas = bertsimas_lb(tree, model);
    b.combined_lb = std::max(b.tour_floor, b.bertsimas);
    b.split_ub = b.tour_floor + b.bertsimas;
    b.unsplit_ub = b.tour_floor + 2.0 * b.bertsimas;
    return b;
}

double trace_certificate(const RunTrace& trace, const TreeInstance& tree)
{
    double sum = 0.0;
    for (const auto& tour : trace.tours) {
        sum += tree.depot_distance(tour.farthest) * tour.load_dispatched;
    }
    return 2.0 * sum / tree.capacity();
}

double clairvoyant_edge_lb(const TreeInstance& tree, std::span<const int> demands)
{
    const std::size_t n = tree.customer_count();
    if (demands.size() != n) {
        throw Error(ErrorCode::InconsistentRealization,
                    std::to_string(demands.size()) + " demands for " + std::to_string(n) + " customers");
    }
    std::vector<std::int64_t> below(n + 1, 0);
    for (Vertex v = 1; v <= n; ++v) {
        below[v] = demands[v - 1];
    }
    // Reverse preorder visits children before parents.
    const auto order = dfs_order(tree);
    const std::int64_t q = tree.capacity();
    double total = 0.0;
    for (auto it = order.sequence.rbegin(); it != order.sequence.rend(); ++it) {
        const Vertex v = *it;
        below[tree.parent(v)] += below[v];
        const std::int64_t crossings = std::max<std::int64_t>(1, (below[v] + q - 1) / q);
        total += 2.0 * static_cast<double>(crossings) * tree.edge_length(v);
    }
    return total;
}

} // namespace treevrpsd
