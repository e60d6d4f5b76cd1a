#include "treevrpsd/oracle.hpp"

#include "treevrpsd/bounds.hpp"
#include "treevrpsd/error.hpp"
#include "treevrpsd/summation.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace treevrpsd {

namespace {

using Mask = std::uint32_t;

// Customers in the subtree of each vertex, as bit (v - 1).
std::vector<Mask> subtree_masks(const TreeInstance& tree)
{
    const std::size_t n = tree.customer_count();
    std::vector<Mask> mask(n + 1, 0);
    const auto order = dfs_order(tree);
    for (auto it = order.sequence.rbegin(); it != order.sequence.rend(); ++it) {
        const Vertex v = *it;
        mask[v] |= Mask{1} << (v - 1);
        mask[tree.parent(v)] |= mask[v];
    }
    return mask;
}

double spanning_round_trip(const TreeInstance& tree, const std::vector<Mask>& below, Mask group)
{
    double length = 0.0;
    for (Vertex v = 1; v <= tree.customer_count(); ++v) {
        if (below[v] & group) {
            length += tree.edge_length(v);
        }
    }
    return 2.0 * length;
}

class PartitionSearch {
public:
    PartitionSearch(const TreeInstance& tree, std::span<const int> demands)
        : tree_(tree), demands_(demands), below_(subtree_masks(tree)), n_(demands.size()), label_(n_, 0)
    {
    }

    PartitionSolution run()
    {
        if (n_ == 0) {
            return {};
        }
        recurse(0, 0);
        PartitionSolution best;
        best.cost = best_cost_;
        std::size_t groups = 0;
        for (const auto g : best_label_) {
            groups = std::max<std::size_t>(groups, g + 1);
        }
        best.groups.resize(groups);
        for (std::size_t i = 0; i < n_; ++i) {
            best.groups[best_label_[i]].push_back(i + 1);
        }
        return best;
    }

private:
    // Assigns customer i (0-based) to an existing group or opens group `used`.
    void recurse(std::size_t i, std::size_t used)
    {
        if (i == n_) {
            double cost = 0.0;
            for (std::size_t g = 0; g < used; ++g) {
                cost += spanning_round_trip(tree_, below_, group_mask_[g]);
            }
            // Strict improvement keeps the first (lexicographically smallest) optimum.
            if (cost < best_cost_) {
                best_cost_ = cost;
                best_label_ = label_;
            }
            return;
        }
        const int d = demands_[i];
        for (std::size_t g = 0; g <= used; ++g) {
            if (g == used) {
                group_load_.push_back(0);
                group_mask_.push_back(0);
            }
            if (group_load_[g] + d <= tree_.capacity()) {
                group_load_[g] += d;
                group_mask_[g] |= Mask{1} << i;
                label_[i] = g;
                recurse(i + 1, g == used ? used + 1 : used);
                group_load_[g] -= d;
                group_mask_[g] &= ~(Mask{1} << i);
            }
            if (g == used) {
                group_load_.pop_back();
                group_mask_.pop_back();
            }
        }
    }

    const TreeInstance& tree_;
    std::span<const int> demands_;
    std::vector<Mask> below_;
    std::size_t n_;
    std::vector<std::size_t> label_;
    std::vector<std::size_t> best_label_;
    std::vector<int> group_load_;
    std::vector<Mask> group_mask_;
    double best_cost_ = std::numeric_limits<double>::infinity();
};

} // namespace

double group_round_trip(const TreeInstance& tree, std::span<const Vertex> group)
{
    Mask mask = 0;
    for (const Vertex v : group) {
        if (v == kDepot || v > tree.customer_count() || v > kMaxPartitionCustomers) {
            throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " cannot be grouped");
        }
        mask |= Mask{1} << (v - 1);
    }
    return spanning_round_trip(tree, subtree_masks(tree), mask);
}

PartitionSolution optimal_unsplit_partition(const TreeInstance& tree, std::span<const int> demands)
{
    const std::size_t n = tree.customer_count();
    if (demands.size() != n) {
        throw Error(ErrorCode::InconsistentRealization,
                    std::to_string(demands.size()) + " demands for " + std::to_string(n) + " customers");
    }
    if (n > kMaxPartitionCustomers) {
        throw Error(ErrorCode::TooLarge, "partition search is limited to "
                                             + std::to_string(kMaxPartitionCustomers) + " customers");
    }
    for (const int d : demands) {
        if (d < 1 || d > tree.capacity()) {
            throw Error(ErrorCode::InconsistentRealization, "demand " + std::to_string(d) + " outside 1..Q");
        }
    }
    return PartitionSearch(tree, demands).run();
}

std::string_view to_string(ClairvoyantMode mode) noexcept
{
    return mode == ClairvoyantMode::edge ? "edge" : "partition";
}

double expected_clairvoyant_lb(const TreeInstance& tree, const DemandModel& model, ClairvoyantMode mode,
                               std::uint64_t limit)
{
    if (model.customer_count() != tree.customer_count()) {
        throw Error(ErrorCode::InconsistentRealization, "demand model does not match the tree");
    }
    if (mode == ClairvoyantMode::partition && tree.customer_count() > kMaxPartitionCustomers) {
        throw Error(ErrorCode::TooLarge, "partition search is limited to "
                                             + std::to_string(kMaxPartitionCustomers) + " customers");
    }
    CompensatedSum total;
    enumerate_joint(
        model,
        [&](std::span<const int> demands, double probability) {
            const double lb = mode == ClairvoyantMode::edge ? clairvoyant_edge_lb(tree, demands)
                                                            : optimal_unsplit_partition(tree, demands).cost;
            total.add(probability * lb);
        },
        limit);
    return total.value();
}

} // namespace treevrpsd
