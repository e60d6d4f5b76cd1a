#pragma once

#include "treevrpsd/demand.hpp"
#include "treevrpsd/tree.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace treevrpsd {

inline constexpr std::size_t kMaxPartitionCustomers = 10;

/// Clairvoyant unsplit solution: each group is served by one depot round trip
/// along the minimal subtree spanning the group and the depot.
struct PartitionSolution {
    /// Groups ordered by smallest member; members ascending.
    std::vector<std::vector<Vertex>> groups;
    double cost = 0.0;
};

/// Exhaustive search over set partitions (restricted growth strings) with
/// capacity pruning. Ties resolve to the lexicographically smallest string.
/// Throws TooLarge for more than kMaxPartitionCustomers customers.
PartitionSolution optimal_unsplit_partition(const TreeInstance& tree, std::span<const int> demands);

/// Twice the total length of the minimal subtree spanning `group` and the depot.
double group_round_trip(const TreeInstance& tree, std::span<const Vertex> group);

enum class ClairvoyantMode { edge, partition };

std::string_view to_string(ClairvoyantMode mode) noexcept;

/// Expectation over joint demands of a per-realization lower bound computed
/// with the demands known in advance.
double expected_clairvoyant_lb(const TreeInstance& tree, const DemandModel& model, ClairvoyantMode mode,
                               std::uint64_t limit = kDefaultEnumLimit);

} // namespace treevrpsd
