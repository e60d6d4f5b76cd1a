#pragma once

#include "treevrpsd/demand.hpp"
#include "treevrpsd/policy.hpp"
#include "treevrpsd/tree.hpp"

#include <span>

namespace treevrpsd {

struct BoundSet {
    double tour_floor = 0.0;  ///< 2S
    double bertsimas = 0.0;   ///< (2/Q) sum d(0,i) E[D_i]
    double combined_lb = 0.0; ///< max(tour_floor, bertsimas)
    double split_ub = 0.0;    ///< tour_floor + bertsimas
    double unsplit_ub = 0.0;  ///< tour_floor + 2 * bertsimas

    double upper_bound(Policy policy) const noexcept { return policy == Policy::split ? split_ub : unsplit_ub; }
};

double bertsimas_lb(const TreeInstance& tree, const DemandModel& model);
double tour_floor(const TreeInstance& tree);
BoundSet bound_set(const TreeInstance& tree, const DemandModel& model);

/// (2/Q) sum over tours of d(0, farthest) * units delivered in that tour.
/// Never exceeds trace.total_length.
double trace_certificate(const RunTrace& trace, const TreeInstance& tree);

/// sum over edges of 2 * max(1, ceil(D_e / Q)) * length(e), with D_e the total
/// demand in the subtree below e. `demands` is indexed by customer - 1.
double clairvoyant_edge_lb(const TreeInstance& tree, std::span<const int> demands);

} // namespace treevrpsd
