#pragma once

#include "treevrpsd/bounds.hpp"
#include "treevrpsd/demand.hpp"
#include "treevrpsd/policy.hpp"
#include "treevrpsd/tree.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace treevrpsd {

enum class EvalMode { exact, monte_carlo };

std::string_view to_string(EvalMode mode) noexcept;

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    bool operator==(const Estimate&) const = default;
};

struct EvalReport {
    std::string instance_id;
    Policy policy = Policy::split;
    EvalMode mode = EvalMode::exact;
    double expected_cost = 0.0;
    BoundSet bounds;
    double ratio_vs_lb = 1.0;
    double formula_ub = 0.0;
    bool ub_respected = true;
    /// Present in Monte Carlo mode.
    std::optional<Estimate> estimate;
};

struct EvalOptions {
    EvalMode mode = EvalMode::exact;
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 0;
    std::uint64_t enum_limit = kDefaultEnumLimit;
    /// Worker threads for Monte Carlo; 0 picks the hardware concurrency.
    unsigned threads = 0;
    std::string instance_id;
};

/// Number of (demand vector, initial load) pairs an exact evaluation visits.
std::uint64_t exact_enumeration_size(const DemandModel& model) noexcept;

/// Expected walk length averaged over all joint demands and all initial loads.
/// Throws TooLarge when exact_enumeration_size exceeds `limit`.
double exact_expected_cost(const TreeInstance& tree, const DemandModel& model, Policy policy,
                           std::uint64_t limit = kDefaultEnumLimit);

/// Mean of `samples` independent runs, replication r seeded by
/// replication_seed(master_seed, r). The result does not depend on `threads`.
Estimate monte_carlo_cost(const TreeInstance& tree, const DemandModel& model, Policy policy, std::uint64_t samples,
                          std::uint64_t master_seed, unsigned threads = 0);

EvalReport evaluate(const TreeInstance& tree, const DemandModel& model, Policy policy, const EvalOptions& options);

} // namespace treevrpsd
