#include "treevrpsd/evaluator.hpp"

#include "treevrpsd/error.hpp"
#include "treevrpsd/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace treevrpsd {

std::string_view to_string(EvalMode mode) noexcept
{
    return mode == EvalMode::exact ? "exact" : "monte_carlo";
}

std::uint64_t exact_enumeration_size(const DemandModel& model) noexcept
{
    const std::uint64_t joint = model.joint_size();
    const std::uint64_t q = static_cast<std::uint64_t>(model.capacity());
    if (joint > std::numeric_limits<std::uint64_t>::max() / q) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return joint * q;
}

double exact_expected_cost(const TreeInstance& tree, const DemandModel& model, Policy policy, std::uint64_t limit)
{
    if (model.customer_count() != tree.customer_count() || model.capacity() != tree.capacity()) {
        throw Error(ErrorCode::InconsistentRealization, "demand model does not match the tree");
    }
    const std::uint64_t size = exact_enumeration_size(model);
    if (size > limit) {
        throw Error(ErrorCode::TooLarge, std::to_string(size) + " (demand, load) cases exceed the limit of "
                                             + std::to_string(limit) + "; use Monte Carlo");
    }
    const auto order = dfs_order(tree);
    const int capacity = tree.capacity();
    CompensatedSum total;
    Realization r;
    enumerate_joint(
        model,
        [&](std::span<const int> demands, double probability) {
            r.demands.assign(demands.begin(), demands.end());
            CompensatedSum over_loads;
            for (int l = 1; l <= capacity; ++l) {
                r.initial_load = l;
                over_loads.add(run_cost(policy, tree, order, r));
            }
            total.add(probability * over_loads.value() / capacity);
        },
        limit);
    return total.value();
}

Estimate monte_carlo_cost(const TreeInstance& tree, const DemandModel& model, Policy policy, std::uint64_t samples,
                          std::uint64_t master_seed, unsigned threads)
{
    if (samples < 2) {
        throw Error(ErrorCode::BadParams, "Monte Carlo needs at least 2 samples");
    }
    if (model.customer_count() != tree.customer_count() || model.capacity() != tree.capacity()) {
        throw Error(ErrorCode::InconsistentRealization, "demand model does not match the tree");
    }
    const auto order = dfs_order(tree);
    std::vector<double> costs(samples);

    const auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            std::mt19937_64 rng(replication_seed(master_seed, rep));
            costs[rep] = run_cost(policy, tree, order, sample_realization(model, rng));
        }
    };

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::uint64_t workers = std::min<std::uint64_t>(threads, samples);
    if (workers <= 1) {
        run_range(0, samples);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (samples + workers - 1) / workers;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(samples, begin + chunk);
            if (begin < end) {
                pool.emplace_back(run_range, begin, end);
            }
        }
    }

    // Reduction in replication order keeps results independent of the worker count.
    CompensatedSum sum;
    for (const double c : costs) {
        sum.add(c);
    }
    const double n = static_cast<double>(samples);
    const double mean = sum.value() / n;
    CompensatedSum squares;
    for (const double c : costs) {
        squares.add((c - mean) * (c - mean));
    }
    const double variance = std::max(0.0, squares.value() / (n - 1.0));

    Estimate est;
    est.mean = mean;
    est.std_error = std::sqrt(variance / n);
    est.ci95_low = mean - 1.96 * est.std_error;
    est.ci95_high = mean + 1.96 * est.std_error;
    est.samples = samples;
    est.seed = master_seed;
    return est;
}

EvalReport evaluate(const TreeInstance& tree, const DemandModel& model, Policy policy, const EvalOptions& options)
{
    EvalReport report;
    report.instance_id = options.instance_id;
    report.policy = policy;
    report.mode = options.mode;
    report.bounds = bound_set(tree, model);
    if (options.mode == EvalMode::exact) {
        report.expected_cost = exact_expected_cost(tree, model, policy, options.enum_limit);
    } else {
        report.estimate = monte_carlo_cost(tree, model, policy, options.samples, options.seed, options.threads);
        report.expected_cost = report.estimate->mean;
    }
    report.ratio_vs_lb =
        report.bounds.combined_lb > 0.0 ? report.expected_cost / report.bounds.combined_lb : 1.0;
    report.formula_ub = report.bounds.upper_bound(policy);
    report.ub_respected = report.expected_cost <= report.formula_ub + 1e-9 * report.formula_ub;
    return report;
}

} // namespace treevrpsd
