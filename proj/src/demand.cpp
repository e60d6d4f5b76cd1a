#include "treevrpsd/demand.hpp"

#include "treevrpsd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace treevrpsd {

DemandPMF DemandPMF::make(std::span<const PmfEntry> entries, int capacity)
{
    if (capacity < 1) {
        throw Error(ErrorCode::BadCapacity, "capacity must be at least 1");
    }
    if (entries.empty()) {
        throw Error(ErrorCode::NotNormalized, "pmf has no entries");
    }
    std::vector<PmfEntry> sorted(entries.begin(), entries.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.demand < b.demand; });

    double total = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& [k, p] = sorted[i];
        if (i > 0 && sorted[i - 1].demand == k) {
            throw Error(ErrorCode::DuplicateKey, "demand " + std::to_string(k) + " listed twice");
        }
        if (k < 0 || k > capacity) {
            throw Error(ErrorCode::OutOfRange,
                        "demand " + std::to_string(k) + " outside 1.." + std::to_string(capacity));
        }
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw Error(ErrorCode::NegativeMass, "demand " + std::to_string(k) + " has mass " + std::to_string(p));
        }
        if (k == 0 && p > 0.0) {
            throw Error(ErrorCode::MassAtZero, "customers must have positive demand");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::NotNormalized, "masses sum to " + std::to_string(total));
    }

    DemandPMF pmf;
    std::copy_if(sorted.begin(), sorted.end(), std::back_inserter(pmf.entries_),
                 [](const PmfEntry& e) { return e.probability > 0.0; });
    return pmf;
}

DemandPMF DemandPMF::point_mass(int demand, int capacity)
{
    const PmfEntry entry{demand, 1.0};
    return make({&entry, 1}, capacity);
}

double DemandPMF::expectation() const noexcept
{
    double mean = 0.0;
    for (const auto& [k, p] : entries_) {
        mean += k * p;
    }
    return mean;
}

int DemandPMF::quantile(double u) const noexcept
{
    double cumulative = 0.0;
    for (const auto& [k, p] : entries_) {
        cumulative += p;
        if (u < cumulative) {
            return k;
        }
    }
    return entries_.back().demand;
}

DemandModel::DemandModel(std::vector<DemandPMF> per_customer, int capacity)
    : pmfs_(std::move(per_customer)), capacity_(capacity)
{
    if (capacity_ < 1) {
        throw Error(ErrorCode::BadCapacity, "capacity must be at least 1");
    }
    for (std::size_t i = 0; i < pmfs_.size(); ++i) {
        if (pmfs_[i].max_demand() > capacity_) {
            throw Error(ErrorCode::OutOfRange, "customer " + std::to_string(i + 1) + " demand exceeds capacity");
        }
    }
}

const DemandPMF& DemandModel::pmf(Vertex customer) const
{
    if (customer == kDepot || customer > pmfs_.size()) {
        throw Error(ErrorCode::UnknownVertex, "no customer " + std::to_string(customer));
    }
    return pmfs_[customer - 1];
}

std::uint64_t DemandModel::joint_size() const noexcept
{
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t size = 1;
    for (const auto& pmf : pmfs_) {
        const std::uint64_t k = pmf.support().size();
        if (size > kMax / k) {
            return kMax;
        }
        size *= k;
    }
    return size;
}

void validate_realization(const TreeInstance& tree, const Realization& r)
{
    const int q = tree.capacity();
    if (r.demands.size() != tree.customer_count()) {
        throw Error(ErrorCode::InconsistentRealization,
                    std::to_string(r.demands.size()) + " demands for " + std::to_string(tree.customer_count())
                        + " customers");
    }
    if (r.initial_load < 1 || r.initial_load > q) {
        throw Error(ErrorCode::InconsistentRealization, "initial load " + std::to_string(r.initial_load));
    }
    for (std::size_t i = 0; i < r.demands.size(); ++i) {
        if (r.demands[i] < 1 || r.demands[i] > q) {
            throw Error(ErrorCode::InconsistentRealization,
                        "customer " + std::to_string(i + 1) + " demand " + std::to_string(r.demands[i]));
        }
    }
}

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t index) noexcept
{
    return mix(mix(master_seed) ^ index);
}

Realization sample_realization(const DemandModel& model, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Realization r;
    r.demands.reserve(model.customer_count());
    for (Vertex v = 1; v <= model.customer_count(); ++v) {
        r.demands.push_back(model.pmf(v).quantile(unit(rng)));
    }
    r.initial_load = std::uniform_int_distribution<int>(1, model.capacity())(rng);
    return r;
}

void enumerate_joint(const DemandModel& model, const JointVisitor& visit, std::uint64_t limit)
{
    const std::uint64_t size = model.joint_size();
    if (size > limit) {
        throw Error(ErrorCode::TooLarge,
                    std::to_string(size) + " joint demand vectors exceed the limit of " + std::to_string(limit));
    }
    const std::size_t n = model.customer_count();
    std::vector<std::size_t> digit(n, 0);
    std::vector<int> demands(n);
    for (std::size_t i = 0; i < n; ++i) {
        demands[i] = model.pmf(i + 1).support().front().demand;
    }
    while (true) {
        double probability = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            probability *= model.pmf(i + 1).support()[digit[i]].probability;
        }
        visit(demands, probability);

        // Odometer with the last customer varying fastest.
        std::size_t i = n;
        while (i > 0) {
            --i;
            const auto support = model.pmf(i + 1).support();
            if (++digit[i] < support.size()) {
                demands[i] = support[digit[i]].demand;
                break;
            }
            digit[i] = 0;
            demands[i] = support.front().demand;
            if (i == 0) {
                return;
            }
        }
        if (n == 0) {
            return;
        }
    }
}

} // namespace treevrpsd
