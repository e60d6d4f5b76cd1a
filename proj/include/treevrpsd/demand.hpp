#pragma once

#include "treevrpsd/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace treevrpsd {

inline constexpr std::uint64_t kDefaultEnumLimit = 1'000'000;

struct PmfEntry {
    int demand;
    double probability;

    bool operator==(const PmfEntry&) const = default;
};

/// Probability mass function of one customer's demand over {1..Q}.
///
/// Entries are stored in ascending demand order and only where the mass is
/// positive, so `support()` is exactly what enumeration and sampling walk.
class DemandPMF {
public:
    /// Rejects mass at zero, keys outside 0..Q, negative masses, duplicate keys
    /// and totals further than 1e-12 from one. Zero-mass entries are dropped.
    static DemandPMF make(std::span<const PmfEntry> entries, int capacity);
    static DemandPMF point_mass(int demand, int capacity);

    std::span<const PmfEntry> support() const noexcept { return entries_; }
    double expectation() const noexcept;
    int max_demand() const noexcept { return entries_.back().demand; }

    /// Inverse-CDF lookup over ascending demands for u in [0, 1).
    int quantile(double u) const noexcept;

    bool operator==(const DemandPMF&) const = default;

private:
    DemandPMF() = default;
    std::vector<PmfEntry> entries_;
};

/// One independent demand distribution per customer 1..n.
class DemandModel {
public:
    DemandModel(std::vector<DemandPMF> per_customer, int capacity);

    std::size_t customer_count() const noexcept { return pmfs_.size(); }
    int capacity() const noexcept { return capacity_; }
    const DemandPMF& pmf(Vertex customer) const;
    double expected_demand(Vertex customer) const { return pmf(customer).expectation(); }

    /// Number of joint demand vectors, saturating at UINT64_MAX.
    std::uint64_t joint_size() const noexcept;

    bool operator==(const DemandModel&) const = default;

private:
    std::vector<DemandPMF> pmfs_;
    int capacity_;
};

/// A fixed demand vector plus the vehicle's initial load.
struct Realization {
    /// demands[v - 1] is the demand of customer v.
    std::vector<int> demands;
    int initial_load = 1;

    int demand(Vertex customer) const { return demands.at(customer - 1); }
    bool operator==(const Realization&) const = default;
};

/// Throws InconsistentRealization unless the realization has one demand per
/// customer in {1..Q} and an initial load in {1..Q}.
void validate_realization(const TreeInstance& tree, const Realization& r);

/// Seed of replication `index` under `master_seed`; a pure function of both.
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Draws every demand by inverse CDF and the initial load uniformly on {1..Q}.
Realization sample_realization(const DemandModel& model, std::mt19937_64& rng);

using JointVisitor = std::function<void(std::span<const int> demands, double probability)>;

/// Visits every joint demand vector with its product probability, in
/// lexicographic order of ascending per-customer supports.
/// Throws TooLarge if the number of vectors exceeds `limit`.
void enumerate_joint(const DemandModel& model, const JointVisitor& visit, std::uint64_t limit = kDefaultEnumLimit);

} // namespace treevrpsd
