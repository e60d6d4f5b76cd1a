#pragma once

// Reference computations used only by tests. None of these call into the
// policy engine, the bounds module or the evaluator; they recompute from the
// tree's parent pointers and raw edge lengths.

#include "treevrpsd/demand.hpp"
#include "treevrpsd/instance_io.hpp"
#include "treevrpsd/tree.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace treevrpsd::testing {

inline bool close(double a, double b, double rel = 1e-9)
{
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Distance by walking both endpoints up to their first shared ancestor.
inline double brute_path_distance(const TreeInstance& t, Vertex a, Vertex b)
{
    std::map<Vertex, double> up_from_a;
    double acc = 0.0;
    for (Vertex v = a;; v = t.parent(v)) {
        up_from_a[v] = acc;
        if (v == kDepot) {
            break;
        }
        acc += t.edge_length(v);
    }
    acc = 0.0;
    for (Vertex v = b;; v = t.parent(v)) {
        if (auto it = up_from_a.find(v); it != up_from_a.end()) {
            return acc + it->second;
        }
        acc += t.edge_length(v);
    }
}

inline double brute_edge_sum(const TreeInstance& t)
{
    double s = 0.0;
    for (Vertex v = 1; v <= t.customer_count(); ++v) {
        s += t.edge_length(v);
    }
    return s;
}

/// Breakpoint positions (1-based, visiting order) by simulating the load
/// counter unit by unit.
inline std::vector<std::size_t> unit_step_breakpoints(const std::vector<int>& demands_in_order, int l, int capacity)
{
    std::vector<std::size_t> out;
    int load = l;
    for (std::size_t i = 0; i < demands_in_order.size(); ++i) {
        bool hit = false;
        for (int unit = 0; unit < demands_in_order[i]; ++unit) {
            --load;
            if (load == 0) {
                hit = true;
                load = capacity;
            }
        }
        if (hit) {
            out.push_back(i + 1);
        }
    }
    return out;
}

/// Policy cost as the refill-free DFS walk plus the detour charged at each
/// breakpoint. `unsplit` doubles the round trip for a short load except at
/// the final customer; an exact emptying at the final customer costs nothing.
inline double decomposed_cost(const TreeInstance& t, const VisitOrder& order, const Realization& r, bool unsplit)
{
    std::vector<int> q;
    for (const Vertex v : order.sequence) {
        q.push_back(r.demand(v));
    }
    double cost = 2.0 * brute_edge_sum(t);
    const int capacity = t.capacity();
    int load = r.initial_load;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Vertex v = order.sequence[i];
        const bool last = i + 1 == q.size();
        const double home = brute_path_distance(t, kDepot, v);
        if (q[i] < load) {
            load -= q[i];
        } else if (q[i] == load) {
            if (!last) {
                const Vertex next = order.sequence[i + 1];
                cost += home + brute_path_distance(t, kDepot, next) - brute_path_distance(t, v, next);
            }
            load = capacity;
        } else {
            cost += (unsplit && !last ? 4.0 : 2.0) * home;
            load = capacity - (q[i] - load);
        }
    }
    return cost;
}

/// Plain nested-loop expectation over every (demand vector, initial load).
template <typename CostFn>
double brute_expectation(const DemandModel& m, CostFn&& cost)
{
    const std::size_t n = m.customer_count();
    double total = 0.0;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        Realization r;
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = m.pmf(i + 1).support()[idx[i]];
            r.demands.push_back(e.demand);
            p *= e.probability;
        }
        for (int l = 1; l <= m.capacity(); ++l) {
            r.initial_load = l;
            total += p * cost(r) / m.capacity();
        }
        std::size_t i = 0;
        while (i < n && ++idx[i] == m.pmf(i + 1).support().size()) {
            idx[i++] = 0;
        }
        if (i == n) {
            return total;
        }
    }
}

/// Small random instance with parameters drawn from `rng`.
inline Instance random_instance(std::mt19937_64& rng, int max_n, int max_q, const char* pmf = nullptr)
{
    static const char* families[] = {"det:*", "unif:*", "two:*"};
    static const Topology topologies[] = {Topology::path, Topology::star, Topology::random_attachment,
                                          Topology::caterpillar};
    GeneratorParams p;
    p.n = std::uniform_int_distribution<int>(0, max_n)(rng);
    p.capacity = std::uniform_int_distribution<int>(1, max_q)(rng);
    p.topology = topologies[rng() % 4];
    p.length_low = 0.25;
    p.length_high = 4.0;
    p.pmf = parse_pmf_family(pmf ? pmf : families[rng() % 3]);
    p.seed = rng();
    return generate(p);
}

inline Instance path_instance(int n, int capacity, const char* pmf)
{
    GeneratorParams p;
    p.n = n;
    p.capacity = capacity;
    p.pmf = parse_pmf_family(pmf);
    return generate(p);
}

} // namespace treevrpsd::testing
