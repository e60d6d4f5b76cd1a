#pragma once

#include "treevrpsd/demand.hpp"
#include "treevrpsd/tree.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace treevrpsd {

enum class Policy { split, unsplit };

std::string_view to_string(Policy policy) noexcept;
/// Parses "split" or "unsplit"; throws BadParams otherwise.
Policy parse_policy(std::string_view text);

/// Refill case at a breakpoint: load exactly used up (c) or short (d).
enum class BreakCase : char { exhausted = 'c', short_load = 'd' };

struct Movement {
    Vertex from;
    Vertex to;
    double distance;
};

struct ServiceEvent {
    Vertex customer;
    int delivered;
    int load_before;
    int load_after;
};

struct Breakpoint {
    Vertex customer;
    BreakCase kind;

    bool operator==(const Breakpoint&) const = default;
};

/// A change of the onboard load while at the depot.
struct Reload {
    int load_before;
    int load_after;
};

struct TourStop {
    Vertex customer;
    int units;
};

/// Walk segment that starts with a departure from the depot.
struct Tour {
    std::vector<TourStop> customers_served;
    int load_dispatched = 0;
    /// Served customer farthest from the depot; the depot if nothing was served.
    Vertex farthest = kDepot;
    double length = 0.0;
};

struct TraceStep {
    enum class Kind { move, serve, breakpoint, reload };
    Kind kind;
    std::size_t index; // into the matching vector of RunTrace
};

/// Complete record of one policy execution on one realization.
struct RunTrace {
    Policy policy = Policy::split;
    std::vector<Movement> movements;
    std::vector<ServiceEvent> services;
    std::vector<Breakpoint> breakpoints;
    std::vector<Reload> reloads;
    std::vector<Tour> tours;
    /// Load carried away from each customer, in visiting order.
    std::vector<int> loads_after_customer;
    /// Chronological interleaving of the vectors above.
    std::vector<TraceStep> steps;
    double total_length = 0.0;

    std::vector<Vertex> breakpoint_vertices() const;
};

RunTrace run_split(const TreeInstance& tree, const VisitOrder& order, const Realization& r);
RunTrace run_unsplit(const TreeInstance& tree, const VisitOrder& order, const Realization& r);
RunTrace run_policy(Policy policy, const TreeInstance& tree, const VisitOrder& order, const Realization& r);

/// Total walk length only; follows exactly the same steps as run_policy.
double run_cost(Policy policy, const TreeInstance& tree, const VisitOrder& order, const Realization& r);

/// Positions i (1-based, in visiting order) for which some integer p >= 0 has
/// prefix(i-1) < l + p*Q <= prefix(i). `demands` is given in visiting order.
std::vector<std::size_t> arithmetic_breakpoints(std::span<const int> demands, int initial_load, int capacity);

struct Rational {
    std::int64_t numerator;
    std::int64_t denominator;

    /// Reduced to lowest terms with a positive denominator.
    static Rational make(std::int64_t numerator, std::int64_t denominator);
    bool operator==(const Rational&) const = default;
};

/// Fraction of initial loads l in {1..Q} that make position i (1-based) a breakpoint.
Rational breakpoint_probability_exact(std::span<const int> demands, int capacity, std::size_t position);

/// One line per step: `MOVE from to dist`, `SERVE node units load_before load_after`,
/// `BREAKPOINT node case`. Reloads are implied by the loads and not printed.
void write_trace(std::ostream& out, const RunTrace& trace);

} // namespace treevrpsd
