#include "treevrpsd/policy.hpp"

#include "treevrpsd/error.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>
#include <string>

namespace treevrpsd {

std::string_view to_string(Policy policy) noexcept
{
    return policy == Policy::split ? "split" : "unsplit";
}

Policy parse_policy(std::string_view text)
{
    if (text == "split") {
        return Policy::split;
    }
    if (text == "unsplit") {
        return Policy::unsplit;
    }
    throw Error(ErrorCode::BadParams, "unknown policy '" + std::string(text) + "'");
}

std::vector<Vertex> RunTrace::breakpoint_vertices() const
{
    std::vector<Vertex> out;
    out.reserve(breakpoints.size());
    for (const auto& b : breakpoints) {
        out.push_back(b.customer);
    }
    return out;
}

namespace {

class CostSink {
public:
    void move(Vertex, Vertex, double distance) { total += distance; }
    void serve(Vertex, int, int, int) {}
    void breakpoint(Vertex, BreakCase) {}
    void reload(int, int) {}
    void customer_done(int) {}

    double total = 0.0;
};

class TraceSink {
public:
    explicit TraceSink(Policy policy) { trace.policy = policy; }

    void move(Vertex from, Vertex to, double distance)
    {
        if (from == kDepot) {
            trace.tours.emplace_back();
        }
        trace.tours.back().length += distance;
        record(TraceStep::Kind::move, trace.movements, Movement{from, to, distance});
        trace.total_length += distance;
    }

    void serve(Vertex customer, int units, int before, int after)
    {
        auto& tour = trace.tours.back();
        tour.customers_served.push_back({customer, units});
        tour.load_dispatched += units;
        record(TraceStep::Kind::serve, trace.services, ServiceEvent{customer, units, before, after});
    }

    void breakpoint(Vertex customer, BreakCase kind)
    {
        record(TraceStep::Kind::breakpoint, trace.breakpoints, Breakpoint{customer, kind});
    }

    void reload(int before, int after) { record(TraceStep::Kind::reload, trace.reloads, Reload{before, after}); }

    void customer_done(int load) { trace.loads_after_customer.push_back(load); }

    RunTrace finish(const TreeInstance& tree) &&
    {
        for (auto& tour : trace.tours) {
            for (const auto& stop : tour.customers_served) {
                if (tour.farthest == kDepot || tree.depot_distance(stop.customer) > tree.depot_distance(tour.farthest)) {
                    tour.farthest = stop.customer;
                }
            }
        }
        return std::move(trace);
    }

private:
    template <typename T>
    void record(TraceStep::Kind kind, std::vector<T>& into, T value)
    {
        trace.steps.push_back({kind, into.size()});
        into.push_back(value);
    }

    RunTrace trace;
};

// Walks the a priori order applying the refill rules at each customer.
// Loads after every customer stay in 1..Q except after the final one.
template <typename Sink>
void drive(Policy policy, const TreeInstance& tree, const VisitOrder& order, const Realization& r, Sink& sink)
{
    const int capacity = tree.capacity();
    const auto go = [&](Vertex from, Vertex to) { sink.move(from, to, tree.path_distance(from, to)); };

    int load = r.initial_load;
    Vertex at = kDepot;
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        const Vertex v = order.sequence[idx];
        const bool last = idx + 1 == order.size();
        const int demand = r.demand(v);
        const int on_arrival = load;
        go(at, v);
        at = v;

        if (demand < on_arrival) {
            load = on_arrival - demand;
            sink.serve(v, demand, on_arrival, load);
        } else if (demand == on_arrival) {
            sink.breakpoint(v, BreakCase::exhausted);
            sink.serve(v, demand, on_arrival, 0);
            load = 0;
            if (!last) {
                go(v, kDepot);
                sink.reload(0, capacity);
                load = capacity;
                at = kDepot;
            }
        } else if (policy == Policy::split) {
            sink.breakpoint(v, BreakCase::short_load);
            sink.serve(v, on_arrival, on_arrival, 0);
            const int remainder = demand - on_arrival;
            // After the final customer only the remainder is worth fetching.
            const int refill = last ? remainder : capacity;
            go(v, kDepot);
            sink.reload(0, refill);
            go(kDepot, v);
            load = refill - remainder;
            sink.serve(v, remainder, refill, load);
        } else {
            sink.breakpoint(v, BreakCase::short_load);
            go(v, kDepot);
            sink.reload(on_arrival, demand);
            go(kDepot, v);
            sink.serve(v, demand, demand, 0);
            load = 0;
            if (!last) {
                go(v, kDepot);
                load = capacity + on_arrival - demand;
                sink.reload(0, load);
                go(kDepot, v);
            }
        }
        sink.customer_done(load);
    }
    if (at != kDepot) {
        go(at, kDepot);
    }
}

void check_inputs(const TreeInstance& tree, const VisitOrder& order, const Realization& r)
{
    validate_realization(tree, r);
    validate_order(tree, order);
}

} // namespace

RunTrace run_policy(Policy policy, const TreeInstance& tree, const VisitOrder& order, const Realization& r)
{
    check_inputs(tree, order, r);
    TraceSink sink(policy);
    drive(policy, tree, order, r, sink);
    return std::move(sink).finish(tree);
}

RunTrace run_split(const TreeInstance& tree, const VisitOrder& order, const Realization& r)
{
    return run_policy(Policy::split, tree, order, r);
}

RunTrace run_unsplit(const TreeInstance& tree, const VisitOrder& order, const Realization& r)
{
    return run_policy(Policy::unsplit, tree, order, r);
}

double run_cost(Policy policy, const TreeInstance& tree, const VisitOrder& order, const Realization& r)
{
    check_inputs(tree, order, r);
    CostSink sink;
    drive(policy, tree, order, r, sink);
    return sink.total;
}

std::vector<std::size_t> arithmetic_breakpoints(std::span<const int> demands, int initial_load, int capacity)
{
    std::vector<std::size_t> out;
    std::int64_t prefix = 0;
    for (std::size_t i = 0; i < demands.size(); ++i) {
        const std::int64_t before = prefix;
        prefix += demands[i];
        // Smallest l + p*Q (p >= 0) strictly above the previous prefix.
        std::int64_t target = initial_load;
        if (target <= before) {
            target += (before - target) / capacity * capacity + capacity;
        }
        if (target <= prefix) {
            out.push_back(i + 1);
        }
    }
    return out;
}

Rational Rational::make(std::int64_t numerator, std::int64_t denominator)
{
    if (denominator == 0) {
        throw Error(ErrorCode::BadParams, "zero denominator");
    }
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    return {numerator / g, denominator / g};
}

Rational breakpoint_probability_exact(std::span<const int> demands, int capacity, std::size_t position)
{
    if (capacity < 1) {
        throw Error(ErrorCode::BadCapacity, "capacity must be at least 1");
    }
    if (position < 1 || position > demands.size()) {
        throw Error(ErrorCode::UnknownVertex, "position " + std::to_string(position));
    }
    std::int64_t hits = 0;
    for (int l = 1; l <= capacity; ++l) {
        const auto bps = arithmetic_breakpoints(demands, l, capacity);
        if (std::find(bps.begin(), bps.end(), position) != bps.end()) {
            ++hits;
        }
    }
    return Rational::make(hits, capacity);
}

namespace {

std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

} // namespace

void write_trace(std::ostream& out, const RunTrace& trace)
{
    for (const auto& step : trace.steps) {
        switch (step.kind) {
        case TraceStep::Kind::move: {
            const auto& m = trace.movements[step.index];
            out << "MOVE " << m.from << ' ' << m.to << ' ' << format_double(m.distance) << '\n';
            break;
        }
        case TraceStep::Kind::serve: {
            const auto& s = trace.services[step.index];
            out << "SERVE " << s.customer << ' ' << s.delivered << ' ' << s.load_before << ' ' << s.load_after
                << '\n';
            break;
        }
        case TraceStep::Kind::breakpoint: {
            const auto& b = trace.breakpoints[step.index];
            out << "BREAKPOINT " << b.customer << ' ' << static_cast<char>(b.kind) << '\n';
            break;
        }
        case TraceStep::Kind::reload:
            break;
        }
    }
}

} // namespace treevrpsd
