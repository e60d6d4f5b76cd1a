#include "support/oracles.hpp"

#include "treevrpsd/error.hpp"
#include "treevrpsd/policy.hpp"

#include <doctest.h>

#include <numeric>
#include <sstream>

using namespace treevrpsd;
using treevrpsd::testing::close;

namespace {

TreeInstance path_tree(int capacity)
{
    const Edge edges[] = {{0, 1, 1.0}, {1, 2, 1.0}};
    return TreeInstance::build(edges, capacity);
}

TreeInstance single_edge(int capacity)
{
    const Edge edges[] = {{0, 1, 1.0}};
    return TreeInstance::build(edges, capacity);
}

std::vector<int> in_order(const VisitOrder& order, const Realization& r)
{
    std::vector<int> q;
    for (const Vertex v : order.sequence) {
        q.push_back(r.demand(v));
    }
    return q;
}

std::vector<Vertex> positions_to_vertices(const VisitOrder& order, const std::vector<std::size_t>& positions)
{
    std::vector<Vertex> out;
    for (const auto p : positions) {
        out.push_back(order.sequence[p - 1]);
    }
    return out;
}

// Structural invariants every trace must satisfy.
void check_trace(const TreeInstance& t, const VisitOrder& order, const Realization& r, const RunTrace& trace)
{
    const int q_cap = t.capacity();
    double sum = 0.0;
    Vertex at = kDepot;
    for (const auto& m : trace.movements) {
        REQUIRE(m.from == at);
        REQUIRE(m.distance == t.path_distance(m.from, m.to));
        sum += m.distance;
        at = m.to;
    }
    REQUIRE(at == kDepot);
    REQUIRE(close(sum, trace.total_length));

    std::vector<int> delivered(t.vertex_count(), 0);
    std::vector<int> visits(t.vertex_count(), 0);
    for (const auto& s : trace.services) {
        REQUIRE(s.delivered >= 0);
        REQUIRE(s.delivered <= q_cap);
        REQUIRE(s.load_after == s.load_before - s.delivered);
        REQUIRE(s.load_before <= q_cap);
        REQUIRE(s.load_after >= 0);
        delivered[s.customer] += s.delivered;
        ++visits[s.customer];
    }
    for (const Vertex v : order.sequence) {
        REQUIRE(delivered[v] == r.demand(v));
        if (trace.policy == Policy::unsplit) {
            REQUIRE(visits[v] == 1);
        }
    }
    for (const auto& reload : trace.reloads) {
        REQUIRE(reload.load_after >= reload.load_before);
        REQUIRE(reload.load_after <= q_cap);
    }
    // Load is continuous across steps: services and reloads chain.
    int load = r.initial_load;
    for (const auto& step : trace.steps) {
        if (step.kind == TraceStep::Kind::serve) {
            REQUIRE(trace.services[step.index].load_before == load);
            load = trace.services[step.index].load_after;
        } else if (step.kind == TraceStep::Kind::reload) {
            REQUIRE(trace.reloads[step.index].load_before == load);
            load = trace.reloads[step.index].load_after;
        }
    }
    double tour_total = 0.0;
    for (const auto& tour : trace.tours) {
        const int units = std::accumulate(tour.customers_served.begin(), tour.customers_served.end(), 0,
                                          [](int acc, const TourStop& s) { return acc + s.units; });
        REQUIRE(units == tour.load_dispatched);
        REQUIRE(tour.load_dispatched <= q_cap);
        for (const auto& s : tour.customers_served) {
            REQUIRE(t.depot_distance(s.customer) <= t.depot_distance(tour.farthest));
        }
        REQUIRE(tour.length >= 2.0 * t.depot_distance(tour.farthest) - 1e-9);
        tour_total += tour.length;
    }
    REQUIRE(close(tour_total, trace.total_length));
}

} // namespace

TEST_CASE("run_split hand traces")
{
    const auto t = path_tree(2);
    const auto order = dfs_order(t);

    const auto a = run_split(t, order, Realization{{1, 1}, 1});
    CHECK(a.breakpoint_vertices() == std::vector<Vertex>{1});
    CHECK(a.total_length == 6.0);
    const auto b = run_split(t, order, Realization{{1, 1}, 2});
    CHECK(b.breakpoint_vertices() == std::vector<Vertex>{2});
    CHECK(b.total_length == 4.0);
    CHECK((a.total_length + b.total_length) / 2 == 5.0);

    const auto e = single_edge(2);
    const auto eo = dfs_order(e);
    const auto c = run_split(e, eo, Realization{{2}, 2});
    CHECK(c.total_length == 2.0);
    CHECK(c.breakpoints == std::vector<Breakpoint>{{1, BreakCase::exhausted}});

    const auto d = run_split(e, eo, Realization{{2}, 1});
    CHECK(d.total_length == 4.0);
    CHECK(d.services.size() == 2);
    CHECK(d.services[0].delivered == 1);
    CHECK(d.services[1].delivered == 1);
    CHECK(d.breakpoints == std::vector<Breakpoint>{{1, BreakCase::short_load}});
}

TEST_CASE("run_unsplit hand traces")
{
    const auto t = path_tree(3);
    const auto order = dfs_order(t);
    CHECK(run_unsplit(t, order, Realization{{2, 2}, 1}).total_length == 8.0);
    CHECK(run_split(t, order, Realization{{2, 2}, 1}).total_length == 6.0);
    CHECK(run_unsplit(t, order, Realization{{2, 2}, 2}).total_length == 6.0);
    CHECK(run_split(t, order, Realization{{2, 2}, 2}).total_length == 6.0);

    const auto e = single_edge(2);
    const auto tr = run_unsplit(e, dfs_order(e), Realization{{2}, 1});
    CHECK(tr.total_length == 4.0);
    REQUIRE(tr.services.size() == 1);
    CHECK(tr.services[0].delivered == 2);
}

TEST_CASE("trace dump golden")
{
    const auto t = path_tree(3);
    std::ostringstream out;
    write_trace(out, run_unsplit(t, dfs_order(t), Realization{{2, 2}, 1}));
    CHECK(out.str()
          == "MOVE 0 1 1\n"
             "BREAKPOINT 1 d\n"
             "MOVE 1 0 1\n"
             "MOVE 0 1 1\n"
             "SERVE 1 2 2 0\n"
             "MOVE 1 0 1\n"
             "MOVE 0 1 1\n"
             "MOVE 1 2 1\n"
             "BREAKPOINT 2 c\n"
             "SERVE 2 2 2 0\n"
             "MOVE 2 0 2\n");

    std::ostringstream split;
    write_trace(split, run_split(t, dfs_order(t), Realization{{2, 2}, 3}));
    CHECK(split.str()
          == "MOVE 0 1 1\n"
             "SERVE 1 2 3 1\n"
             "MOVE 1 2 1\n"
             "BREAKPOINT 2 d\n"
             "SERVE 2 1 1 0\n"
             "MOVE 2 0 2\n"
             "MOVE 0 2 2\n"
             "SERVE 2 1 1 0\n"
             "MOVE 2 0 2\n");
}

TEST_CASE("inconsistent realizations are rejected")
{
    const auto t = path_tree(2);
    const auto order = dfs_order(t);
    for (const auto& bad : {Realization{{1}, 1}, Realization{{1, 3}, 1}, Realization{{1, 1}, 0}}) {
        try {
            run_split(t, order, bad);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InconsistentRealization);
        }
        CHECK_THROWS_AS(run_cost(Policy::unsplit, t, order, bad), Error);
    }
}

TEST_CASE("arithmetic_breakpoints")
{
    const std::vector<int> q11{1, 1};
    CHECK(arithmetic_breakpoints(q11, 1, 2) == std::vector<std::size_t>{1});
    CHECK(arithmetic_breakpoints(q11, 2, 2) == std::vector<std::size_t>{2});
    const std::vector<int> q22{2, 2};
    CHECK(arithmetic_breakpoints(q22, 3, 3) == std::vector<std::size_t>{2});
    for (int cap = 1; cap <= 6; ++cap) {
        const std::vector<int> full{cap};
        for (int l = 1; l <= cap; ++l) {
            CHECK(arithmetic_breakpoints(full, l, cap) == std::vector<std::size_t>{1});
        }
    }
}

TEST_CASE("breakpoint_probability_exact")
{
    const std::vector<int> q11{1, 1};
    CHECK(breakpoint_probability_exact(q11, 2, 1) == Rational{1, 2});
    const std::vector<int> q22{2, 2};
    CHECK(breakpoint_probability_exact(q22, 3, 2) == Rational{2, 3});
    const std::vector<int> q5{5};
    CHECK(breakpoint_probability_exact(q5, 5, 1) == Rational{1, 1});
    CHECK(Rational::make(4, 6) == Rational{2, 3});
}

TEST_CASE("property: arithmetic condition matches a unit-step load counter")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const int cap = 1 + static_cast<int>(rng() % 8);
        std::vector<int> q(rng() % 9);
        for (auto& x : q) {
            x = 1 + static_cast<int>(rng() % cap);
        }
        for (int l = 1; l <= cap; ++l) {
            REQUIRE(arithmetic_breakpoints(q, l, cap) == treevrpsd::testing::unit_step_breakpoints(q, l, cap));
        }
    }
}

TEST_CASE("property: traces are consistent, coupled and match the detour decomposition")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = treevrpsd::testing::random_instance(rng, 7, 6);
        const auto& t = inst.tree;
        const auto order = dfs_order(t);
        for (int rep = 0; rep < 5; ++rep) {
            std::mt19937_64 draw(rng());
            Realization r = sample_realization(inst.demands, draw);
            for (int l = 1; l <= t.capacity(); ++l) {
                r.initial_load = l;
                const auto split = run_split(t, order, r);
                const auto unsplit = run_unsplit(t, order, r);
                check_trace(t, order, r, split);
                check_trace(t, order, r, unsplit);

                const auto q = in_order(order, r);
                const auto expected_bps = positions_to_vertices(order, arithmetic_breakpoints(q, l, t.capacity()));
                REQUIRE(split.breakpoint_vertices() == expected_bps);
                REQUIRE(split.breakpoints == unsplit.breakpoints);
                REQUIRE(split.loads_after_customer == unsplit.loads_after_customer);

                REQUIRE(close(split.total_length, treevrpsd::testing::decomposed_cost(t, order, r, false)));
                REQUIRE(close(unsplit.total_length, treevrpsd::testing::decomposed_cost(t, order, r, true)));
                REQUIRE(split.total_length == run_cost(Policy::split, t, order, r));
                REQUIRE(unsplit.total_length == run_cost(Policy::unsplit, t, order, r));

                double split_cap = 2.0 * t.total_length();
                double unsplit_cap = split_cap;
                for (const Vertex v : expected_bps) {
                    split_cap += 2.0 * t.depot_distance(v);
                    unsplit_cap += 4.0 * t.depot_distance(v);
                }
                REQUIRE(split.total_length >= 2.0 * t.total_length() - 1e-9);
                REQUIRE(split.total_length <= split_cap + 1e-9);
                REQUIRE(unsplit.total_length <= unsplit_cap + 1e-9);
                REQUIRE(split.total_length <= unsplit.total_length + 1e-9);
            }
        }
    }
}
