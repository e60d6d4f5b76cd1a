#include "support/oracles.hpp"

#include "treevrpsd/error.hpp"
#include "treevrpsd/instance_io.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace treevrpsd;

namespace {

const char* const kE1 = R"({
  "name": "E1",
  "capacity": 2,
  "edges": [
    [0, 1, 1.0],
    [1, 2, 1.0]
  ],
  "demands": [
    {"node": 1, "pmf": {"1": 1.0}},
    {"node": 2, "pmf": {"1": 1.0}}
  ]
}
)";

Error parse_error(const std::string& text)
{
    try {
        parse_instance(text);
    } catch (const Error& e) {
        return e;
    }
    FAIL("document accepted");
    return Error(ErrorCode::BadParams, "");
}

std::string read(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("parse E1")
{
    const auto inst = parse_instance(kE1);
    CHECK(inst.name == "E1");
    CHECK(inst.tree.capacity() == 2);
    CHECK(inst.tree.customer_count() == 2);
    CHECK(inst.tree.parent(2) == 1);
    CHECK(inst.demands.pmf(1) == DemandPMF::point_mass(1, 2));
    CHECK(inst.demands.pmf(2) == DemandPMF::point_mass(1, 2));
    CHECK(serialize_instance(inst) == kE1);
}

TEST_CASE("bundled corpus E1 is the canonical document")
{
    CHECK(read(std::string(TREEVRPSD_CORPUS_DIR) + "/E1.json") == kE1);
}

TEST_CASE("parse errors carry codes and field paths")
{
    auto e = parse_error(R"({"name":"x","capacity":2,"edges":[[0,1,1.0]],
                             "demands":[{"node":1,"pmf":{"1":0.5,"2":0.4}}]})");
    CHECK(e.code() == ErrorCode::NotNormalized);
    CHECK(std::string(e.what()).find("demands[0].pmf") != std::string::npos);

    e = parse_error(R"({"name":"x","capacity":2,"edges":[[1,0,1.0]],"demands":[{"node":1,"pmf":{"1":1}}]})");
    CHECK(e.code() == ErrorCode::CycleOrForest);

    CHECK(parse_error("{\"name\": ").code() == ErrorCode::SyntaxError);
    CHECK(parse_error(R"({"name":"x","capacity":2,"edges":[]})").code() == ErrorCode::SchemaError);
    CHECK(parse_error(R"({"name":"x","capacity":2,"edges":[],"demands":[],"extra":1})").code()
          == ErrorCode::SchemaError);
    CHECK(parse_error(R"({"name":"x","capacity":2,"edges":[[0,1,1.0]],"demands":[]})").code()
          == ErrorCode::SchemaError);
    CHECK(parse_error(R"({"name":"x","capacity":2,"edges":[[0,1]],"demands":[]})").code() == ErrorCode::SchemaError);
    CHECK(parse_error(R"({"name":"x","capacity":2,"edges":[[0,1,1.0]],"demands":[{"node":1,"pmf":{"a":1}}]})")
              .code()
          == ErrorCode::SchemaError);
    CHECK(parse_error(R"({"name":"x","capacity":2,"edges":[[0,1,1.0]],"demands":[{"node":1,"pmf":{"0":1}}]})")
              .code()
          == ErrorCode::MassAtZero);
    CHECK(parse_error(R"({"name":"x","capacity":0,"edges":[],"demands":[]})").code() == ErrorCode::BadCapacity);
    CHECK(parse_error(R"({"name":"x","capacity":2,"edges":[[0,1,-2]],"demands":[]})").code()
          == ErrorCode::NonpositiveLength);
}

TEST_CASE("serialize is canonical and idempotent")
{
    // Edges and pmf keys arrive out of order; 10 sorts after 9 numerically.
    const auto inst = parse_instance(R"({"demands":[{"pmf":{"10":0.5,"9":0.5},"node":2},{"node":1,"pmf":{"1":1}}],
        "edges":[[0,2,0.1],[0,1,2.5]],"capacity":10,"name":"shuffled"})");
    const auto text = serialize_instance(inst);
    CHECK(text.find(R"({"node": 2, "pmf": {"9": 0.5, "10": 0.5}})") != std::string::npos);
    CHECK(text.find("[0, 1, 2.5],\n    [0, 2, 0.1]") != std::string::npos);
    CHECK(serialize_instance(parse_instance(text)) == text);

    const auto empty = parse_instance(R"({"name":"empty","capacity":3,"edges":[],"demands":[]})");
    CHECK(serialize_instance(parse_instance(serialize_instance(empty))) == serialize_instance(empty));
}

TEST_CASE("property: generated instances round-trip exactly")
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = treevrpsd::testing::random_instance(rng, 15, 9);
        const auto text = serialize_instance(inst);
        const auto back = parse_instance(text);
        CHECK(back.demands == inst.demands);
        const auto a = inst.tree.edges();
        const auto b = back.tree.edges();
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].parent == b[i].parent);
            CHECK(a[i].length == b[i].length);
        }
        CHECK(serialize_instance(back) == text);
    }
}

TEST_CASE("generate")
{
    GeneratorParams p;
    p.name = "E1";
    p.n = 2;
    p.capacity = 2;
    p.pmf = parse_pmf_family("det:1");
    p.seed = 7;
    CHECK(serialize_instance(generate(p)) == kE1);

    p.n = 0;
    const auto depot_only = generate(p);
    CHECK(depot_only.tree.customer_count() == 0);

    p.n = 9;
    p.topology = Topology::random_attachment;
    p.pmf = parse_pmf_family("two:*");
    p.length_low = 0.5;
    p.length_high = 2.0;
    p.capacity = 5;
    CHECK(serialize_instance(generate(p)) == serialize_instance(generate(p)));
    p.seed = 8;
    const auto other = serialize_instance(generate(p));
    p.seed = 7;
    CHECK(other != serialize_instance(generate(p)));

    for (const auto topo : {Topology::path, Topology::star, Topology::random_attachment, Topology::caterpillar}) {
        p.topology = topo;
        const auto inst = generate(p);
        for (const auto& e : inst.tree.edges()) {
            CHECK(e.length >= 0.5);
            CHECK(e.length <= 2.0);
            if (topo == Topology::star) {
                CHECK(e.parent == kDepot);
            }
            if (topo == Topology::path) {
                CHECK(e.parent + 1 == e.child);
            }
            if (topo == Topology::caterpillar && e.child > 5) {
                CHECK(e.parent >= 1);
                CHECK(e.parent <= 5);
            }
        }
    }
}

TEST_CASE("generator parameter validation")
{
    GeneratorParams p;
    p.n = -1;
    CHECK_THROWS_AS(generate(p), Error);
    p.n = 2;
    p.capacity = 2;
    p.pmf = parse_pmf_family("det:3");
    CHECK_THROWS_AS(generate(p), Error);
    p.pmf = parse_pmf_family("unif:1-2");
    p.length_low = 0.0;
    CHECK_THROWS_AS(generate(p), Error);

    CHECK_THROWS_AS(parse_pmf_family("det"), Error);
    CHECK_THROWS_AS(parse_pmf_family("geom:3"), Error);
    CHECK_THROWS_AS(parse_pmf_family("unif:3-1"), Error);
    CHECK_THROWS_AS(parse_pmf_family("two:1,1.5,2"), Error);
    CHECK_THROWS_AS(parse_pmf_family("two:2,0.5,2"), Error);
    CHECK_THROWS_AS(parse_topology("ring"), Error);

    const auto two = parse_pmf_family("two:1,0.25,3");
    CHECK(two.low == 1);
    CHECK(two.high == 3);
    CHECK(two.p_low == 0.25);
    CHECK(to_string(two) == "two:1,0.25,3");
    CHECK(to_string(parse_pmf_family("unif:*")) == "unif:*");
}
