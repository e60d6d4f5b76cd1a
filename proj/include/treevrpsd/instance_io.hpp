#pragma once

#include "treevrpsd/demand.hpp"
#include "treevrpsd/tree.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace treevrpsd {

struct Instance {
    std::string name;
    TreeInstance tree;
    DemandModel demands;
};

/// Parses the JSON instance document:
///
///   {"name": str, "capacity": int,
///    "edges": [[parent, child, length], ...],
///    "demands": [{"node": int, "pmf": {"<k>": prob, ...}}, ...]}
///
/// Unknown or missing keys are SchemaError; malformed JSON is SyntaxError;
/// tree and pmf validation errors keep their codes and gain a field path.
Instance parse_instance(std::string_view text);

/// Canonical text: fixed key order, edges by child index, demands by node,
/// pmf keys ascending, shortest round-trip decimals, one edge or customer per line.
std::string serialize_instance(const TreeInstance& tree, const DemandModel& model, std::string_view name);
std::string serialize_instance(const Instance& instance);

enum class Topology { path, star, random_attachment, caterpillar };

std::string_view to_string(Topology topology) noexcept;
Topology parse_topology(std::string_view text);

/// Per-customer demand family. With `randomized` set the parameters are drawn
/// per customer from the generator instead of taken from the fields.
struct PmfFamily {
    enum class Kind { deterministic, uniform_range, two_point };
    Kind kind = Kind::deterministic;
    bool randomized = false;
    int low = 1;         ///< det value, unif lower end, or two-point first value
    int high = 1;        ///< unif upper end or two-point second value
    double p_low = 1.0;  ///< two-point mass at `low`
};

/// `det:<k>`, `unif:<lo>-<hi>`, `two:<k1>,<p1>,<k2>`, or any family with `*`
/// as its argument for randomized parameters. Throws BadParams.
PmfFamily parse_pmf_family(std::string_view text);
std::string to_string(const PmfFamily& family);

struct GeneratorParams {
    std::string name = "generated";
    long long n = 0;
    int capacity = 1;
    Topology topology = Topology::path;
    double length_low = 1.0;
    double length_high = 1.0;
    PmfFamily pmf;
    std::uint64_t seed = 0;
};

/// Deterministic in `seed`. Random attachment picks each parent uniformly
/// among earlier vertices; a caterpillar has a path spine of ceil(n/2)
/// vertices with the rest hung on random spine vertices.
Instance generate(const GeneratorParams& params);

} // namespace treevrpsd
