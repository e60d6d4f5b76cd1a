#include "treevrpsd/instance_io.hpp"

#include "treevrpsd/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <limits>
#include <optional>
#include <sstream>

namespace treevrpsd {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::SchemaError, where + ": " + what);
}

void require_keys(const json& object, const std::string& where, std::initializer_list<std::string_view> keys)
{
    if (!object.is_object()) {
        schema_error(where, "expected an object");
    }
    for (const auto& key : keys) {
        if (!object.contains(key)) {
            schema_error(where, "missing key '" + std::string(key) + "'");
        }
    }
    for (const auto& [key, value] : object.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            schema_error(where, "unexpected key '" + key + "'");
        }
    }
}

long long integer_field(const json& value, const std::string& where)
{
    if (!value.is_number_integer()) {
        schema_error(where, "expected an integer");
    }
    return value.get<long long>();
}

double number_field(const json& value, const std::string& where)
{
    if (!value.is_number()) {
        schema_error(where, "expected a number");
    }
    return value.get<double>();
}

Vertex vertex_field(const json& value, const std::string& where)
{
    const long long v = integer_field(value, where);
    if (v < 0) {
        throw Error(ErrorCode::UnknownVertex, where + ": negative vertex " + std::to_string(v));
    }
    return static_cast<Vertex>(v);
}

template <typename F>
auto with_context(const std::string& where, F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaError) {
            throw;
        }
        throw Error(e.code(), where + ": " + e.detail());
    }
}

std::string number_text(double x)
{
    return json(x).dump();
}

} // namespace

Instance parse_instance(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SyntaxError, e.what());
    }
    require_keys(doc, "document", {"name", "capacity", "edges", "demands"});

    if (!doc["name"].is_string()) {
        schema_error("name", "expected a string");
    }
    const long long capacity_value = integer_field(doc["capacity"], "capacity");
    if (capacity_value < 1 || capacity_value > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::BadCapacity, "capacity: " + std::to_string(capacity_value));
    }
    const int capacity = static_cast<int>(capacity_value);

    const json& edges_json = doc["edges"];
    if (!edges_json.is_array()) {
        schema_error("edges", "expected an array");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < edges_json.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        const json& e = edges_json[i];
        if (!e.is_array() || e.size() != 3) {
            schema_error(where, "expected [parent, child, length]");
        }
        edges.push_back({vertex_field(e[0], where + "[0]"), vertex_field(e[1], where + "[1]"),
                         number_field(e[2], where + "[2]")});
    }
    TreeInstance tree = with_context("edges", [&] { return TreeInstance::build(edges, capacity); });

    const json& demands_json = doc["demands"];
    if (!demands_json.is_array()) {
        schema_error("demands", "expected an array");
    }
    const std::size_t n = tree.customer_count();
    std::vector<std::optional<DemandPMF>> pmfs(n);
    for (std::size_t i = 0; i < demands_json.size(); ++i) {
        const std::string where = "demands[" + std::to_string(i) + "]";
        const json& d = demands_json[i];
        require_keys(d, where, {"node", "pmf"});
        const Vertex node = vertex_field(d["node"], where + ".node");
        if (node == kDepot || node > n) {
            throw Error(ErrorCode::UnknownVertex, where + ".node: no customer " + std::to_string(node));
        }
        if (pmfs[node - 1]) {
            schema_error(where + ".node", "customer " + std::to_string(node) + " listed twice");
        }
        const json& pmf = d["pmf"];
        if (!pmf.is_object()) {
            schema_error(where + ".pmf", "expected an object");
        }
        std::vector<PmfEntry> entries;
        for (const auto& [key, value] : pmf.items()) {
            const std::string key_where = where + ".pmf[\"" + key + "\"]";
            int k = 0;
            const auto res = std::from_chars(key.data(), key.data() + key.size(), k);
            if (res.ec != std::errc{} || res.ptr != key.data() + key.size() || key.empty()) {
                schema_error(key_where, "demand keys must be integers");
            }
            entries.push_back({k, number_field(value, key_where)});
        }
        pmfs[node - 1] = with_context(where + ".pmf", [&] { return DemandPMF::make(entries, capacity); });
    }
    std::vector<DemandPMF> per_customer;
    per_customer.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!pmfs[i]) {
            schema_error("demands", "customer " + std::to_string(i + 1) + " has no pmf");
        }
        per_customer.push_back(*pmfs[i]);
    }
    return Instance{doc["name"].get<std::string>(), std::move(tree), DemandModel(std::move(per_customer), capacity)};
}

std::string serialize_instance(const TreeInstance& tree, const DemandModel& model, std::string_view name)
{
    std::ostringstream out;
    out << "{\n";
    out << "  \"name\": " << json(std::string(name)).dump() << ",\n";
    out << "  \"capacity\": " << tree.capacity() << ",\n";
    const auto edges = tree.edges();
    out << "  \"edges\": [";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out << (i == 0 ? "\n" : ",\n") << "    [" << edges[i].parent << ", " << edges[i].child << ", "
            << number_text(edges[i].length) << "]";
    }
    out << (edges.empty() ? "],\n" : "\n  ],\n");
    out << "  \"demands\": [";
    for (Vertex v = 1; v <= model.customer_count(); ++v) {
        out << (v == 1 ? "\n" : ",\n") << "    {\"node\": " << v << ", \"pmf\": {";
        bool first = true;
        for (const auto& [k, p] : model.pmf(v).support()) {
            out << (first ? "" : ", ") << '"' << k << "\": " << number_text(p);
            first = false;
        }
        out << "}}";
    }
    out << (model.customer_count() == 0 ? "]\n" : "\n  ]\n");
    out << "}\n";
    return out.str();
}

std::string serialize_instance(const Instance& instance)
{
    return serialize_instance(instance.tree, instance.demands, instance.name);
}

std::string_view to_string(Topology topology) noexcept
{
    switch (topology) {
    case Topology::path: return "path";
    case Topology::star: return "star";
    case Topology::random_attachment: return "random-attachment";
    case Topology::caterpillar: return "caterpillar";
    }
    return "path";
}

Topology parse_topology(std::string_view text)
{
    for (const auto t : {Topology::path, Topology::star, Topology::random_attachment, Topology::caterpillar}) {
        if (text == to_string(t)) {
            return t;
        }
    }
    throw Error(ErrorCode::BadParams, "unknown topology '" + std::string(text) + "'");
}

namespace {

int parse_int(std::string_view text, std::string_view spec)
{
    int value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(ErrorCode::BadParams, "bad integer '" + std::string(text) + "' in pmf '" + std::string(spec) + "'");
    }
    return value;
}

double parse_probability(std::string_view text, std::string_view spec)
{
    // std::from_chars for double is fine in libstdc++ 11+.
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || !(value >= 0.0)
        || !(value <= 1.0)) {
        throw Error(ErrorCode::BadParams,
                    "bad probability '" + std::string(text) + "' in pmf '" + std::string(spec) + "'");
    }
    return value;
}

} // namespace

PmfFamily parse_pmf_family(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw Error(ErrorCode::BadParams, "pmf '" + std::string(text) + "' lacks a family prefix");
    }
    const auto kind = text.substr(0, colon);
    const auto args = text.substr(colon + 1);
    PmfFamily family;
    family.randomized = args == "*";
    if (kind == "det") {
        family.kind = PmfFamily::Kind::deterministic;
        if (!family.randomized) {
            family.low = family.high = parse_int(args, text);
        }
    } else if (kind == "unif") {
        family.kind = PmfFamily::Kind::uniform_range;
        if (!family.randomized) {
            const auto dash = args.find('-');
            if (dash == std::string_view::npos) {
                throw Error(ErrorCode::BadParams, "unif needs <lo>-<hi>");
            }
            family.low = parse_int(args.substr(0, dash), text);
            family.high = parse_int(args.substr(dash + 1), text);
            if (family.low > family.high) {
                throw Error(ErrorCode::BadParams, "unif range is empty");
            }
        }
    } else if (kind == "two") {
        family.kind = PmfFamily::Kind::two_point;
        if (!family.randomized) {
            const auto c1 = args.find(',');
            const auto c2 = c1 == std::string_view::npos ? c1 : args.find(',', c1 + 1);
            if (c2 == std::string_view::npos) {
                throw Error(ErrorCode::BadParams, "two needs <k1>,<p1>,<k2>");
            }
            family.low = parse_int(args.substr(0, c1), text);
            family.p_low = parse_probability(args.substr(c1 + 1, c2 - c1 - 1), text);
            family.high = parse_int(args.substr(c2 + 1), text);
            if (family.low == family.high) {
                throw Error(ErrorCode::BadParams, "two-point values must differ");
            }
        }
    } else {
        throw Error(ErrorCode::BadParams, "unknown pmf family '" + std::string(kind) + "'");
    }
    return family;
}

std::string to_string(const PmfFamily& family)
{
    switch (family.kind) {
    case PmfFamily::Kind::deterministic:
        return family.randomized ? "det:*" : "det:" + std::to_string(family.low);
    case PmfFamily::Kind::uniform_range:
        return family.randomized ? "unif:*" : "unif:" + std::to_string(family.low) + "-" + std::to_string(family.high);
    case PmfFamily::Kind::two_point:
        return family.randomized ? "two:*"
                                 : "two:" + std::to_string(family.low) + "," + number_text(family.p_low) + ","
                                       + std::to_string(family.high);
    }
    return {};
}

namespace {

int uniform_int(std::mt19937_64& rng, int low, int high)
{
    return std::uniform_int_distribution<int>(low, high)(rng);
}

DemandPMF draw_pmf(const PmfFamily& family, int capacity, std::mt19937_64& rng)
{
    switch (family.kind) {
    case PmfFamily::Kind::deterministic:
        return DemandPMF::point_mass(family.randomized ? uniform_int(rng, 1, capacity) : family.low, capacity);
    case PmfFamily::Kind::uniform_range: {
        int lo = family.low;
        int hi = family.high;
        if (family.randomized) {
            lo = uniform_int(rng, 1, capacity);
            hi = uniform_int(rng, 1, capacity);
            if (lo > hi) {
                std::swap(lo, hi);
            }
        }
        std::vector<PmfEntry> entries;
        const double p = 1.0 / (hi - lo + 1);
        for (int k = lo; k <= hi; ++k) {
            entries.push_back({k, p});
        }
        return DemandPMF::make(entries, capacity);
    }
    case PmfFamily::Kind::two_point: {
        int k1 = family.low;
        int k2 = family.high;
        double p1 = family.p_low;
        if (family.randomized) {
            if (capacity == 1) {
                return DemandPMF::point_mass(1, capacity);
            }
            k1 = uniform_int(rng, 1, capacity - 1);
            k2 = uniform_int(rng, k1 + 1, capacity);
            // Eighths keep the masses exact in binary.
            p1 = uniform_int(rng, 1, 7) / 8.0;
        }
        const PmfEntry entries[] = {{k1, p1}, {k2, 1.0 - p1}};
        return DemandPMF::make(entries, capacity);
    }
    }
    throw Error(ErrorCode::BadParams, "unknown pmf family");
}

} // namespace

Instance generate(const GeneratorParams& params)
{
    if (params.n < 0) {
        throw Error(ErrorCode::BadParams, "n must be non-negative");
    }
    if (params.capacity < 1) {
        throw Error(ErrorCode::BadParams, "capacity must be at least 1");
    }
    if (!(params.length_low > 0.0) || !(params.length_high >= params.length_low) || !std::isfinite(params.length_high)) {
        throw Error(ErrorCode::BadParams, "length range must satisfy 0 < low <= high");
    }
    const auto& f = params.pmf;
    if (!f.randomized) {
        const bool in_range = f.low >= 1 && f.low <= params.capacity
                              && (f.kind == PmfFamily::Kind::deterministic || (f.high >= 1 && f.high <= params.capacity));
        if (!in_range) {
            throw Error(ErrorCode::BadParams, "pmf " + to_string(f) + " lies outside 1.." + std::to_string(params.capacity));
        }
    }

    const auto n = static_cast<std::size_t>(params.n);
    std::mt19937_64 rng(params.seed);
    std::vector<Vertex> parent(n + 1, kDepot);
    const std::size_t spine = (n + 1) / 2;
    for (Vertex v = 1; v <= n; ++v) {
        switch (params.topology) {
        case Topology::path: parent[v] = v - 1; break;
        case Topology::star: parent[v] = kDepot; break;
        case Topology::random_attachment:
            parent[v] = std::uniform_int_distribution<Vertex>(0, v - 1)(rng);
            break;
        case Topology::caterpillar:
            parent[v] = v <= spine ? v - 1 : std::uniform_int_distribution<Vertex>(1, spine)(rng);
            break;
        }
    }
    std::vector<Edge> edges;
    edges.reserve(n);
    for (Vertex v = 1; v <= n; ++v) {
        double length = params.length_low;
        if (params.length_high > params.length_low) {
            length = std::uniform_real_distribution<double>(params.length_low, params.length_high)(rng);
        }
        edges.push_back({parent[v], v, length});
    }
    auto tree = TreeInstance::build(edges, params.capacity);

    std::vector<DemandPMF> pmfs;
    pmfs.reserve(n);
    for (Vertex v = 1; v <= n; ++v) {
        pmfs.push_back(draw_pmf(params.pmf, params.capacity, rng));
    }
    return Instance{params.name, std::move(tree), DemandModel(std::move(pmfs), params.capacity)};
}

} // namespace treevrpsd
