#include "treevrpsd/cli.hpp"

#include "treevrpsd/error.hpp"
#include "treevrpsd/instance_io.hpp"
#include "treevrpsd/oracle.hpp"
#include "treevrpsd/policy.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace treevrpsd::cli {

namespace fs = std::filesystem;

namespace {

// Partition oracle work cap: joint vectors times Bell(n) partitions.
constexpr std::uint64_t kPartitionBudget = 20'000'000;
constexpr std::array<std::uint64_t, 11> kBell = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};

std::string number(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

int exit_code_for(const Error& e)
{
    return e.code() == ErrorCode::TooLarge ? kResourceLimit : kUsage;
}

/// Unsplit prefers the partition oracle; split, and anything over budget, falls back to the edge bound.
std::optional<double> clairvoyant_for(const Instance& inst, Policy policy, std::uint64_t limit)
{
    const std::uint64_t joint = inst.demands.joint_size();
    if (joint > limit) {
        return std::nullopt;
    }
    const std::size_t n = inst.tree.customer_count();
    auto mode = ClairvoyantMode::edge;
    if (policy == Policy::unsplit && n <= kMaxPartitionCustomers && joint <= kPartitionBudget / kBell[n]) {
        mode = ClairvoyantMode::partition;
    }
    return expected_clairvoyant_lb(inst.tree, inst.demands, mode, limit);
}

std::string histogram_csv(const std::vector<ReportRow>& rows)
{
    constexpr int kBins = 30;
    constexpr double kPerUnit = 10.0;
    std::map<Policy, std::array<std::uint64_t, kBins + 1>> counts;
    counts[Policy::split] = {};
    counts[Policy::unsplit] = {};
    for (const auto& row : rows) {
        const double r = row.report.ratio_vs_lb;
        const int bin = std::clamp(static_cast<int>(std::floor(r * kPerUnit)), 0, kBins);
        ++counts[row.report.policy][bin];
    }
    std::ostringstream out;
    out << "policy,bin_low,bin_high,count\n";
    for (const auto& [policy, bins] : counts) {
        for (int b = 0; b <= kBins; ++b) {
            out << to_string(policy) << ',' << number(b / kPerUnit) << ','
                << (b == kBins ? std::string("inf") : number((b + 1) / kPerUnit)) << ',' << bins[b] << '\n';
        }
    }
    return out.str();
}

fs::path histogram_path(const fs::path& csv)
{
    fs::path p = csv;
    p.replace_filename(csv.stem().string() + "_ratio_hist.csv");
    return p;
}

std::string csv_header()
{
    std::string line;
    for (const auto& c : csv_columns()) {
        line += (line.empty() ? "" : ",") + c;
    }
    return line + "\n";
}

} // namespace

std::uint64_t enum_limit_from_env()
{
    const char* raw = std::getenv("TREEVRPSD_ENUM_LIMIT");
    if (raw == nullptr || *raw == '\0') {
        return kDefaultEnumLimit;
    }
    const std::string_view text(raw);
    std::uint64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || value == 0) {
        throw Error(ErrorCode::BadParams, "TREEVRPSD_ENUM_LIMIT must be a positive integer, got '" + std::string(text) + "'");
    }
    return value;
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> columns = {
        "instance",  "policy",     "mode",        "expected_cost", "tour_floor",     "bertsimas",
        "combined_lb", "formula_ub", "ratio_vs_lb", "ub_respected",  "clairvoyant_lb", "sharpened_ratio"};
    return columns;
}

std::string csv_row(const ReportRow& row)
{
    const auto& r = row.report;
    std::ostringstream out;
    // Instance names are written verbatim unless they need quoting.
    std::string name = r.instance_id;
    if (name.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (const char c : name) {
            quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        name = quoted + "\"";
    }
    out << name << ',' << to_string(r.policy) << ',' << to_string(r.mode) << ',' << number(r.expected_cost) << ','
        << number(r.bounds.tour_floor) << ',' << number(r.bounds.bertsimas) << ',' << number(r.bounds.combined_lb)
        << ',' << number(r.formula_ub) << ',' << number(r.ratio_vs_lb) << ',' << (r.ub_respected ? "true" : "false")
        << ',' << (row.clairvoyant_lb ? number(*row.clairvoyant_lb) : "") << ','
        << (row.sharpened_ratio ? number(*row.sharpened_ratio) : "") << '\n';
    return out.str();
}

std::string report_json(const EvalReport& r)
{
    nlohmann::ordered_json j;
    j["instance"] = r.instance_id;
    j["policy"] = to_string(r.policy);
    j["mode"] = to_string(r.mode);
    j["expected_cost"] = r.expected_cost;
    j["bounds"] = {{"tour_floor", r.bounds.tour_floor},   {"bertsimas", r.bounds.bertsimas},
                   {"combined_lb", r.bounds.combined_lb}, {"split_ub", r.bounds.split_ub},
                   {"unsplit_ub", r.bounds.unsplit_ub}};
    j["ratio_vs_lb"] = r.ratio_vs_lb;
    j["formula_ub"] = r.formula_ub;
    j["ub_respected"] = r.ub_respected;
    if (r.estimate) {
        const auto& e = *r.estimate;
        j["estimate"] = {{"mean", e.mean},         {"stderr", e.std_error}, {"ci95_low", e.ci95_low},
                         {"ci95_high", e.ci95_high}, {"samples", e.samples},  {"seed", e.seed}};
    }
    return j.dump() + "\n";
}

int run_report(const ReportOptions& options, std::ostream& err)
{
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(options.corpus_dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    if (ec) {
        err << "error: cannot list " << options.corpus_dir << ": " << ec.message() << '\n';
        return kRuntime;
    }
    std::sort(files.begin(), files.end());

    std::vector<ReportRow> rows;
    std::vector<std::string> failures;
    for (const auto& file : files) {
        try {
            const Instance inst = parse_instance(read_file(file));
            for (const Policy policy : {Policy::split, Policy::unsplit}) {
                EvalOptions eval;
                eval.instance_id = inst.name;
                eval.seed = options.seed;
                eval.samples = options.samples;
                eval.enum_limit = options.enum_limit;
                eval.mode = exact_enumeration_size(inst.demands) <= options.enum_limit ? EvalMode::exact
                                                                                       : EvalMode::monte_carlo;
                ReportRow row;
                row.report = evaluate(inst.tree, inst.demands, policy, eval);
                row.clairvoyant_lb = clairvoyant_for(inst, policy, options.enum_limit);
                if (row.clairvoyant_lb) {
                    row.sharpened_ratio =
                        *row.clairvoyant_lb > 0.0 ? row.report.expected_cost / *row.clairvoyant_lb : 1.0;
                }
                rows.push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            failures.push_back(file.filename().string() + ": " + e.what());
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.report.instance_id != b.report.instance_id) {
            return a.report.instance_id < b.report.instance_id;
        }
        return a.report.policy < b.report.policy;
    });

    std::string csv = csv_header();
    for (const auto& row : rows) {
        csv += csv_row(row);
    }
    try {
        write_file(options.out_csv, csv);
        write_file(histogram_path(options.out_csv), histogram_csv(rows));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    if (!failures.empty()) {
        err << failures.size() << " instance(s) failed:\n";
        for (const auto& f : failures) {
            err << "  " << f << '\n';
        }
        return kRuntime;
    }
    return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Randomized a priori routing with stochastic demands on trees", "treevrpsd"};
    app.require_subcommand(1);

    // gen
    GeneratorParams gen;
    std::string gen_topology = "path";
    std::string gen_pmf = "det:1";
    std::string gen_out;
    std::string gen_name;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance document");
    gen_cmd->add_option("--n", gen.n, "Number of customers")->required()->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--capacity", gen.capacity, "Vehicle capacity Q")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--topology", gen_topology, "path|star|random-attachment|caterpillar")
        ->check(CLI::IsMember({"path", "star", "random-attachment", "caterpillar"}));
    gen_cmd->add_option("--pmf", gen_pmf, "det:<k> | unif:<lo>-<hi> | two:<k1>,<p1>,<k2> (or <family>:*)");
    gen_cmd->add_option("--length-low", gen.length_low, "Smallest edge length")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--length-high", gen.length_high, "Largest edge length")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "Generator seed");
    gen_cmd->add_option("--name", gen_name, "Instance name (defaults to the output file stem)");
    gen_cmd->add_option("--out", gen_out, "Output path")->required();

    // bounds
    std::string bounds_instance;
    auto* bounds_cmd = app.add_subcommand("bounds", "Print the lower and upper bound formulas");
    bounds_cmd->add_option("--instance", bounds_instance)->required();

    // simulate
    std::string sim_instance;
    std::string sim_policy = "split";
    std::uint64_t sim_seed = 0;
    std::vector<int> sim_demands;
    int sim_load = 0;
    auto* sim_cmd = app.add_subcommand("simulate", "Trace one run on a sampled or given realization");
    sim_cmd->add_option("--instance", sim_instance)->required();
    sim_cmd->add_option("--policy", sim_policy)->check(CLI::IsMember({"split", "unsplit"}));
    sim_cmd->add_option("--seed", sim_seed, "Seed for sampling the realization");
    auto* demands_opt = sim_cmd->add_option("--demands", sim_demands, "Demands of customers 1..n")->delimiter(',');
    auto* load_opt = sim_cmd->add_option("--load", sim_load, "Initial load");
    demands_opt->needs(load_opt);
    load_opt->needs(demands_opt);

    // evaluate
    std::string eval_instance;
    std::string eval_policy = "split";
    std::string eval_mode = "exact";
    std::uint64_t eval_samples = 10'000;
    std::uint64_t eval_seed = 0;
    std::string eval_format = "json";
    auto* eval_cmd = app.add_subcommand("evaluate", "Expected cost, bounds and approximation ratio");
    eval_cmd->add_option("--instance", eval_instance)->required();
    eval_cmd->add_option("--policy", eval_policy)->check(CLI::IsMember({"split", "unsplit"}));
    eval_cmd->add_option("--mode", eval_mode)->check(CLI::IsMember({"exact", "mc"}));
    eval_cmd->add_option("--samples", eval_samples)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000}));
    eval_cmd->add_option("--seed", eval_seed);
    eval_cmd->add_option("--format", eval_format)->check(CLI::IsMember({"json", "csv"}));

    // report
    ReportOptions report;
    std::string report_dir;
    std::string report_csv;
    auto* report_cmd = app.add_subcommand("report", "Evaluate a corpus directory into a CSV");
    report_cmd->add_option("--corpus-dir", report_dir)->required();
    report_cmd->add_option("--out-csv", report_csv)->required();
    report_cmd->add_option("--seed", report.seed);
    report_cmd->add_option("--samples", report.samples, "Monte Carlo samples when exact enumeration is too large")
        ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const std::uint64_t limit = enum_limit_from_env();

        if (*gen_cmd) {
            gen.topology = parse_topology(gen_topology);
            gen.pmf = parse_pmf_family(gen_pmf);
            gen.name = gen_name.empty() ? fs::path(gen_out).stem().string() : gen_name;
            const auto text = serialize_instance(generate(gen));
            try {
                write_file(gen_out, text);
            } catch (const std::exception& e) {
                err << "error: " << e.what() << '\n';
                return kRuntime;
            }
            out << gen_out << '\n';
            return kOk;
        }

        if (*report_cmd) {
            report.corpus_dir = report_dir;
            report.out_csv = report_csv;
            report.enum_limit = limit;
            return run_report(report, err);
        }

        // The remaining commands read one instance.
        const std::string& path = *bounds_cmd ? bounds_instance : *sim_cmd ? sim_instance : eval_instance;
        std::string text;
        try {
            text = read_file(path);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kRuntime;
        }
        const Instance inst = parse_instance(text);

        if (*bounds_cmd) {
            const auto b = bound_set(inst.tree, inst.demands);
            nlohmann::ordered_json j;
            j["instance"] = inst.name;
            j["tour_floor"] = b.tour_floor;
            j["bertsimas"] = b.bertsimas;
            j["combined_lb"] = b.combined_lb;
            j["split_ub"] = b.split_ub;
            j["unsplit_ub"] = b.unsplit_ub;
            out << j.dump() << '\n';
            return kOk;
        }

        if (*sim_cmd) {
            Realization r;
            if (!sim_demands.empty()) {
                r.demands = sim_demands;
                r.initial_load = sim_load;
            } else {
                std::mt19937_64 rng(replication_seed(sim_seed, 0));
                r = sample_realization(inst.demands, rng);
            }
            const auto trace = run_policy(parse_policy(sim_policy), inst.tree, dfs_order(inst.tree), r);
            write_trace(out, trace);
            out << "TOTAL " << number(trace.total_length) << '\n';
            return kOk;
        }

        EvalOptions eval;
        eval.instance_id = inst.name;
        eval.mode = eval_mode == "exact" ? EvalMode::exact : EvalMode::monte_carlo;
        eval.samples = eval_samples;
        eval.seed = eval_seed;
        eval.enum_limit = limit;
        const auto rep = evaluate(inst.tree, inst.demands, parse_policy(eval_policy), eval);
        if (eval_format == "json") {
            out << report_json(rep);
        } else {
            out << csv_header() << csv_row(ReportRow{rep, std::nullopt, std::nullopt});
        }
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::TooLarge) {
            err << "hint: use --mode mc or raise TREEVRPSD_ENUM_LIMIT\n";
        }
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

} // namespace treevrpsd::cli
