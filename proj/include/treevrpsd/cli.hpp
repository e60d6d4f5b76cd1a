#pragma once

#include "treevrpsd/evaluator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace treevrpsd::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kRuntime = 1, kUsage = 2, kResourceLimit = 3 };

/// Runs one subcommand (`gen`, `bounds`, `simulate`, `evaluate`, `report`).
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Enumeration cap, honouring TREEVRPSD_ENUM_LIMIT. Throws BadParams on a
/// malformed value.
std::uint64_t enum_limit_from_env();

/// Column order of report and evaluate CSV output.
const std::vector<std::string>& csv_columns();

struct ReportRow {
    EvalReport report;
    std::optional<double> clairvoyant_lb;
    std::optional<double> sharpened_ratio;
};

std::string csv_row(const ReportRow& row);
std::string report_json(const EvalReport& report);

struct ReportOptions {
    std::filesystem::path corpus_dir;
    std::filesystem::path out_csv;
    std::uint64_t seed = 0;
    std::uint64_t samples = 10'000;
    std::uint64_t enum_limit = kDefaultEnumLimit;
};

/// Evaluates every `*.json` in the corpus under both policies and writes the
/// CSV plus `<stem>_ratio_hist.csv` next to it. Failing instances are listed on
/// `err` after the rest are processed, and the result is then kRuntime.
int run_report(const ReportOptions& options, std::ostream& err);

} // namespace treevrpsd::cli
