#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/config.hpp"
#include "fc/report/overhead.hpp"

namespace fc::report {

namespace fs = std::filesystem;

struct LedgerRow {
    std::string target;
    std::string checker_id;
    double wall_time_s = 0.0;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    std::uint64_t calls = 0;
    int attempts = 0;
    std::string final_status;
};

struct Aggregates {
    std::size_t targets = 0;
    double median_wall_time_s = 0.0;
    double median_input_tokens = 0.0;
    double median_output_tokens = 0.0;
    double median_attempts = 0.0;
    double total_wall_time_s = 0.0;
    std::uint64_t total_input_tokens = 0;
    std::uint64_t total_output_tokens = 0;
    std::uint64_t total_calls = 0;
    std::map<std::string, std::size_t> status_counts;
    double cost = 0.0;
    std::string currency;

    nlohmann::json to_json(bool include_wall_times) const;
};

// Median of an unsorted sample; 0 for an empty one.
double median(std::vector<double> xs);

// Per-target rows plus the last overhead measurement. Aggregates are always
// recomputed from the rows. ledger.json carries no wall times so repeated
// deterministic runs compare byte-for-byte; timings.json holds them.
class RunLedger {
public:
    void upsert(LedgerRow row);  // keyed by target
    const std::vector<LedgerRow>& rows() const { return rows_; }

    void set_overhead(OverheadRecord record) { overhead_ = std::move(record); }
    const std::optional<OverheadRecord>& overhead() const { return overhead_; }

    Aggregates aggregates(const Pricing& pricing) const;

    nlohmann::json ledger_json(const Pricing& pricing) const;
    nlohmann::json timings_json(const Pricing& pricing) const;

    void save(const fs::path& dir, const Pricing& pricing) const;
    // Missing files load as an empty ledger.
    static RunLedger load(const fs::path& dir);

private:
    std::vector<LedgerRow> rows_;  // sorted by target
    std::optional<OverheadRecord> overhead_;
};

}  // namespace fc::report
