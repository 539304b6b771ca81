#include "fc/report/ledger.hpp"

#include <algorithm>

#include "fc/util/fs.hpp"

namespace fc::report {

double median(std::vector<double> xs) {
    if (xs.empty()) {
        return 0.0;
    }
    std::sort(xs.begin(), xs.end());
    const auto n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

nlohmann::json Aggregates::to_json(bool include_wall_times) const {
    nlohmann::json j{{"targets", targets},
                     {"median_input_tokens", median_input_tokens},
                     {"median_output_tokens", median_output_tokens},
                     {"median_attempts", median_attempts},
                     {"total_input_tokens", total_input_tokens},
                     {"total_output_tokens", total_output_tokens},
                     {"total_calls", total_calls},
                     {"status_counts", status_counts},
                     {"cost", cost},
                     {"currency", currency}};
    if (include_wall_times) {
        j["median_wall_time_s"] = median_wall_time_s;
        j["total_wall_time_s"] = total_wall_time_s;
    }
    return j;
}

void RunLedger::upsert(LedgerRow row) {
    const auto it = std::lower_bound(rows_.begin(), rows_.end(), row.target,
                                     [](const LedgerRow& r, const std::string& t) { return r.target < t; });
    if (it != rows_.end() && it->target == row.target) {
        *it = std::move(row);
    } else {
        rows_.insert(it, std::move(row));
    }
}

Aggregates RunLedger::aggregates(const Pricing& pricing) const {
    Aggregates a;
    a.targets = rows_.size();
    a.currency = pricing.currency;
    std::vector<double> wall, in, out, att;
    for (const auto& r : rows_) {
        wall.push_back(r.wall_time_s);
        in.push_back(static_cast<double>(r.input_tokens));
        out.push_back(static_cast<double>(r.output_tokens));
        att.push_back(r.attempts);
        a.total_wall_time_s += r.wall_time_s;
        a.total_input_tokens += r.input_tokens;
        a.total_output_tokens += r.output_tokens;
        a.total_calls += r.calls;
        ++a.status_counts[r.final_status];
    }
    a.median_wall_time_s = median(wall);
    a.median_input_tokens = median(in);
    a.median_output_tokens = median(out);
    a.median_attempts = median(att);
    a.cost = pricing.cost(a.total_input_tokens, a.total_output_tokens);
    return a;
}

nlohmann::json RunLedger::ledger_json(const Pricing& pricing) const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rows_) {
        rows.push_back({{"target", r.target},
                        {"checker_id", r.checker_id},
                        {"input_tokens", r.input_tokens},
                        {"output_tokens", r.output_tokens},
                        {"calls", r.calls},
                        {"attempts", r.attempts},
                        {"final_status", r.final_status}});
    }
    return {{"rows", rows}, {"aggregates", aggregates(pricing).to_json(false)}};
}

nlohmann::json RunLedger::timings_json(const Pricing& pricing) const {
    nlohmann::json rows = nlohmann::json::object();
    for (const auto& r : rows_) {
        rows[r.target] = r.wall_time_s;
    }
    const auto agg = aggregates(pricing);
    nlohmann::json j{{"wall_time_s", rows},
                     {"median_wall_time_s", agg.median_wall_time_s},
                     {"total_wall_time_s", agg.total_wall_time_s}};
    j["overhead"] = overhead_ ? overhead_->to_json() : nlohmann::json(nullptr);
    return j;
}

void RunLedger::save(const fs::path& dir, const Pricing& pricing) const {
    util::write_file(dir / "ledger.json", ledger_json(pricing).dump(2) + "\n");
    util::write_file(dir / "timings.json", timings_json(pricing).dump(2) + "\n");
}

RunLedger RunLedger::load(const fs::path& dir) {
    RunLedger ledger;
    if (fs::exists(dir / "ledger.json")) {
        const auto j = nlohmann::json::parse(util::read_file(dir / "ledger.json"));
        for (const auto& r : j.value("rows", nlohmann::json::array())) {
            LedgerRow row;
            row.target = r.at("target").get<std::string>();
            row.checker_id = r.value("checker_id", "");
            row.input_tokens = r.value("input_tokens", std::uint64_t{0});
            row.output_tokens = r.value("output_tokens", std::uint64_t{0});
            row.calls = r.value("calls", std::uint64_t{0});
            row.attempts = r.value("attempts", 0);
            row.final_status = r.value("final_status", "");
            ledger.upsert(std::move(row));
        }
    }
    if (fs::exists(dir / "timings.json")) {
        const auto t = nlohmann::json::parse(util::read_file(dir / "timings.json"));
        const auto wall = t.value("wall_time_s", nlohmann::json::object());
        for (auto& row : ledger.rows_) {
            if (wall.contains(row.target)) {
                row.wall_time_s = wall[row.target].get<double>();
            }
        }
        if (t.contains("overhead") && t["overhead"].is_object()) {
            ledger.overhead_ = OverheadRecord::from_json(t["overhead"]);
        }
    }
    return ledger;
}

}  // namespace fc::report
