#include "fc/report/report.hpp"

#include <map>

#include <fmt/format.h>

#include "fc/pipeline/artifact.hpp"
#include "fc/report/ledger.hpp"
#include "fc/util/fs.hpp"

namespace fc::report {

namespace {

nlohmann::json read_json_or_null(const fs::path& path) {
    if (!fs::exists(path)) {
        return nullptr;
    }
    return nlohmann::json::parse(util::read_file(path));
}

std::string num(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        return "-";
    }
    const auto& v = j[key];
    if (v.is_number_integer() || v.is_number_unsigned()) {
        return std::to_string(v.get<long long>());
    }
    if (v.is_number()) {
        return fmt::format("{:.3f}", v.get<double>());
    }
    return v.dump();
}

}  // namespace

nlohmann::json build_report(const fs::path& work_dir, const Pricing& pricing) {
    nlohmann::json r;
    r["funnel"] = nullptr;
    if (const auto f = read_json_or_null(work_dir / "funnel.json"); f.is_object()) {
        r["funnel"] = f.value("funnel", nlohmann::json(nullptr));
    }
    nlohmann::json checkers = nlohmann::json::array();
    if (fs::exists(work_dir / "checkers")) {
        for (const auto& a : pipeline::load_artifacts(work_dir / "checkers")) {
            checkers.push_back({{"id", a.id},
                                {"target", a.target},
                                {"status", pipeline::status_name(a.status)},
                                {"attempts", a.attempts},
                                {"handled_signatures", a.handled_signatures}});
        }
    }
    r["checkers"] = checkers;
    const auto ledger = RunLedger::load(work_dir);
    r["ledger"] = ledger.ledger_json(pricing);
    r["aggregates_with_time"] = ledger.aggregates(pricing).to_json(true);
    r["overhead"] = ledger.overhead() ? ledger.overhead()->to_json() : nlohmann::json(nullptr);
    const auto cv = read_json_or_null(work_dir / "cross_validation.json");
    r["cross_validation"] = cv.is_object() ? cv.value("cross_validated", nlohmann::json(nullptr)) : nlohmann::json(nullptr);
    r["mutation"] = read_json_or_null(work_dir / "mutation_report.json");
    return r;
}

std::string render_text(const nlohmann::json& report) {
    std::string out;
    out += "== funnel ==\n";
    if (report["funnel"].is_object()) {
        const auto& f = report["funnel"];
        out += fmt::format("{:<16}{:>8}\n{:<16}{:>8}\n{:<16}{:>8}\n{:<16}{:>8}\n", "all", num(f, "all"),
                           "with SUT calls", num(f, "with_sut_calls"), "with assertion", num(f, "with_assert"),
                           "passing", num(f, "passing"));
    } else {
        out += "(not analyzed)\n";
    }

    out += "\n== checkers ==\n";
    const auto& rows = report["ledger"]["rows"];
    if (rows.empty()) {
        out += "(no generation runs)\n";
    } else {
        out += fmt::format("{:<12} {:<16} {:>8} {:>10} {:>10}  {}\n", "checker", "status", "attempts", "in tok",
                           "out tok", "target");
        std::map<std::string, std::string> current;
        for (const auto& c : report["checkers"]) {
            current[c.value("id", "")] = c.value("status", "");
        }
        for (const auto& row : rows) {
            const auto id = row.value("checker_id", "");
            const auto status = current.count(id) != 0 ? current[id] : row.value("final_status", "");
            out += fmt::format("{:<12} {:<16} {:>8} {:>10} {:>10}  {}\n", id, status, row.value("attempts", 0),
                               row.value("input_tokens", 0ULL), row.value("output_tokens", 0ULL),
                               row.value("target", ""));
        }
    }
    const auto& agg = report["aggregates_with_time"];
    out += fmt::format("targets {}  median attempts {}  median wall {}s  total tokens in/out {}/{}  cost {} {}\n",
                       num(agg, "targets"), num(agg, "median_attempts"), num(agg, "median_wall_time_s"),
                       num(agg, "total_input_tokens"), num(agg, "total_output_tokens"), num(agg, "cost"),
                       agg.value("currency", ""));

    out += "\n== cross-validation ==\n";
    if (report["cross_validation"].is_object() && !report["cross_validation"].empty()) {
        std::size_t ok = 0;
        for (const auto& [id, flag] : report["cross_validation"].items()) {
            ok += flag.get<bool>() ? 1 : 0;
            out += fmt::format("{:<12} {}\n", id, flag.get<bool>() ? "cross_validated" : "failed");
        }
        out += fmt::format("{} of {} cross-validated\n", ok, report["cross_validation"].size());
    } else {
        out += "(not run)\n";
    }

    out += "\n== mutation ==\n";
    if (report["mutation"].is_object()) {
        const auto& m = report["mutation"];
        for (const char* key : {"all", "killed_by_target_tests", "survived", "killed_by_checkers", "not_covered",
                                "infra_skipped"}) {
            out += fmt::format("{:<24}{:>8}\n", key, num(m, key));
        }
    } else {
        out += "(not run)\n";
    }

    out += "\n== overhead ==\n";
    if (report["overhead"].is_object()) {
        const auto& o = report["overhead"];
        out += fmt::format("baseline mean {}s  checked mean {}s  relative {}  noise bound {}  repeat {}\n",
                           num(o, "baseline_mean_s"), num(o, "checked_mean_s"), num(o, "relative_overhead"),
                           num(o, "noise_bound"), num(o, "repeat"));
        out += o.value("caveat", "") + "\n";
    } else {
        out += "(not measured)\n";
    }
    return out;
}

}  // namespace fc::report
