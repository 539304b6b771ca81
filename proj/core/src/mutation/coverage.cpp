#include "fc/mutation/coverage.hpp"

#include <nlohmann/json.hpp>

#include "fc/error.hpp"
#include "fc/instrument/shim_templates.hpp"
#include "fc/util/fs.hpp"

namespace fc::mutation {

bool LineCoverage::executed(const std::string& file, int line) const {
    const auto it = hits_.find(file);
    return it != hits_.end() && it->second.count(line) != 0;
}

bool LineCoverage::any_executed(const std::string& file, int first_line, int last_line) const {
    const auto it = hits_.find(file);
    if (it == hits_.end()) {
        return false;
    }
    const auto lo = it->second.lower_bound(first_line);
    return lo != it->second.end() && *lo <= last_line;
}

LineCoverage LineCoverage::parse(const std::string& json_text) {
    std::map<std::string, std::set<int>> hits;
    const auto j = nlohmann::json::parse(json_text);
    for (const auto& [file, lines] : j.items()) {
        auto& set = hits[file];
        for (const auto& l : lines) {
            set.insert(l.get<int>());
        }
    }
    return LineCoverage(std::move(hits));
}

CoveredRun run_with_coverage(const runner::TestRunner& runner, const fs::path& tree,
                             const std::vector<std::string>& test_ids, const fs::path& probe_dir,
                             std::chrono::milliseconds timeout) {
    util::write_file(probe_dir / "sitecustomize.py", instrument::coverage_probe_source());
    const auto out = fs::absolute(probe_dir / "coverage.json");
    std::error_code ec;
    fs::remove(out, ec);

    runner::RunRequest req;
    req.tree = tree;
    req.test_ids = test_ids;
    req.timeout = timeout;
    req.python_path = {fs::absolute(probe_dir)};
    req.env["FC_COVERAGE_ROOT"] = fs::absolute(tree).string();
    req.env["FC_COVERAGE_OUT"] = out.string();

    CoveredRun run;
    run.result = runner.run(req);
    if (!fs::exists(out)) {
        throw InfraError("coverage probe produced no output; is another sitecustomize shadowing it?");
    }
    run.coverage = LineCoverage::parse(util::read_file(out));
    return run;
}

}  // namespace fc::mutation
