#include "fc/report/overhead.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fc/error.hpp"
#include "fc/instrument/instrumenter.hpp"
#include "fc/util/fs.hpp"

namespace fc::report {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) {
        return 0.0;
    }
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

nlohmann::json OverheadRecord::to_json() const {
    return {{"repeat", repeat},
            {"test_files", test_files},
            {"baseline_s", baseline_s},
            {"checked_s", checked_s},
            {"baseline_mean_s", baseline_mean},
            {"checked_mean_s", checked_mean},
            {"relative_overhead", relative},
            {"noise_bound", noise_bound},
            {"baseline_spread", baseline_spread},
            {"within_noise", within_noise()},
            {"caveat", kOverheadCaveat}};
}

OverheadRecord OverheadRecord::from_json(const nlohmann::json& j) {
    OverheadRecord r;
    r.repeat = j.value("repeat", 0);
    r.test_files = j.value("test_files", std::vector<std::string>{});
    r.baseline_s = j.value("baseline_s", std::vector<double>{});
    r.checked_s = j.value("checked_s", std::vector<double>{});
    r.baseline_mean = j.value("baseline_mean_s", 0.0);
    r.checked_mean = j.value("checked_mean_s", 0.0);
    r.relative = j.value("relative_overhead", 0.0);
    r.noise_bound = j.value("noise_bound", 0.0);
    r.baseline_spread = j.value("baseline_spread", 0.0);
    return r;
}

OverheadRecord summarize_overhead(std::vector<double> baseline_s, std::vector<double> checked_s, double noise_bound) {
    if (baseline_s.empty() || baseline_s.size() != checked_s.size()) {
        throw std::invalid_argument("overhead needs equally many baseline and checked samples");
    }
    OverheadRecord r;
    r.repeat = static_cast<int>(baseline_s.size());
    r.baseline_mean = mean(baseline_s);
    r.checked_mean = mean(checked_s);
    r.relative = r.baseline_mean > 0.0 ? r.checked_mean / r.baseline_mean - 1.0 : 0.0;
    r.noise_bound = noise_bound;
    const auto [lo, hi] = std::minmax_element(baseline_s.begin(), baseline_s.end());
    r.baseline_spread = r.baseline_mean > 0.0 ? (*hi - *lo) / r.baseline_mean : 0.0;
    r.baseline_s = std::move(baseline_s);
    r.checked_s = std::move(checked_s);
    return r;
}

OverheadRecord measure_overhead(const subject::SubjectProject& project,
                                const std::vector<pipeline::CheckerArtifact>& checkers,
                                const runner::TestRunner& runner, int repeat, double noise_bound,
                                const fs::path& workdir, const std::string& on_violation) {
    if (repeat < 1) {
        throw DomainError("overhead needs --repeat >= 1");
    }
    if (checkers.empty()) {
        throw DomainError("overhead needs at least one checker");
    }
    std::set<std::string> files;
    for (const auto& c : checkers) {
        const auto* t = project.test(c.target);
        files.insert(t != nullptr ? t->file : c.target.substr(0, c.target.find("::")));
    }
    const std::vector<std::string> test_files(files.begin(), files.end());

    const auto plain = workdir / "plain";
    const auto checked = workdir / "checked";
    util::reset_directory(plain);
    auto excluded = util::default_excluded_dirs();
    excluded.insert(excluded.end(), project.config.exclude_dirs.begin(), project.config.exclude_dirs.end());
    util::copy_tree(project.root, plain, excluded, {fs::absolute(workdir)});
    auto plan = instrument::InstrumentationPlan::build(checkers, project, checked, on_violation);
    instrument::instrument(project, plan);

    const std::chrono::milliseconds timeout(static_cast<long long>(project.config.timeout_seconds) * 1000);
    std::vector<double> base_s;
    std::vector<double> check_s;
    for (int i = 0; i < repeat; ++i) {
        const auto b = runner.run(runner::RunRequest{plain, test_files, timeout, {}, {}});
        if (!b.ok()) {
            throw DomainError("baseline run failed:\n" + runner::normalize_log(b.output, plain));
        }
        base_s.push_back(b.wall_time_s);
        const auto c = runner.run(runner::RunRequest{checked, test_files, timeout, {}, {}});
        if (!c.ok()) {
            throw DomainError("instrumented run failed:\n" + runner::normalize_log(c.output, checked));
        }
        check_s.push_back(c.wall_time_s);
    }
    auto record = summarize_overhead(std::move(base_s), std::move(check_s), noise_bound);
    record.test_files = test_files;
    return record;
}

}  // namespace fc::report
